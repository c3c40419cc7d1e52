#include "thermoplate/cli.hpp"

int main(int argc, char** argv) { return thermoplate::cli::run(argc, argv); }

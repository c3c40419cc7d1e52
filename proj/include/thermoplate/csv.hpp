#pragma once

// CSV artifacts. All numbers are written with 17 significant digits, '.' as
// the decimal separator and '\n' line endings, so re-reading a file recovers
// the exact doubles.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "thermoplate/regularity.hpp"
#include "thermoplate/resolvent.hpp"
#include "thermoplate/simulator.hpp"

namespace thermoplate::csv {

inline constexpr const char* kScanHeader = "lambda,resolvent_norm,argmax_sigma,truncated_at,tail_ok";
inline constexpr const char* kWitnessHeader = "n,sigma,lambda,mu_abs,nu_abs,norm_H,growth";
inline constexpr const char* kAbscissaHeader = "sigma,re_root_max,im_root_at_max";
inline constexpr const char* kTraceHeader = "t,energy,theta_dissipation";

std::string format_double(double x);

void write_scan(std::ostream& os, std::span<const ScanRow> rows);
void write_witness(std::ostream& os, std::span<const WitnessRow> rows);
void write_abscissa(std::ostream& os, std::span<const ModeAbscissa> rows);
void write_trace(std::ostream& os, const SimTrace& trace);

/// Readers check the header and field counts; they throw CsvError on mismatch.
std::vector<ScanRow> read_scan(std::istream& is);
std::vector<WitnessRow> read_witness(std::istream& is);
std::vector<ModeAbscissa> read_abscissa(std::istream& is);
SimTrace read_trace(std::istream& is);

}  // namespace thermoplate::csv

#include "thermoplate/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string_view>

#include "thermoplate/errors.hpp"

namespace thermoplate::csv {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw CsvError("malformed number '" + std::string(field) + "'");
  return value;
}

bool parse_bool(std::string_view field) {
  if (field == "true") return true;
  if (field == "false") return false;
  throw CsvError("malformed boolean '" + std::string(field) + "'");
}

// Calls fn(fields) for each data row after verifying the header.
template <typename Fn>
void read_rows(std::istream& is, const char* header, std::size_t fields, Fn&& fn) {
  std::string line;
  if (!std::getline(is, line) || line != header) throw CsvError(std::string("expected header '") + header + "'");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto parts = split(line);
    if (parts.size() != fields) throw CsvError("wrong field count in row '" + line + "'");
    fn(parts);
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_scan(std::ostream& os, std::span<const ScanRow> rows) {
  os << kScanHeader << '\n';
  for (const auto& r : rows)
    os << format_double(r.lambda) << ',' << format_double(r.resolvent_norm) << ','
       << format_double(r.argmax_sigma) << ',' << format_double(r.truncated_at) << ','
       << (r.tail_ok ? "true" : "false") << '\n';
}

void write_witness(std::ostream& os, std::span<const WitnessRow> rows) {
  os << kWitnessHeader << '\n';
  for (const auto& r : rows)
    os << r.n << ',' << format_double(r.sigma) << ',' << format_double(r.lambda_n) << ','
       << format_double(r.mu_abs) << ',' << format_double(r.nu_abs) << ',' << format_double(r.u_norm_H)
       << ',' << format_double(r.growth) << '\n';
}

void write_abscissa(std::ostream& os, std::span<const ModeAbscissa> rows) {
  os << kAbscissaHeader << '\n';
  for (const auto& r : rows)
    os << format_double(r.sigma) << ',' << format_double(r.re_root_max) << ','
       << format_double(r.im_root_at_max) << '\n';
}

void write_trace(std::ostream& os, const SimTrace& trace) {
  os << kTraceHeader << '\n';
  for (std::size_t k = 0; k < trace.times.size(); ++k)
    os << format_double(trace.times[k]) << ',' << format_double(trace.energies[k]) << ','
       << format_double(trace.theta_dissipation[k]) << '\n';
}

std::vector<ScanRow> read_scan(std::istream& is) {
  std::vector<ScanRow> rows;
  read_rows(is, kScanHeader, 5, [&](const auto& f) {
    rows.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]),
                    parse_bool(f[4])});
  });
  return rows;
}

std::vector<WitnessRow> read_witness(std::istream& is) {
  std::vector<WitnessRow> rows;
  read_rows(is, kWitnessHeader, 7, [&](const auto& f) {
    WitnessRow r;
    r.n = static_cast<int>(parse_double(f[0]));
    r.sigma = parse_double(f[1]);
    r.lambda_n = parse_double(f[2]);
    r.mu_abs = parse_double(f[3]);
    r.nu_abs = parse_double(f[4]);
    r.u_norm_H = parse_double(f[5]);
    r.growth = parse_double(f[6]);
    rows.push_back(r);
  });
  return rows;
}

std::vector<ModeAbscissa> read_abscissa(std::istream& is) {
  std::vector<ModeAbscissa> rows;
  read_rows(is, kAbscissaHeader, 3, [&](const auto& f) {
    rows.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
  });
  return rows;
}

SimTrace read_trace(std::istream& is) {
  SimTrace trace;
  read_rows(is, kTraceHeader, 3, [&](const auto& f) {
    trace.times.push_back(parse_double(f[0]));
    trace.energies.push_back(parse_double(f[1]));
    trace.theta_dissipation.push_back(parse_double(f[2]));
  });
  return trace;
}

}  // namespace thermoplate::csv

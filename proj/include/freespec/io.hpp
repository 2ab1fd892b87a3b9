#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freespec/measure.hpp"

namespace freespec {

/// {"kind": "semicircle", "variance": 1}, {"kind": "affine", "scale": s, "shift": t, "base": {...}}, ...
/// A bare string ("arcsine") is accepted for parameterless kinds.
Measure parse_measure(const std::string& json_text);
Measure load_measure(const std::string& path);
/// Canonical form: sorted keys, every parameter present, shortest round-trip numbers.
std::string serialize_measure(const Measure& m);

/// "lo:hi:n" -> linspace(lo, hi, n).
std::vector<double> parse_grid(const std::string& spec);
struct WindowSpec {
  double lo;
  double hi;
};
/// "lo:hi".
WindowSpec parse_window(const std::string& spec);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// First line: "# freespec v<version> seed=<seed> cmd=<cmd>", then the column names.
void write_csv(const std::string& path, const CsvTable& table, std::uint64_t seed, const std::string& cmd);
/// Skips '#' comment lines; the first remaining line names the columns.
CsvTable read_csv(const std::string& path);

}  // namespace freespec

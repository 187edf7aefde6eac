#pragma once

#include <string>
#include <vector>

#include "mosharp/convergence.hpp"

namespace mosharp::cli {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

std::string sha256_hex(const std::string& bytes);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& contents);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& add(double v);
  CsvTable& add(const std::string& v);
  void end_row();
  std::string str() const;

 private:
  std::size_t columns_;
  std::string out_;
  std::size_t in_row_ = 0;
};

/// Columns: epsilon, h, r_min, <value_column>, truncated_mass, target,
/// rel_error, verdict, closure_uncertainty, config_hash. Row k's verdict is the
/// verdict of the sweep stopped after row k.
std::string sweep_csv(const SweepReport& report, const std::string& value_column, int verdict_rows);

}  // namespace mosharp::cli

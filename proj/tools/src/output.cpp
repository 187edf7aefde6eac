#include "output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "mosharp/errors.hpp"

namespace mosharp::cli {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out.flush()) throw std::runtime_error("cannot write '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (const auto& h : header) add(h);
  end_row();
}

CsvTable& CsvTable::add(double v) { return add(format_double(v)); }

CsvTable& CsvTable::add(const std::string& v) {
  if (in_row_ == columns_) throw std::logic_error("CSV row has too many cells");
  if (in_row_ > 0) out_.push_back(',');
  out_ += v;
  ++in_row_;
  return *this;
}

void CsvTable::end_row() {
  if (in_row_ != columns_) throw std::logic_error("CSV row has too few cells");
  out_.push_back('\n');
  in_row_ = 0;
}

std::string CsvTable::str() const { return out_; }

std::string sweep_csv(const SweepReport& report, const std::string& value_column, int verdict_rows) {
  CsvTable t({"epsilon", "h", "r_min", value_column, "truncated_mass", "target", "rel_error", "verdict",
              "closure_uncertainty", "config_hash"});
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    // Verdict of the sweep truncated after this row; the last row carries the overall verdict.
    const std::vector<SweepRow> prefix(report.rows.begin(), report.rows.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    const int k = std::min<int>(verdict_rows, static_cast<int>(prefix.size()));
    const auto& r = report.rows[i];
    t.add(r.epsilon).add(r.h).add(r.r_min).add(r.sharp).add(r.truncated_mass).add(r.target).add(r.rel_error);
    t.add(std::string(sweep_verdict(prefix, report.bound, k) ? "true" : "false"));
    t.add(r.closure_uncertainty).add(report.config_hash);
    t.end_row();
  }
  return t.str();
}

}  // namespace mosharp::cli

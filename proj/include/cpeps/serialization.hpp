#pragma once

// UTF-8 key-value text files shared by parameter sets, dispersions, CTNS data
// and run configurations:
//
//   # comment
//   key = value
//
// Matrices are written row-major as whitespace-separated entries; complex
// entries are `re,im` pairs. Real scalars may omit the imaginary part.
// Numbers use 17 significant digits so a write/read cycle is bit-exact.
//
//   GaussianParams:     D, m, c, Z, A, z, a
//   RationalDispersion: num, den, u0, domain
//   CTNSGaussianData:   D, V, kin, curv, f, fgrad, scale

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpeps/ctns_bridge.hpp"
#include "cpeps/gaussian_core.hpp"

namespace cpeps {

std::string format_double(double x);
std::string format_complex(Complex x);

class KeyValueDoc {
 public:
  void set(std::string key, std::string value);
  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;  // ParseError if missing
  std::string get_or(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key) const;
  long get_int(std::string_view key) const;

  // ConfigError naming the first key not in `allowed`.
  void reject_unknown(std::initializer_list<std::string_view> allowed) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

KeyValueDoc parse_key_value(std::string_view text);
std::string to_text(const KeyValueDoc& doc);

double parse_double(std::string_view token);
Complex parse_complex(std::string_view token);
VectorXc parse_vector(std::string_view value);
MatrixXc parse_matrix(std::string_view value, Index rows, Index cols);

std::string serialize(const GaussianParams& p);
std::string serialize(const RationalDispersion& r);
std::string serialize(const CTNSGaussianData& d);

GaussianParams parse_gaussian_params(std::string_view text);
RationalDispersion parse_rational(std::string_view text);
CTNSGaussianData parse_ctns(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace cpeps

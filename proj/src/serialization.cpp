#include "cpeps/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cpeps {

namespace {

std::string_view strip(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const VectorXc& v) {
  std::string out;
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_complex(v[i]);
  }
  return out;
}

std::string join_rowmajor(const MatrixXc& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (i || j) out += ' ';
      out += format_complex(m(i, j));
    }
  return out;
}

Index require_size(const KeyValueDoc& doc) {
  const long d = doc.get_int("D");
  if (d < 1) throw Error(ErrorKind::ParseError, "D must be >= 1");
  return d;
}

VectorXc parse_sized_vector(const KeyValueDoc& doc, std::string_view key, Index n) {
  VectorXc v = parse_vector(doc.get(key));
  if (v.size() != n) {
    throw Error(ErrorKind::ParseError, std::string(key) + " must have " + std::to_string(n) + " entries");
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex x) { return format_double(x.real()) + "," + format_double(x.imag()); }

void KeyValueDoc::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

bool KeyValueDoc::has(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

const std::string& KeyValueDoc::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw Error(ErrorKind::ParseError, "missing key '" + std::string(key) + "'");
}

std::string KeyValueDoc::get_or(std::string_view key, std::string fallback) const {
  return has(key) ? get(key) : fallback;
}

double KeyValueDoc::get_double(std::string_view key) const { return parse_double(get(key)); }

long KeyValueDoc::get_int(std::string_view key) const {
  const std::string& s = get(key);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::ParseError, "key '" + std::string(key) + "' is not an integer: " + s);
  }
  return v;
}

void KeyValueDoc::reject_unknown(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [k, v] : entries_) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == k;
    if (!ok) throw Error(ErrorKind::ConfigError, "unknown key '" + k + "'");
  }
}

KeyValueDoc parse_key_value(std::string_view text) {
  KeyValueDoc doc;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(strip(line.substr(0, eq)));
    if (key.empty()) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": empty key");
    if (doc.has(key)) throw Error(ErrorKind::ParseError, "duplicate key '" + key + "'");
    doc.set(key, std::string(strip(line.substr(eq + 1))));
  }
  return doc;
}

std::string to_text(const KeyValueDoc& doc) {
  std::string out;
  for (const auto& [k, v] : doc.entries()) out += k + " = " + v + "\n";
  return out;
}

double parse_double(std::string_view token) {
  token = strip(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorKind::ParseError, "not a number: '" + std::string(token) + "'");
  }
  return v;
}

Complex parse_complex(std::string_view token) {
  const auto comma = token.find(',');
  if (comma == std::string_view::npos) return {parse_double(token), 0.0};
  return {parse_double(token.substr(0, comma)), parse_double(token.substr(comma + 1))};
}

VectorXc parse_vector(std::string_view value) {
  const auto tokens = split_ws(value);
  VectorXc v(static_cast<Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) v[static_cast<Index>(i)] = parse_complex(tokens[i]);
  return v;
}

MatrixXc parse_matrix(std::string_view value, Index rows, Index cols) {
  const VectorXc flat = parse_vector(value);
  if (flat.size() != rows * cols) {
    throw Error(ErrorKind::ParseError, "matrix needs " + std::to_string(rows * cols) + " entries, got " +
                                           std::to_string(flat.size()));
  }
  MatrixXc m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = flat[i * cols + j];
  return m;
}

std::string serialize(const GaussianParams& p) {
  validate_shape(p);
  KeyValueDoc doc;
  doc.set("D", std::to_string(p.D()));
  doc.set("m", format_double(p.m));
  doc.set("c", format_double(p.c));
  doc.set("Z", join_rowmajor(p.Z));
  doc.set("A", join_rowmajor(p.A));
  doc.set("z", join(p.z));
  doc.set("a", join(p.a));
  return "# cPEPS Gaussian parameters (complex entries re,im; matrices row-major)\n" + to_text(doc);
}

GaussianParams parse_gaussian_params(std::string_view text) {
  const KeyValueDoc doc = parse_key_value(text);
  doc.reject_unknown({"D", "m", "c", "Z", "A", "z", "a"});
  const Index d = require_size(doc);
  GaussianParams p;
  p.Z = parse_matrix(doc.get("Z"), d, d);
  p.A = parse_matrix(doc.get("A"), d, d);
  p.z = parse_sized_vector(doc, "z", d);
  p.a = parse_sized_vector(doc, "a", d);
  p.c = doc.get_double("c");
  p.m = doc.has("m") ? doc.get_double("m") : 0.0;
  return p;
}

std::string serialize(const RationalDispersion& r) {
  KeyValueDoc doc;
  doc.set("num", join(r.num));
  doc.set("den", join(r.den));
  doc.set("u0", format_double(r.base_point));
  doc.set("domain", format_double(r.domain_max));
  return "# rational dispersion num(u)/den(u), ascending powers of u = k^2\n" + to_text(doc);
}

RationalDispersion parse_rational(std::string_view text) {
  const KeyValueDoc doc = parse_key_value(text);
  doc.reject_unknown({"num", "den", "u0", "domain"});
  const double domain = doc.has("domain") ? doc.get_double("domain") : 1.0;
  const double u0 = doc.has("u0") ? doc.get_double("u0") : 0.0;
  return make_rational(parse_vector(doc.get("num")), parse_vector(doc.get("den")), domain, u0);
}

std::string serialize(const CTNSGaussianData& d) {
  KeyValueDoc doc;
  doc.set("D", std::to_string(d.D()));
  doc.set("scale", format_double(d.scale));
  doc.set("V", join_rowmajor(d.V_quad));
  doc.set("kin", join_rowmajor(d.kinetic));
  doc.set("curv", join_rowmajor(d.curvature));
  doc.set("f", join(d.f_lin));
  doc.set("fgrad", join(d.f_grad));
  return "# Gaussian CTNS data (V: potential, kin: gradient block, curv: laplacian block)\n" + to_text(doc);
}

CTNSGaussianData parse_ctns(std::string_view text) {
  const KeyValueDoc doc = parse_key_value(text);
  doc.reject_unknown({"D", "scale", "V", "kin", "curv", "f", "fgrad"});
  const Index n = require_size(doc);
  CTNSGaussianData d;
  d.V_quad = parse_matrix(doc.get("V"), n, n);
  d.kinetic = parse_matrix(doc.get("kin"), n, n);
  d.curvature = doc.has("curv") ? parse_matrix(doc.get("curv"), n, n) : MatrixXc::Zero(n, n);
  d.f_lin = parse_sized_vector(doc, "f", n);
  d.f_grad = doc.has("fgrad") ? parse_sized_vector(doc, "fgrad", n) : VectorXc::Zero(n);
  d.scale = doc.has("scale") ? doc.get_double("scale") : 1.0;
  return d;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot rename onto " + path.string() + ": " + ec.message());
}

}  // namespace cpeps

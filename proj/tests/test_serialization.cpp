#include <filesystem>
#include <random>

#include "cpeps/approximants.hpp"
#include "cpeps/serialization.hpp"
#include "doctest.h"
#include "random_params.hpp"

using namespace cpeps;

TEST_CASE("number formatting round-trips exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = uni(rng) * std::pow(10.0, i % 40 - 20);
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(parse_complex("1.5,-2") == Complex(1.5, -2.0));
  CHECK(parse_complex("3") == Complex(3.0, 0.0));
  CHECK_THROWS_AS(parse_double("1.5x"), Error);
}

TEST_CASE("key-value documents") {
  const KeyValueDoc doc = parse_key_value("# header\n  a = 1 \n\nb=two words\r\n");
  CHECK(doc.get("a") == "1");
  CHECK(doc.get("b") == "two words");
  CHECK(doc.get_int("a") == 1);
  CHECK_THROWS_WITH_AS(parse_key_value("a = 1\na = 2\n"), doctest::Contains("duplicate"), Error);
  CHECK_THROWS_WITH_AS(parse_key_value("no equals sign\n"), doctest::Contains("ParseError"), Error);
  CHECK_THROWS_WITH_AS(doc.reject_unknown({"a"}), doctest::Contains("ConfigError"), Error);
  CHECK_NOTHROW(doc.reject_unknown({"a", "b"}));
  CHECK_THROWS_AS(doc.get("c"), Error);
}

TEST_CASE("Gaussian parameters round-trip") {
  std::mt19937_64 rng(2);
  for (int D = 1; D <= 4; ++D) {
    GaussianParams p = testing::random_admissible_params(rng, D);
    p.m = 0.75;
    const GaussianParams q = parse_gaussian_params(serialize(p));
    CHECK(q.A == p.A);
    CHECK(q.Z == p.Z);
    CHECK(q.a == p.a);
    CHECK(q.z == p.z);
    CHECK(q.c == p.c);
    CHECK(q.m == p.m);
  }
  CHECK_THROWS_AS(parse_gaussian_params("D = 1\nZ = 1\nA = 1\nz = 0\na = 0\nc = 1\nextra = 3\n"), Error);
  CHECK_THROWS_AS(parse_gaussian_params("D = 2\nZ = 1 0 0\nA = 1 0 0 1\nz = 0 0\na = 0 0\nc = 1\n"), Error);
}

TEST_CASE("rational dispersion and CTNS data round-trip") {
  const RationalDispersion r = pade_sqrt(1.0, 0.5, 3, 9.0);
  const RationalDispersion s = parse_rational(serialize(r));
  CHECK(s.num == r.num);
  CHECK(s.den == r.den);
  CHECK(s.base_point == r.base_point);
  CHECK(s.domain_max == r.domain_max);
  CHECK(s.physical == r.physical);

  std::mt19937_64 rng(3);
  const CTNSGaussianData d = testing::random_ctns(rng, 3);
  const CTNSGaussianData e = parse_ctns(serialize(d));
  CHECK(e.V_quad == d.V_quad);
  CHECK(e.kinetic == d.kinetic);
  CHECK(e.curvature == d.curvature);
  CHECK(e.f_lin == d.f_lin);
  CHECK(e.f_grad == d.f_grad);
  CHECK(e.scale == d.scale);

  // Minimal local data: V, kin, f.
  const CTNSGaussianData local = parse_ctns("D = 1\nV = 0.5\nkin = 1\nf = 0.25\n");
  CHECK(local.curvature(0, 0) == Complex(0.0, 0.0));
  CHECK(local.scale == 1.0);
}

TEST_CASE("atomic file writes") {
  const auto dir = std::filesystem::temp_directory_path() / "cpeps_serialization_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "x.txt";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  CHECK_FALSE(std::filesystem::exists(dir / "x.txt.tmp"));
  CHECK_THROWS_WITH_AS(read_file(dir / "missing.txt"), doctest::Contains("IoError"), Error);
  CHECK_THROWS_AS(write_file_atomic(dir / "no_such_dir" / "y.txt", "z"), Error);
  std::filesystem::remove_all(dir);
}

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <limits>

#include "proxmag/cimg.hpp"
#include "proxmag/core.hpp"
#include "proxmag/linear_operator.hpp"
#include "test_util.hpp"

using namespace proxmag;
using testutil::Rng;

TEST_CASE("decompose examples") {
  SUBCASE("identity") {
    const auto m = decompose(ComplexImage({1, 1, 1}, {cplx{1.0, 0.0}}));
    CHECK(m.magnitude[0] == 1.0);
    CHECK(m.phase[0] == cplx{1.0, 0.0});
  }
  SUBCASE("zero sample gets unit phase") {
    const auto m = decompose(ComplexImage({1, 1, 1}, {cplx{0.0, 0.0}}));
    CHECK(m.magnitude[0] == 0.0);
    CHECK(m.phase[0] == cplx{1.0, 0.0});
  }
  SUBCASE("axis-aligned phases") {
    const auto m = decompose(ComplexImage({1, 1, 2}, {cplx{0.0, 3.0}, cplx{-2.0, 0.0}}));
    CHECK(m.magnitude[0] == doctest::Approx(3.0));
    CHECK(m.magnitude[1] == doctest::Approx(2.0));
    CHECK(std::abs(m.phase[0] - cplx{0.0, 1.0}) < 1e-15);
    CHECK(std::abs(m.phase[1] - cplx{-1.0, 0.0}) < 1e-15);
  }
}

TEST_CASE("non-finite input is rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<cplx> z = {cplx{1.0, 0.0}, cplx{nan, 0.0}};
  CHECK_THROWS_AS((void)decompose(z, Shape{1, 1, 2}), InvalidInput);
  CHECK_THROWS_AS(ComplexImage({1, 1, 2}, z), InvalidInput);
  CHECK_THROWS_AS(ComplexImage({1, 1, 3}, {cplx{1.0}}), InvalidInput);
}

TEST_CASE("recompose examples and shape check") {
  MagPhase m{{1, 1, 2}, {1.0, 2.0}, {cplx{1.0, 0.0}, cplx{0.0, 1.0}}};
  const auto z = recompose(m);
  CHECK(z.data()[0] == cplx{1.0, 0.0});
  CHECK(z.data()[1] == cplx{0.0, 2.0});
  m.magnitude.pop_back();
  CHECK_THROWS_AS((void)recompose(m), InvalidInput);
}

TEST_CASE("decompose/recompose round trip on random images") {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const Shape s{2, 3, 4};
    const ComplexImage z(s, rng.complex_normals(s.size()));
    const MagPhase m = decompose(z);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(m.magnitude[i] >= 0.0);
      CHECK(std::abs(std::abs(m.phase[i]) - 1.0) < 1e-12);
    }
    const auto back = recompose(m);
    CHECK(testutil::rel_diff(back.data(), z.data()) < 1e-12);
  }
}

TEST_CASE("operator norm estimate") {
  SUBCASE("identity") {
    IdentityOperator id({1, 1, 5});
    CHECK(operator_norm_estimate(id, 50, 1) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("diagonal scaling by two") {
    std::vector<cplx> a(25, 0.0);
    for (int i = 0; i < 5; ++i) a[static_cast<std::size_t>(i * 6)] = 2.0;
    DenseOperator d(5, 5, a);
    CHECK(operator_norm_estimate(d, 50, 1) == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("random dense 4x3 against an SVD") {
    Rng rng(3);
    const auto entries = rng.complex_normals(12);
    DenseOperator d(4, 3, entries);
    Eigen::MatrixXcd m(4, 3);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = entries[static_cast<std::size_t>(r * 3 + c)];
    const double sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
    CHECK(std::abs(operator_norm_estimate(d, 500, 5) - sv) < 1e-4);
    CHECK(std::abs(d.norm_estimate() - sv) < 1e-4);
  }
  SUBCASE("zero operator") {
    DenseOperator z(3, 3, std::vector<cplx>(9, 0.0));
    CHECK(operator_norm_estimate(z, 10, 1) == 0.0);
  }
  SUBCASE("deterministic given seed") {
    Rng rng(4);
    DenseOperator d(3, 3, rng.complex_normals(9));
    CHECK(operator_norm_estimate(d, 5, 9) == operator_norm_estimate(d, 5, 9));
  }
  CHECK_THROWS_AS((void)operator_norm_estimate(IdentityOperator({1, 1, 2}), 0, 1), InvalidInput);
}

TEST_CASE("adjoint check") {
  IdentityOperator id({1, 2, 3});
  const auto ok = adjoint_check(id, 10, 1e-12, 1);
  CHECK(ok.pass);
  CHECK(ok.worst_relative_error == 0.0);

  const Shape s{1, 1, 4};
  FunctionOperator bad(
      s, s,
      [](std::span<const cplx> x, std::span<cplx> y) {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i];
      },
      [](std::span<const cplx> y, std::span<cplx> x) { std::copy(y.begin(), y.end(), x.begin()); });
  const auto res = adjoint_check(bad, 5, 1e-10, 1);
  CHECK_FALSE(res.pass);
  CHECK(res.worst_relative_error > 0.1);
}

TEST_CASE("dense operator adjoint is the conjugate transpose") {
  Rng rng(11);
  DenseOperator d(3, 4, rng.complex_normals(12));
  const Eigen::MatrixXcd a = testutil::dense_of(d);
  const Eigen::MatrixXcd ah = testutil::dense_adjoint_of(d);
  CHECK((a.adjoint() - ah).norm() < 1e-14);
  CHECK(adjoint_check(d, 10, 1e-12, 2).pass);
}

TEST_CASE("CIMG layout and round trip") {
  const ComplexImage img({2, 1, 2}, {cplx{1.0, -1.0}, cplx{0.5, 0.25}, cplx{-3.0, 1e-300},
                                     cplx{std::numeric_limits<double>::denorm_min(), 0.0}});
  const auto bytes = encode_cimg(img);
  REQUIRE(bytes.size() == 8 + 12 + 4 * 16);
  CHECK(std::memcmp(bytes.data(), "CIMG0001", 8) == 0);
  // K = 2, H = 1, W = 2 little endian.
  CHECK(bytes[8] == 2);
  CHECK(bytes[9] == 0);
  CHECK(bytes[12] == 1);
  CHECK(bytes[16] == 2);
  double re = 0.0;
  std::memcpy(&re, bytes.data() + 20, 8);
  CHECK(re == 1.0);
  std::memcpy(&re, bytes.data() + 28, 8);
  CHECK(re == -1.0);

  const auto back = decode_cimg(bytes);
  CHECK(back == img);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS((void)decode_cimg(bad), InvalidInput);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS((void)decode_cimg(truncated), InvalidInput);

  const auto path = std::filesystem::temp_directory_path() / "proxmag_test_core.cimg";
  write_cimg(path, img);
  CHECK(read_cimg(path) == img);
  std::filesystem::remove(path);
  CHECK_THROWS_AS((void)read_cimg(path), IoError);
}

TEST_CASE("vector helpers") {
  const std::vector<cplx> a = {cplx{0.0, 1.0}, cplx{1.0, 0.0}};
  const std::vector<cplx> b = {cplx{0.0, 1.0}, cplx{2.0, 0.0}};
  CHECK(dot(a, b) == cplx{3.0, 0.0});
  CHECK(norm2(a) == doctest::Approx(std::sqrt(2.0)));
  const std::vector<double> v = {-3.0, 2.0};
  CHECK(norm_inf(v) == 3.0);
}

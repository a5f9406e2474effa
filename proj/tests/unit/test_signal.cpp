#include "sasdeconv/signal.hpp"

#include "sasdeconv/fft.hpp"
#include "sasdeconv/reference.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace sasd;
using test::randn;

TEST_SUITE_BEGIN("signal");

TEST_CASE("cconv with a Dirac is the identity") {
  Rng rng(1);
  const Vec x = randn(rng, 12);
  Vec e0 = Vec::Zero(5);
  e0[0] = 1.0;
  CHECK((cconv(e0, x) - x).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("cconv with a shifted basis vector acts as a cyclic shift") {
  Rng rng(2);
  const Vec x = randn(rng, 8);
  for (long ell : {1L, 3L, 6L}) {
    Vec e = Vec::Zero(8);
    e[ell] = 1.0;
    CHECK((cconv(e, x) - shift(x, ell)).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("cconv matches the direct-sum oracle on a small instance") {
  Rng rng(3);
  const Vec a = randn(rng, 4);
  const Vec x = randn(rng, 8);
  CHECK((cconv(a, x) - ref::cconv_direct(a, x)).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("FFT path equals the direct oracle on 200 random instances") {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const long n = 1 + static_cast<long>(rng.u01() * 63);
    const long m = 1 + static_cast<long>(rng.u01() * (n - 0.5));
    const Vec a = randn(rng, m);
    const Vec x = randn(rng, n);
    const double tol = 1e-10 * a.norm() * x.norm() * std::sqrt(static_cast<double>(n));
    CHECK((cconv(a, x) - ref::cconv_direct(a, x)).lpNorm<Eigen::Infinity>() <=
          doctest::Approx(tol).epsilon(0));
    CHECK((ccorr(x, a) - ref::ccorr_direct(x, a)).lpNorm<Eigen::Infinity>() <= tol);
  }
}

TEST_CASE("shift symmetry of the convolution model") {
  Rng rng(5);
  const long n = 24;
  const Vec a = randn(rng, 6);
  const Vec x = randn(rng, n);
  const Vec base = cconv(a, x);
  for (long ell = 0; ell < n; ++ell) {
    const Vec lhs = cconv(shift(embed(a, n), ell), shift(x, -ell));
    CHECK((lhs - base).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("adjoint identity pins the correlation convention") {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const long n = 8 + static_cast<long>(rng.u01() * 40);
    const long m = 1 + static_cast<long>(rng.u01() * (n - 0.5));
    const Vec a = randn(rng, m);
    const Vec x = randn(rng, n);
    const Vec y = randn(rng, n);
    CHECK(cconv(a, x).dot(y) == doctest::Approx(x.dot(ccorr(y, a))).epsilon(1e-10));
  }
}

TEST_CASE("cconv is bilinear in x") {
  Rng rng(7);
  const Vec a = randn(rng, 5);
  const Vec x = randn(rng, 16);
  const Vec z = randn(rng, 16);
  const double al = 0.7, be = -1.3;
  const Vec lhs = cconv(a, Vec(al * x + be * z));
  const Vec rhs = al * cconv(a, x) + be * cconv(a, z);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12 * (1 + lhs.norm()));
}

TEST_CASE("ccorr of a unit kernel with itself is 1 at zero lag") {
  Rng rng(8);
  const Vec a = test::rand_unit(rng, 6);
  const Vec r = ccorr(embed(a, 20), a);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ccorr against a Dirac kernel reproduces the signal") {
  Vec e0 = Vec::Zero(3);
  e0[0] = 1.0;
  for (long k : {0L, 2L, 7L}) {
    Vec ek = Vec::Zero(9);
    ek[k] = 1.0;
    const Vec r = ccorr(ek, e0);
    CHECK((r - ek).lpNorm<Eigen::Infinity>() < 1e-14);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  Rng rng(9);
  const Vec a = randn(rng, 9);
  const Vec x = randn(rng, 4);
  CHECK_THROWS_AS(cconv(a, x), std::invalid_argument);
  CHECK_THROWS_AS(ccorr(x, a), std::invalid_argument);
}

TEST_CASE("shift identities") {
  Rng rng(10);
  const Vec v = randn(rng, 11);
  CHECK((shift(v, 0) - v).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((shift(shift(v, 4), -4) - v).lpNorm<Eigen::Infinity>() == 0.0);
  Vec e0 = Vec::Zero(8);
  e0[0] = 1.0;
  Vec e3 = Vec::Zero(8);
  e3[3] = 1.0;
  CHECK((shift(e0, 3) - e3).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((shift(e0, -5) - e3).lpNorm<Eigen::Infinity>() == 0.0);  // modulo n
}

TEST_CASE("zero_pad_window layout, length and norm") {
  Vec w(2);
  w << 1.5, -2.5;
  const Vec padded = zero_pad_window(w);
  REQUIRE(padded.size() == 4);
  CHECK(padded[0] == 0.0);
  CHECK(padded[1] == 1.5);
  CHECK(padded[2] == -2.5);
  CHECK(padded[3] == 0.0);

  Rng rng(11);
  const Vec w5 = randn(rng, 5);
  CHECK(zero_pad_window(w5).size() == 13);
  CHECK(zero_pad_window(w5).norm() == doctest::Approx(w5.norm()).epsilon(1e-15));
}

TEST_CASE("project_sphere normalizes and rejects zero") {
  Vec v = Vec::Zero(4);
  v[0] = 2.0;
  CHECK((project_sphere(v) - Vec::Unit(4, 0)).lpNorm<Eigen::Infinity>() < 1e-15);
  Rng rng(12);
  for (int t = 0; t < 20; ++t)
    CHECK(project_sphere(randn(rng, 7)).norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(project_sphere(Vec::Zero(4)), DegenerateProjection);
}

TEST_CASE("observation spectrum round-trips") {
  Rng rng(13);
  for (long n : {16L, 37L, 100L}) {
    const Vec y = randn(rng, n);
    Observation obs(y);
    const Vec back = fft::irfft(obs.spectrum(), n);
    CHECK((back - y).norm() <= 1e-10 * y.norm());
  }
}

TEST_CASE("sparse map invariant validation") {
  Vec v = Vec::Zero(6);
  v[1] = 2.0;
  v[4] = -1.0;
  SparseMap m = SparseMap::from_dense(v);
  CHECK(m.support == std::vector<long>{1, 4});
  CHECK_NOTHROW(m.validate());
  m.values[2] = 0.5;  // breach: nonzero off support
  CHECK_THROWS_AS(m.validate(), std::logic_error);
}

TEST_SUITE_END();

#include "sasdeconv/refine.hpp"

#include "sasdeconv/datagen.hpp"
#include "sasdeconv/shiftspace.hpp"
#include "sasdeconv/surrogate.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace sasd;
using test::randn;
using test::rand_unit;

TEST_SUITE_BEGIN("refine");

namespace {

Vec padded(const Vec& a0, long p, long off = 0) {
  Vec a = Vec::Zero(p);
  a.segment(off, a0.size()) = a0;
  return a;
}

// BG draw with every active amplitude pushed above a floor, so the support
// is fully capturable by a threshold below the floor
SparseMap lifted_bg(long n, double theta, double floor, std::uint64_t seed) {
  SparseMap m = sample_bg(n, theta, seed);
  for (long i : m.support) {
    const double s = m.values[i] < 0 ? -1.0 : 1.0;
    m.values[i] = s * (std::abs(m.values[i]) + floor);
  }
  return m;
}

}  // namespace

TEST_CASE("unpenalized lasso solves the least-squares problem") {
  InstanceSpec spec;
  spec.p0 = 8;
  spec.n = 256;
  spec.theta = 0.05;
  spec.family = KernelFamily::Generic;
  spec.seed = 61;
  const PlantedInstance inst = make_instance(spec);
  const long p = 3 * spec.p0 - 2;
  const Vec a = padded(inst.a0.values, p);
  RefineConfig cfg;
  cfg.lasso_tol = 1e-12;
  cfg.lasso_max_iters = 30000;
  const LassoResult res = reweighted_lasso(a, inst.y, 0.0, {}, cfg);
  CHECK((cconv(a, res.x.values) - inst.y.values()).norm() <= 1e-8);
}

TEST_CASE("full dead zone returns the zero map") {
  InstanceSpec spec;
  spec.p0 = 8;
  spec.n = 256;
  spec.theta = 0.05;
  spec.seed = 62;
  const PlantedInstance inst = make_instance(spec);
  const long p = 3 * spec.p0 - 2;
  const Vec a = padded(inst.a0.values, p);
  const double lam = ccorr(inst.y, a).lpNorm<Eigen::Infinity>() * 1.01;
  RefineConfig cfg;
  const LassoResult res = reweighted_lasso(a, inst.y, lam, {}, cfg);
  CHECK(res.x.support.empty());
  CHECK(res.x.values.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("lasso solution satisfies the closed-form normal equations on its support") {
  InstanceSpec spec;
  spec.p0 = 8;
  spec.n = 256;
  spec.theta = 0.04;
  spec.family = KernelFamily::Generic;
  spec.seed = 63;
  const PlantedInstance inst = make_instance(spec);
  const long p = 3 * spec.p0 - 2;
  const long n = spec.n;
  const Vec a = padded(inst.a0.values, p);
  const double lam = 0.4;
  const std::vector<long> T = {inst.x0.support.empty() ? 0 : inst.x0.support[0]};
  RefineConfig cfg;
  cfg.lasso_tol = 1e-11;
  cfg.lasso_max_iters = 30000;
  const LassoResult res = reweighted_lasso(a, inst.y, lam, T, cfg);
  REQUIRE(!res.x.support.empty());

  // x_J = (C_J^T C_J)^{-1} (C_J^T y - lambda P_{J \ T} sigma)
  const auto& J = res.x.support;
  Eigen::MatrixXd CJ(n, J.size());
  const Vec ia = embed(a, n);
  for (size_t k = 0; k < J.size(); ++k) CJ.col(k) = shift(ia, J[k]);
  Eigen::VectorXd rhs = CJ.transpose() * inst.y.values();
  for (size_t k = 0; k < J.size(); ++k) {
    const bool tracked = std::find(T.begin(), T.end(), J[k]) != T.end();
    if (!tracked) rhs[k] -= lam * (res.x.values[J[k]] < 0 ? -1.0 : 1.0);
  }
  const Eigen::VectorXd xj = (CJ.transpose() * CJ).ldlt().solve(rhs);
  for (size_t k = 0; k < J.size(); ++k)
    CHECK(res.x.values[J[k]] == doctest::Approx(xj[k]).epsilon(0).scale(1).epsilon(1e-6));
}

TEST_CASE("reweighted lasso with empty tracking equals a plain ista solve") {
  InstanceSpec spec;
  spec.p0 = 6;
  spec.n = 128;
  spec.theta = 0.06;
  spec.seed = 64;
  const PlantedInstance inst = make_instance(spec);
  const long p = 3 * spec.p0 - 2;
  const Vec a = padded(inst.a0.values, p);
  const double lam = 0.3;
  RefineConfig cfg;
  cfg.lasso_tol = 1e-10;
  cfg.lasso_max_iters = 20000;
  const LassoResult mine = reweighted_lasso(a, inst.y, lam, {}, cfg);

  // independent plain proximal-gradient (no acceleration)
  double L = 0.0;
  {
    Vec v = Vec::Unit(spec.n, 0);
    for (int it = 0; it < 60; ++it) {
      Vec w = ccorr(cconv(a, v), a);
      L = w.norm();
      v = w / L;
    }
    L *= 1.05;
  }
  Vec x = Vec::Zero(spec.n);
  for (int it = 0; it < 60000; ++it) {
    const Vec grad = ccorr(Vec(cconv(a, x) - inst.y.values()), a);
    x = soft_threshold(Vec(x - grad / L), lam / L);
  }
  CHECK((mine.x.values - x).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("ls_kernel inverts a single-spike convolution exactly") {
  Rng rng(65);
  const long p0 = 10, n = 256, p = 3 * p0 - 2;
  const Vec a0 = rand_unit(rng, p0);
  Vec xv = Vec::Zero(n);
  xv[0] = 1.0;
  const SparseMap x = SparseMap::from_dense(xv);
  const Observation y(cconv(a0, Vec(xv)));
  const Vec a = ls_kernel(x, y, p);
  CHECK((a - padded(a0, p)).norm() <= 1e-10);
}

TEST_CASE("ls_kernel recovers the kernel from the true activation") {
  InstanceSpec spec;
  spec.p0 = 12;
  spec.n = 1024;
  spec.theta = 0.05;
  spec.family = KernelFamily::Generic;
  spec.seed = 66;
  const PlantedInstance inst = make_instance(spec);
  const long p = 3 * spec.p0 - 2;
  const Vec a = ls_kernel(inst.x0, inst.y, p);
  const double err = std::min((a - padded(inst.a0.values, p)).norm(),
                              (a + padded(inst.a0.values, p)).norm());
  CHECK(err <= 1e-8);

  // residual orthogonality of the unprojected solution (solution is a ray
  // multiple of the projected one)
  const Vec ax = cconv(a, inst.x0.values);
  const double scale = ax.dot(inst.y.values()) / ax.squaredNorm();
  const Vec resid = scale * ax - inst.y.values();
  CHECK(window(ccorr(resid, inst.x0.values), p).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("ls_kernel rejects degenerate activations") {
  const long n = 128;
  const SparseMap zero = SparseMap::from_dense(Vec::Zero(n));
  Rng rng(67);
  const Observation y(randn(rng, n));
  CHECK_THROWS_AS(ls_kernel(zero, y, 10), DegenerateSparseMap);
}

TEST_CASE("refine loop halves lambda exactly and tracks support") {
  InstanceSpec spec;
  spec.p0 = 12;
  spec.n = 2048;
  spec.theta = 0.03;
  spec.family = KernelFamily::Generic;
  spec.seed = 68;
  const PlantedInstance inst = make_instance(spec);
  const long p = 3 * spec.p0 - 2;
  RefineConfig cfg;
  cfg.theta = spec.theta;
  cfg.K2 = 6;
  cfg.lambda0_mode = Lambda0Mode::Explicit;
  cfg.lambda0_explicit = 0.8;
  const RefineResult res =
      refine_loop(padded(inst.a0.values, p), inst.y, cfg, &inst.a0);
  REQUIRE(res.trace.iters.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(res.trace.iters[k].lambda == 0.8 * std::pow(0.5, k));
    CHECK(res.trace.iters[k].err_a >= 0.0);
  }
}

TEST_CASE("the planted kernel is a fixed point when the support is capturable") {
  InstanceSpec spec;
  spec.p0 = 12;
  spec.n = 2048;
  spec.theta = 0.02;
  spec.family = KernelFamily::Generic;
  spec.seed = 69;
  PlantedInstance inst = make_instance(spec);
  const double lambda0 = 0.5;
  inst.x0 = lifted_bg(spec.n, spec.theta, 6.0 * lambda0, spec.seed);
  inst.y = Observation(cconv(inst.a0.values, inst.x0.values));
  const long p = 3 * spec.p0 - 2;

  RefineConfig cfg;
  cfg.theta = spec.theta;
  cfg.K2 = 8;
  cfg.lambda0_mode = Lambda0Mode::Explicit;
  cfg.lambda0_explicit = lambda0;
  cfg.lasso_tol = 1e-14;
  cfg.lasso_max_iters = 60000;
  const RefineResult res =
      refine_loop(padded(inst.a0.values, p), inst.y, cfg, &inst.a0);
  for (const auto& r : res.trace.iters) CHECK(r.err_a <= 1e-8);
}

TEST_CASE("support capture after the first round includes the large entries") {
  InstanceSpec spec;
  spec.p0 = 16;
  spec.n = 4096;
  spec.theta = 0.02;
  spec.family = KernelFamily::Generic;
  spec.seed = 70;
  const PlantedInstance inst = make_instance(spec);
  const long p = 3 * spec.p0 - 2;
  RefineConfig cfg;
  cfg.theta = spec.theta;
  cfg.K2 = 1;
  cfg.lambda0_mode = Lambda0Mode::Explicit;
  cfg.lambda0_explicit = 0.5;
  cfg.lasso_tol = 1e-10;
  cfg.lasso_max_iters = 20000;
  const RefineResult res =
      refine_loop(padded(inst.a0.values, p), inst.y, cfg, &inst.a0);
  for (long i : inst.x0.support) {
    if (std::abs(inst.x0.values[i]) > 3.0 * cfg.lambda0_explicit) {
      const bool captured = std::binary_search(res.x_hat.support.begin(),
                                               res.x_hat.support.end(), i);
      CHECK(captured);
    }
  }
}

TEST_CASE("refinement reproduces the observation after ten rounds") {
  InstanceSpec spec;
  spec.p0 = 12;
  spec.n = 2048;
  spec.theta = 0.02;
  spec.family = KernelFamily::Generic;
  spec.seed = 71;
  const PlantedInstance inst = make_instance(spec);
  const long p = 3 * spec.p0 - 2;
  RefineConfig cfg;
  cfg.theta = spec.theta;
  cfg.K2 = 10;
  cfg.lambda0_mode = Lambda0Mode::Explicit;
  cfg.lambda0_explicit = 0.5;
  const RefineResult res =
      refine_loop(padded(inst.a0.values, p), inst.y, cfg, &inst.a0);
  const double rel = (cconv(res.a_hat, res.x_hat.values) - inst.y.values()).norm() /
                     inst.y.values().norm();
  CHECK(rel <= 1e-4);
}

TEST_CASE("lambda0 formulas") {
  RefineConfig cfg;
  cfg.theta = 0.02;
  const long n = 1 << 15, p = 94;
  CHECK(cfg.kappa_I(n, p) ==
        doctest::Approx(6.0 * std::max(0.02 * 94, std::log(32768.0))).epsilon(1e-12));
  cfg.lambda0_mode = Lambda0Mode::Alg1;
  const double mu = 0.2;
  CHECK(cfg.lambda0(n, p, mu) ==
        doctest::Approx(10.0 * (0.02 * 94 + std::log(32768.0)) * (mu + 1.0 / 94))
            .epsilon(1e-12));
  cfg.lambda0_mode = Lambda0Mode::Thm34;
  CHECK(cfg.lambda0(n, p, mu) ==
        doctest::Approx(5.0 * cfg.kappa_I(n, p) * (mu + 1.0 / 94)).epsilon(1e-12));
}

TEST_SUITE_END();

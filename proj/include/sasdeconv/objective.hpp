#pragma once

#include "sasdeconv/signal.hpp"
#include "sasdeconv/surrogate.hpp"

#include <cstdint>
#include <memory>

namespace sasd {

// Everything needed to evaluate phi_rho over the sphere S^{p-1}: the fixed
// observation (spectrum cached), the iterate length p = 3*p0-2, and the
// surrogate parameters, which stay fixed for the lifetime of a solve.
struct ObjectiveContext {
  std::shared_ptr<const Observation> y;
  long p = 0;
  SurrogateParams params;
  double y_sqnorm = 0.0;

  long n() const { return y->n(); }
  static ObjectiveContext make(std::shared_ptr<const Observation> y, long p,
                               SurrogateParams params);
};

// One evaluation of phi_rho: the correlation fed to the prox and the marginal
// minimizer x*, reusable for gradients at the same point.
struct EvalBundle {
  double value = 0.0;
  Vec corr;   // ccorr(y, a), length n
  Vec xstar;  // prox_rho(corr)
};

EvalBundle eval_phi_rho(const Vec& a, const ObjectiveContext& ctx);
double phi_rho(const Vec& a, const ObjectiveContext& ctx);  // value only
double eval_phi_ell1(const Vec& a, const ObjectiveContext& ctx);

Vec egrad_phi_rho(const Vec& a, const ObjectiveContext& ctx);
Vec egrad_phi_ell1(const Vec& a, const ObjectiveContext& ctx);
Vec egrad_from_bundle(const EvalBundle& b, const ObjectiveContext& ctx);

// P_{a-perp} egrad; orthogonal to a.
Vec rgrad_phi_rho(const Vec& a, const ObjectiveContext& ctx);

// Matrix-free Riemannian Hessian at a point; two correlation passes per
// product. The sphere-curvature term enters as -<egrad, a> * P v (the sign is
// fixed against finite differences of the Riemannian gradient).
class HessianOperator {
 public:
  HessianOperator(Vec a, const ObjectiveContext& ctx);
  HessianOperator(Vec a, const EvalBundle& b, const ObjectiveContext& ctx);

  Vec apply(const Vec& v) const;  // accepts any v; projects to the tangent space
  const Vec& point() const { return a_; }
  double egrad_dot_a() const { return egrad_dot_a_; }

 private:
  void init(const EvalBundle& b, const ObjectiveContext& ctx);

  Vec a_;
  Vec diag_;  // prox derivative at corr
  double egrad_dot_a_ = 0.0;
  const ObjectiveContext* ctx_;
};

// Hessian-vector product with tangency enforced on v (|<v,a>| <= 1e-8 ||v||).
Vec rhess_vec(const Vec& a, const Vec& v, const ObjectiveContext& ctx);

struct EigOptions {
  double tol = 1e-6;
  int power_iters = 20;  // estimate of ||H|| for the spectral shift
  int max_iters = 500;
  std::uint64_t seed = 0x5a5d0e16;
  const Vec* guess = nullptr;  // warm start
  const Vec* grad = nullptr;   // rgrad for the sign convention (computed if null)
};

struct EigResult {
  double eigval = 0.0;
  Vec eigvec;
  int iters = 0;
  bool converged = false;  // false: iteration cap, eigvec is the best iterate
};

// Approximately smallest eigenpair of the Riemannian Hessian restricted to
// the tangent space, via power iteration on (sigma I - H) with
// sigma = 1.01 * power-iteration estimate of ||H||. The eigvec sign is chosen
// so <eigvec, rgrad> >= 0.
EigResult min_eigpair(const HessianOperator& H, const ObjectiveContext& ctx,
                      const EigOptions& opts);
EigResult min_eigpair(const Vec& a, const ObjectiveContext& ctx, double tol);

}  // namespace sasd

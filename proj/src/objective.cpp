#include "sasdeconv/objective.hpp"

#include "sasdeconv/rng.hpp"

#include <cmath>

namespace sasd {
namespace {

void check_unit(const Vec& a, double tol = 1e-8) {
  if (std::abs(a.norm() - 1.0) > tol)
    throw std::invalid_argument("objective: kernel must be unit-norm (project first)");
}

Vec tangent_project(const Vec& v, const Vec& a) { return v - a.dot(v) * a; }

}  // namespace

ObjectiveContext ObjectiveContext::make(std::shared_ptr<const Observation> y, long p,
                                        SurrogateParams params) {
  params.validate();
  if (!y || y->n() < 1) throw std::invalid_argument("ObjectiveContext: empty observation");
  if (p < 1 || p > y->n()) throw std::invalid_argument("ObjectiveContext: need 1 <= p <= n");
  ObjectiveContext ctx;
  ctx.y = std::move(y);
  ctx.p = p;
  ctx.params = params;
  ctx.y_sqnorm = ctx.y->values().squaredNorm();
  return ctx;
}

EvalBundle eval_phi_rho(const Vec& a, const ObjectiveContext& ctx) {
  check_unit(a);
  EvalBundle b;
  b.corr = ccorr(*ctx.y, a);
  b.xstar = prox_rho(b.corr, ctx.params);
  const double fit = 0.5 * (b.corr - b.xstar).squaredNorm() - 0.5 * b.corr.squaredNorm();
  b.value = ctx.params.lambda * rho(b.xstar, ctx.params.delta) + fit + 0.5 * ctx.y_sqnorm;
  return b;
}

double phi_rho(const Vec& a, const ObjectiveContext& ctx) {
  return eval_phi_rho(a, ctx).value;
}

double eval_phi_ell1(const Vec& a, const ObjectiveContext& ctx) {
  check_unit(a);
  const Vec corr = ccorr(*ctx.y, a);
  return 0.5 * ctx.y_sqnorm -
         0.5 * soft_threshold(corr, ctx.params.lambda).squaredNorm();
}

Vec egrad_from_bundle(const EvalBundle& b, const ObjectiveContext& ctx) {
  return -window(ccorr(*ctx.y, b.xstar), ctx.p);
}

Vec egrad_phi_rho(const Vec& a, const ObjectiveContext& ctx) {
  return egrad_from_bundle(eval_phi_rho(a, ctx), ctx);
}

Vec egrad_phi_ell1(const Vec& a, const ObjectiveContext& ctx) {
  check_unit(a);
  const Vec corr = ccorr(*ctx.y, a);
  return -window(ccorr(*ctx.y, soft_threshold(corr, ctx.params.lambda)), ctx.p);
}

Vec rgrad_phi_rho(const Vec& a, const ObjectiveContext& ctx) {
  return tangent_project(egrad_phi_rho(a, ctx), a);
}

HessianOperator::HessianOperator(Vec a, const ObjectiveContext& ctx)
    : a_(std::move(a)), ctx_(&ctx) {
  init(eval_phi_rho(a_, ctx), ctx);
}

HessianOperator::HessianOperator(Vec a, const EvalBundle& b, const ObjectiveContext& ctx)
    : a_(std::move(a)), ctx_(&ctx) {
  init(b, ctx);
}

void HessianOperator::init(const EvalBundle& b, const ObjectiveContext& ctx) {
  check_unit(a_);
  diag_ = prox_rho_derivative_at(b.xstar, ctx.params);
  egrad_dot_a_ = egrad_from_bundle(b, ctx).dot(a_);
}

Vec HessianOperator::apply(const Vec& v) const {
  const Vec vt = tangent_project(v, a_);
  const Vec inner = ccorr(*ctx_->y, vt);
  const Vec outer = window(ccorr(*ctx_->y, Vec(diag_.cwiseProduct(inner))), ctx_->p);
  return -tangent_project(outer, a_) - egrad_dot_a_ * vt;
}

Vec rhess_vec(const Vec& a, const Vec& v, const ObjectiveContext& ctx) {
  if (std::abs(a.dot(v)) > 1e-8 * std::max(1.0, v.norm()))
    throw std::invalid_argument("rhess_vec: v is not tangent at a");
  return HessianOperator(a, ctx).apply(v);
}

EigResult min_eigpair(const HessianOperator& H, const ObjectiveContext& ctx,
                      const EigOptions& opts) {
  const Vec& a = H.point();
  const long p = a.size();

  auto randomized_tangent = [&](std::uint64_t salt) {
    Rng rng(derive_stream(opts.seed, salt));
    Vec v(p);
    for (long i = 0; i < p; ++i) v[i] = rng.normal();
    v = tangent_project(v, a);
    const double nrm = v.norm();
    if (nrm < 1e-14) throw std::runtime_error("min_eigpair: degenerate start vector");
    return Vec(v / nrm);
  };

  // spectral shift from a norm estimate of H
  Vec w = opts.guess && opts.guess->size() == p ? tangent_project(*opts.guess, a)
                                                : randomized_tangent(1);
  if (w.norm() < 1e-14) w = randomized_tangent(1);
  w.normalize();
  double hnorm = 0.0;
  for (int it = 0; it < opts.power_iters; ++it) {
    Vec hw = H.apply(w);
    hw = tangent_project(hw, a);
    const double nrm = hw.norm();
    if (nrm < 1e-300) break;
    hnorm = nrm;
    w = hw / nrm;
  }
  const double sigma = 1.01 * std::max(hnorm, 1e-12);

  // power iteration on (sigma I - H), smallest eigenvalue of H dominates
  Vec v = opts.guess && opts.guess->size() == p ? tangent_project(*opts.guess, a)
                                                : randomized_tangent(2);
  if (v.norm() < 1e-14) v = randomized_tangent(2);
  v.normalize();

  EigResult res;
  Vec hv = H.apply(v);
  for (res.iters = 0; res.iters < opts.max_iters; ++res.iters) {
    Vec bv = sigma * v - hv;
    bv = tangent_project(bv, a);
    const double nrm = bv.norm();
    if (nrm < 1e-300) break;
    v = bv / nrm;
    hv = H.apply(v);
    const double theta = v.dot(hv);
    const double resid = (hv - theta * v).norm();
    if (resid <= opts.tol * std::max(1.0, std::abs(theta))) {
      res.converged = true;
      break;
    }
  }
  res.eigval = v.dot(hv);
  v = tangent_project(v, a);
  v.normalize();
  res.eigvec = v;

  const Vec g = opts.grad && opts.grad->size() == p ? *opts.grad : rgrad_phi_rho(a, ctx);
  if (res.eigvec.dot(g) < 0.0) res.eigvec = -res.eigvec;
  return res;
}

EigResult min_eigpair(const Vec& a, const ObjectiveContext& ctx, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("min_eigpair: tol must be > 0");
  EigOptions opts;
  opts.tol = tol;
  return min_eigpair(HessianOperator(a, ctx), ctx, opts);
}

}  // namespace sasd

#include "sasdeconv/refine.hpp"

#include "sasdeconv/datagen.hpp"
#include "sasdeconv/shiftspace.hpp"
#include "sasdeconv/surrogate.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <ostream>

namespace sasd {

double RefineConfig::kappa_I(long n, long p) const {
  return 6.0 * std::max(theta * static_cast<double>(p),
                        std::log(static_cast<double>(n)));
}

double RefineConfig::lambda0(long n, long p, double mu_value) const {
  switch (lambda0_mode) {
    case Lambda0Mode::Alg1:
      return 10.0 * (theta * static_cast<double>(p) + std::log(static_cast<double>(n))) *
             (mu_value + 1.0 / static_cast<double>(p));
    case Lambda0Mode::Thm34:
      return 5.0 * kappa_I(n, p) * (mu_value + 1.0 / static_cast<double>(p));
    case Lambda0Mode::Explicit:
      return lambda0_explicit;
  }
  return lambda0_explicit;
}

LassoResult reweighted_lasso(const Vec& a, const Observation& y, double lambda,
                             const std::vector<long>& I_track, const RefineConfig& cfg) {
  if (lambda < 0.0) throw std::invalid_argument("reweighted_lasso: lambda must be >= 0");
  const long n = y.n();

  // Lipschitz constant of the data term: ||C_a||^2 by power iteration
  Vec v = Vec::Zero(n);
  v[0] = 1.0;
  if (n > 1) v[1] = -0.5;
  v.normalize();
  double L = 1.0;
  for (int it = 0; it < 10; ++it) {
    Vec w = ccorr(cconv(a, v), a);
    const double nw = w.norm();
    if (nw < 1e-300) break;
    L = nw;
    v = w / nw;
  }
  L = std::max(L * 1.1, 1e-12);  // headroom over the 10-step estimate

  std::vector<char> tracked(n, 0);
  for (long i : I_track) tracked[static_cast<size_t>(i)] = 1;

  Vec x = Vec::Zero(n);
  Vec z = x;
  double tk = 1.0;
  LassoResult out;
  const double thresh = lambda / L;
  for (out.iters = 1; out.iters <= cfg.lasso_max_iters; ++out.iters) {
    const Vec grad = ccorr(Vec(cconv(a, z) - y.values()), a);
    Vec w = z - grad / L;
    Vec x_new(n);
#pragma omp parallel for schedule(static) if (n >= 8192)
    for (long i = 0; i < n; ++i)
      x_new[i] = tracked[i] ? w[i] : soft_threshold(w[i], thresh);

    const double delta = (x_new - x).lpNorm<Eigen::Infinity>();
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    z = x_new + ((tk - 1.0) / t_next) * (x_new - x);
    x = x_new;
    tk = t_next;
    if (delta <= cfg.lasso_tol) {
      out.converged = true;
      break;
    }
  }
  out.x = SparseMap::from_dense(x);
  return out;
}

Vec ls_kernel(const SparseMap& x, const Observation& y, long p, double cond_limit) {
  const long n = y.n();
  if (x.n() != n) throw std::invalid_argument("ls_kernel: x/y length mismatch");
  if (x.support.empty()) throw DegenerateSparseMap("x is identically zero");
  if (p < 1 || p > n) throw std::invalid_argument("ls_kernel: need 1 <= p <= n");

  // iota^* C_x^* C_x iota is Toeplitz in the cyclic autocorrelation of x
  const Vec r = ccorr(x.values, x.values);
  Eigen::MatrixXd T(p, p);
  for (long i = 0; i < p; ++i)
    for (long j = 0; j < p; ++j) {
      long k = (i - j) % n;
      if (k < 0) k += n;
      T(i, j) = r[k];
    }
  const Vec b = window(ccorr(y, x.values), p);

  Eigen::LDLT<Eigen::MatrixXd> ldlt(T);
  if (ldlt.info() != Eigen::Success) throw DegenerateSparseMap("normal system not SPD");

  // condition estimate: power iteration for the top, LDLT-inverse iteration
  // for the bottom of the spectrum
  Vec u = Vec::Constant(p, 1.0).normalized();
  double lam_max = 0.0;
  for (int it = 0; it < 30; ++it) {
    Vec w = T * u;
    lam_max = w.norm();
    if (lam_max < 1e-300) break;
    u = w / lam_max;
  }
  Vec s = Vec::Unit(p, p / 2);
  double inv_norm = 0.0;
  for (int it = 0; it < 30; ++it) {
    Vec w = ldlt.solve(s);
    inv_norm = w.norm();
    if (!std::isfinite(inv_norm) || inv_norm < 1e-300) break;
    s = w / inv_norm;
  }
  const double cond = lam_max * inv_norm;
  if (!std::isfinite(cond) || cond > cond_limit)
    throw DegenerateSparseMap("x too sparse to identify a (cond " + std::to_string(cond) +
                              ")");

  const Vec sol = ldlt.solve(b);
  return project_sphere(sol);
}

void RefineTrace::write_csv(std::ostream& os) const {
  os << "iter,lambda,err_a,supp_size,lasso_iters\n";
  for (const auto& r : iters) {
    os << r.iter << ',' << r.lambda << ',' << r.err_a << ',' << r.supp_size << ','
       << r.lasso_iters << '\n';
  }
}

RefineResult refine_loop(const Vec& a_bar, const Observation& y, const RefineConfig& cfg,
                         const Kernel* ground_truth_a0) {
  const long p = a_bar.size();
  const long n = y.n();
  if (cfg.K2 < 1) throw std::invalid_argument("refine_loop: K2 must be >= 1");

  const double mu_value = cfg.mu ? *cfg.mu : truncated_shift_coherence(a_bar);
  double lambda = cfg.lambda0(n, p, mu_value);
  if (!(lambda > 0.0)) throw std::invalid_argument("refine_loop: lambda0 must be > 0");

  RefineResult out;
  out.lambda0 = lambda;
  out.a_hat = project_sphere(a_bar);

  // I0 = supp(S_{lambda0}[ccorr(y, a_bar)])
  std::vector<long> I_track;
  {
    const Vec corr = ccorr(y, out.a_hat);
    for (long i = 0; i < n; ++i)
      if (std::abs(corr[i]) > lambda) I_track.push_back(i);
  }

  for (int k = 1; k <= cfg.K2; ++k) {
    LassoResult lasso = reweighted_lasso(out.a_hat, y, lambda, I_track, cfg);
    out.a_hat = ls_kernel(lasso.x, y, p, cfg.cond_limit);

    RefineIterRecord rec;
    rec.iter = k;
    rec.lambda = lambda;
    rec.supp_size = static_cast<long>(lasso.x.support.size());
    rec.lasso_iters = lasso.iters;
    rec.lasso_converged = lasso.converged;
    if (ground_truth_a0)
      rec.err_a = signed_shift_error(out.a_hat, ground_truth_a0->values, n).err;
    out.trace.iters.push_back(rec);

    lambda *= 0.5;  // exact halving
    I_track = lasso.x.support;
    out.x_hat = std::move(lasso.x);
  }
  return out;
}

}  // namespace sasd

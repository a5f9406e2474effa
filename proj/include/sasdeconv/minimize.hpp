#pragma once

#include "sasdeconv/objective.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace sasd {

// Sphere exponential map: cos(|u|) a + sin(|u|) u/|u|; a for |u| < 1e-12.
Vec exp_map(const Vec& a, const Vec& u);

// Inverse: arccos(<a,b>) P_{a-perp}(b-a)/|P_{a-perp}(b-a)|. Zero for b == a;
// throws for antipodal b.
Vec log_map(const Vec& a, const Vec& b);

enum class SolveStatus { Converged, MaxIters, Stalled };

std::string status_name(SolveStatus s);

struct IterRecord {
  int iter = 0;
  double phi = 0.0;        // objective after the accepted step
  double grad_norm = 0.0;  // ||g|| at the reference point of the step
  double step = 0.0;       // accepted t (0 when no step was taken)
  bool used_curvature = false;
  // Armijo audit: the accepted step satisfied
  //   phi < phi_ref - armijo_coeff*(t*gnorm_sq + 0.5*t^4*eta_v*vnorm_sq)
  double phi_ref = 0.0;
  double gnorm_sq = 0.0;
  double vnorm_sq = 0.0;
  double eta_v = 0.0;
  double armijo_coeff = 0.0;
  double eigval = 0.0;  // smallest Hessian eigenvalue estimate (curvilinear)
  double wall_ms = 0.0;
};

struct MinimizeTrace {
  std::vector<IterRecord> iters;
  // CSV columns: iter,phi,grad_norm,step,used_curvature
  void write_csv(std::ostream& os) const;
};

struct MinimizeConfig {
  double c_lambda = 0.5;          // lambda = c_lambda / sqrt(p0 theta)
  double delta_ratio = 1e-2;      // delta = delta_ratio * lambda
  double eta_v_c = 0.1;           // eta_v = eta_v_c * n * theta * lambda
  double armijo_shrink = 0.5;
  double momentum_eta = 0.9;
  int K1 = 500;
  int max_backtracks = 60;
  // ARGD sufficient-decrease coefficient c in
  //   phi(a+) - phi(w) < -c t ||g||^2.
  // Algorithm-2's literal c = 1 rejects every step once the curvature along
  // the gradient turns positive and stalls within a few iterations; 1/2
  // (the same constant Eq. 18 uses) restores a workable line search.
  double argd_armijo_coeff = 0.5;
  bool momentum_restart = true;  // reset w to a^k when extrapolation goes uphill
  // optional explicit overrides; resolved against (n, p0, theta) at solve time
  std::optional<double> lambda;
  std::optional<double> delta;
  std::optional<double> t_max;      // default 0.1 / (n theta)
  std::optional<double> grad_tol;   // default 1e-6 * n * theta
  std::optional<double> eta_v;
  // curvilinear eigensolver budget
  double eig_tol = 1e-3;
  int eig_max_iters = 500;
  int eig_power_iters = 20;
  std::uint64_t eig_seed = 0x31415926;

  double resolved_lambda(int p0, double theta) const;
  double resolved_delta(int p0, double theta) const;
  double resolved_t_max(long n, double theta) const;
  double resolved_grad_tol(long n, double theta) const;
  double resolved_eta_v(long n, double theta, double lam) const;
};

struct MinimizeResult {
  Vec a;
  MinimizeTrace trace;
  SolveStatus status = SolveStatus::MaxIters;
};

// One step of the generalized power method on the zero-padded data window:
// a0 = -P_sphere(egrad phi(P_sphere(zero_pad_window(y[offset..offset+p0])))).
// use_ell1 switches the seeding gradient to the phi_l1 one (Eq.-16 variant).
Vec init_a0(const Observation& y, int p0, const ObjectiveContext& ctx,
            long window_offset = 0, bool use_ell1 = false);

// Phase-one curvilinear search with negative-curvature steps (Algorithm-1
// minimization): a+ = P_sphere(a - t g - t^2 v), Armijo per Eq. 18,
// t backtracked from t_max.
MinimizeResult curvilinear_search(const Vec& a0, const ObjectiveContext& ctx,
                                  const MinimizeConfig& cfg, int p0, double theta);

// Accelerated Riemannian gradient descent (Algorithm 2).
MinimizeResult accelerated_rgd(const Vec& a0, const ObjectiveContext& ctx,
                               const MinimizeConfig& cfg, int p0, double theta);

}  // namespace sasd

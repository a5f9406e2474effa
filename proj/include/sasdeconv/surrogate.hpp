#pragma once

#include "sasdeconv/signal.hpp"

namespace sasd {

// Weight and smoothing of the pseudo-Huber sparsity surrogate
// rho(x) = sum_i sqrt(x_i^2 + delta^2).
struct SurrogateParams {
  double lambda = 0.1;
  double delta = 1e-3;

  // lambda, delta > 0 are hard requirements; delta <= lambda keeps the
  // sqrt(lambda*delta) proximity bound meaningful and only warns.
  void validate() const;
};

struct ProxNoConvergence : std::runtime_error {
  double entry;
  explicit ProxNoConvergence(double z)
      : std::runtime_error("prox_rho: root-finder did not converge"), entry(z) {}
};

double rho(const Vec& x, double delta);

double soft_threshold(double z, double lambda);
Vec soft_threshold(const Vec& z, double lambda);

// Entrywise solution of lam*x/sqrt(x^2+d^2) + x = z (safeguarded Newton with
// a bisection fallback on the bracket [soft_threshold(z), z]). Odd in z by
// construction, strictly monotone, residual <= 1e-12 * max(1, |z|).
double prox_rho_scalar(double z, const SurrogateParams& p);
Vec prox_rho(const Vec& z, const SurrogateParams& p);

// d/dz of the scalar prox: 1 / (lambda * rho''(x_z) + 1), every entry in (0,1).
Vec prox_rho_derivative(const Vec& z, const SurrogateParams& p);
// Fast path when the prox values are already available.
Vec prox_rho_derivative_at(const Vec& xstar, const SurrogateParams& p);

}  // namespace sasd

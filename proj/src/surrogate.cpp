#include "sasdeconv/surrogate.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>

namespace sasd {
namespace {

constexpr long kOmpMin = 8192;

double rho_pp(double x, double delta) {
  const double s2 = x * x + delta * delta;
  return delta * delta / (s2 * std::sqrt(s2));
}

}  // namespace

void SurrogateParams::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("SurrogateParams: lambda must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("SurrogateParams: delta must be > 0");
  if (delta > lambda) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      std::fprintf(stderr,
                   "[sasdeconv] warning: delta (%g) > lambda (%g); smoothed-threshold "
                   "proximity bound is degenerate\n",
                   delta, lambda);
  }
}

double rho(const Vec& x, double delta) {
  // serial sum: keeps objective values bit-identical regardless of threads
  double acc = 0.0;
  for (long i = 0; i < x.size(); ++i) acc += std::sqrt(x[i] * x[i] + delta * delta);
  return acc;
}

double soft_threshold(double z, double lambda) {
  const double m = std::abs(z) - lambda;
  return m > 0.0 ? (z < 0 ? -m : m) : 0.0;
}

Vec soft_threshold(const Vec& z, double lambda) {
  const long n = z.size();
  Vec out(n);
#pragma omp parallel for schedule(static) if (n >= kOmpMin)
  for (long i = 0; i < n; ++i) out[i] = soft_threshold(z[i], lambda);
  return out;
}

double prox_rho_scalar(double z, const SurrogateParams& p) {
  if (z == 0.0) return 0.0;
  const double sgn = z < 0 ? -1.0 : 1.0;
  const double za = std::abs(z);
  const double lam = p.lambda;
  const double dlt = p.delta;
  const double tol = 1e-13 * std::max(1.0, za);

  auto g = [&](double x) { return lam * x / std::sqrt(x * x + dlt * dlt) + x - za; };

  double lo = std::max(0.0, za - lam);  // g(lo) <= 0
  double hi = za;                       // g(hi) >= 0
  double x = lo;
  double gx = g(x);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(gx) <= tol) return sgn * x;
    if (gx > 0.0)
      hi = x;
    else
      lo = x;
    const double dg = lam * rho_pp(x, dlt) + 1.0;
    double xn = x - gx / dg;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
    gx = g(x);
  }
  if (std::abs(gx) <= 1e-12 * std::max(1.0, za)) return sgn * x;
  throw ProxNoConvergence(z);
}

Vec prox_rho(const Vec& z, const SurrogateParams& p) {
  p.validate();
  const long n = z.size();
  Vec out(n);
#pragma omp parallel for schedule(static) if (n >= kOmpMin)
  for (long i = 0; i < n; ++i) out[i] = prox_rho_scalar(z[i], p);
  return out;
}

Vec prox_rho_derivative_at(const Vec& xstar, const SurrogateParams& p) {
  const long n = xstar.size();
  Vec out(n);
#pragma omp parallel for schedule(static) if (n >= kOmpMin)
  for (long i = 0; i < n; ++i) out[i] = 1.0 / (p.lambda * rho_pp(xstar[i], p.delta) + 1.0);
  return out;
}

Vec prox_rho_derivative(const Vec& z, const SurrogateParams& p) {
  return prox_rho_derivative_at(prox_rho(z, p), p);
}

}  // namespace sasd

#include "sasdeconv/reference.hpp"

#include <cmath>

namespace sasd::ref {

Vec cconv_direct(const Vec& a, const Vec& x) {
  const long n = x.size();
  const long m = a.size();
  if (m > n) throw std::invalid_argument("cconv_direct: kernel longer than signal");
  Vec out = Vec::Zero(n);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long j = 0; j < m; ++j) {
      long k = i - j;
      if (k < 0) k += n;
      acc += a[j] * x[k];
    }
    out[i] = acc;
  }
  return out;
}

Vec ccorr_direct(const Vec& y, const Vec& a) {
  const long n = y.size();
  const long m = a.size();
  if (m > n) throw std::invalid_argument("ccorr_direct: kernel longer than signal");
  Vec out = Vec::Zero(n);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long j = 0; j < m; ++j) {
      long k = i + j;
      if (k >= n) k -= n;
      acc += a[j] * y[k];
    }
    out[i] = acc;
  }
  return out;
}

double shift_coherence_direct(const Vec& a, long n) {
  const Vec ia = embed(a, n);
  double best = 0.0;
  for (long ell = 1; ell < n; ++ell) {
    double acc = 0.0;
    for (long j = 0; j < n; ++j) {
      long k = j - ell;
      if (k < 0) k += n;
      acc += ia[j] * ia[k];
    }
    best = std::max(best, std::abs(acc));
  }
  return best;
}

double truncated_shift_coherence_direct(const Vec& a0) {
  const long p0 = a0.size();
  // window [0, p0); shifts with nonzero truncation have |l| < p0
  auto trunc = [&](long ell) {
    Vec t = Vec::Zero(p0);
    for (long j = 0; j < p0; ++j) {
      long w = ell + j;
      if (0 <= w && w < p0) t[w] = a0[j];
    }
    return t;
  };
  double best = 0.0;
  for (long i = -(p0 - 1); i < p0; ++i) {
    const Vec ti = trunc(i);
    for (long j = i + 1; j < p0; ++j) {
      best = std::max(best, std::abs(ti.dot(trunc(j))));
    }
  }
  return best;
}

double prox_pseudo_huber_bisect(double z, double lambda, double delta, double tol) {
  const double sgn = z < 0 ? -1.0 : 1.0;
  const double za = std::abs(z);
  auto g = [&](double x) { return lambda * x / std::sqrt(x * x + delta * delta) + x - za; };
  double lo = std::max(0.0, za - lambda);
  double hi = za;
  if (g(lo) > 0.0) return sgn * lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(mid);
    if (std::abs(v) <= tol) return sgn * mid;
    if (v > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return sgn * 0.5 * (lo + hi);
}

}  // namespace sasd::ref

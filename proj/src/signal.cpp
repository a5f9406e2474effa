#include "sasdeconv/signal.hpp"

#include "sasdeconv/fft.hpp"

#include <algorithm>
#include <cmath>

namespace sasd {

SparseMap SparseMap::from_dense(Vec v) {
  SparseMap m;
  m.support.reserve(64);
  for (long i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) m.support.push_back(i);
  m.values = std::move(v);
  return m;
}

void SparseMap::validate() const {
  long k = 0;
  for (long i = 0; i < values.size(); ++i) {
    const bool on = (k < static_cast<long>(support.size()) && support[k] == i);
    if (on) {
      ++k;
      continue;
    }
    if (values[i] != 0.0) throw std::logic_error("SparseMap: nonzero off support");
  }
  if (k != static_cast<long>(support.size()))
    throw std::logic_error("SparseMap: support index out of range or unsorted");
}

const Eigen::VectorXcd& Observation::spectrum() const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (spectrum_.size() == 0 && values_.size() > 0) spectrum_ = fft::rfft(values_);
  return spectrum_;
}

Vec embed(const Vec& a, long n) {
  if (a.size() > n) throw std::invalid_argument("embed: vector longer than ambient length");
  Vec out = Vec::Zero(n);
  out.head(a.size()) = a;
  return out;
}

Vec window(const Vec& v, long p) {
  if (p > v.size()) throw std::invalid_argument("window: p exceeds input length");
  return v.head(p);
}

Vec cconv(const Vec& a, const Vec& x) {
  const long n = x.size();
  if (a.size() > n) throw std::invalid_argument("cconv: kernel longer than signal");
  if (n < 1) throw std::invalid_argument("cconv: empty signal");
  const Eigen::VectorXcd fa = fft::rfft(embed(a, n));
  const Eigen::VectorXcd fx = fft::rfft(x);
  return fft::irfft(fa.cwiseProduct(fx), n);
}

namespace {

Vec ccorr_spec(const Eigen::VectorXcd& fy, const Vec& a, long n) {
  const Eigen::VectorXcd fa = fft::rfft(embed(a, n));
  return fft::irfft(fy.cwiseProduct(fa.conjugate()), n);
}

}  // namespace

Vec ccorr(const Vec& y, const Vec& a) {
  const long n = y.size();
  if (a.size() > n) throw std::invalid_argument("ccorr: kernel longer than signal");
  return ccorr_spec(fft::rfft(y), a, n);
}

Vec ccorr(const Observation& y, const Vec& a) {
  if (a.size() > y.n()) throw std::invalid_argument("ccorr: kernel longer than signal");
  return ccorr_spec(y.spectrum(), a, y.n());
}

Vec shift(const Vec& v, long ell) {
  const long n = v.size();
  long s = ell % n;
  if (s < 0) s += n;
  Vec out(n);
  for (long j = 0; j < n; ++j) {
    long src = j - s;
    if (src < 0) src += n;
    out[j] = v[src];
  }
  return out;
}

Vec zero_pad_window(const Vec& w) {
  const long p0 = w.size();
  if (p0 < 2) throw std::invalid_argument("zero_pad_window: p0 must be >= 2");
  Vec out = Vec::Zero(3 * p0 - 2);
  out.segment(p0 - 1, p0) = w;
  return out;
}

Vec project_sphere(const Vec& v) {
  const double nrm = v.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw DegenerateProjection();
  return v / nrm;
}

}  // namespace sasd

#include "sasdeconv/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace sasd::fft {
namespace {

// Plans are cached per length and shared across threads; creation is not
// thread-safe in FFTW so it is serialized. Execution uses the new-array
// interface on thread-local scratch (fftw_malloc on both sides keeps the
// alignment the plans were created with). FFTW_ESTIMATE keeps plans, and
// hence results, deterministic.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex g_plan_mutex;
std::unordered_map<long, PlanPair> g_plans;

PlanPair plans_for(long n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = g_plans.find(n);
  if (it != g_plans.end()) return it->second;

  double* re = static_cast<double*>(fftw_malloc(sizeof(double) * n));
  fftw_complex* cx =
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), re, cx, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), cx, re, FFTW_ESTIMATE);
  fftw_free(re);
  fftw_free(cx);
  if (!p.r2c || !p.c2r) throw std::runtime_error("fftw plan creation failed");
  g_plans.emplace(n, p);
  return p;
}

struct Scratch {
  double* re = nullptr;
  fftw_complex* cx = nullptr;
  long n = 0;

  void ensure(long want) {
    if (n == want) return;
    release();
    re = static_cast<double*>(fftw_malloc(sizeof(double) * want));
    cx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (want / 2 + 1)));
    n = want;
  }
  void release() {
    if (re) fftw_free(re);
    if (cx) fftw_free(cx);
    re = nullptr;
    cx = nullptr;
    n = 0;
  }
  ~Scratch() { release(); }
};

Scratch& scratch_for(long n) {
  thread_local std::unordered_map<long, Scratch> bufs;
  Scratch& s = bufs[n];
  s.ensure(n);
  return s;
}

}  // namespace

Eigen::VectorXcd rfft(const Eigen::VectorXd& x) {
  const long n = x.size();
  if (n <= 0) throw std::invalid_argument("rfft: empty input");
  PlanPair plans = plans_for(n);
  Scratch& s = scratch_for(n);
  std::memcpy(s.re, x.data(), sizeof(double) * n);
  fftw_execute_dft_r2c(plans.r2c, s.re, s.cx);
  Eigen::VectorXcd out(n / 2 + 1);
  std::memcpy(reinterpret_cast<double*>(out.data()), s.cx,
              sizeof(fftw_complex) * (n / 2 + 1));
  return out;
}

Eigen::VectorXd irfft(const Eigen::VectorXcd& spectrum, long n) {
  if (n <= 0 || spectrum.size() != n / 2 + 1)
    throw std::invalid_argument("irfft: spectrum/length mismatch");
  PlanPair plans = plans_for(n);
  Scratch& s = scratch_for(n);
  std::memcpy(s.cx, spectrum.data(), sizeof(fftw_complex) * (n / 2 + 1));
  fftw_execute_dft_c2r(plans.c2r, s.cx, s.re);
  Eigen::VectorXd out(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (long i = 0; i < n; ++i) out[i] = s.re[i] * scale;
  return out;
}

}  // namespace sasd::fft

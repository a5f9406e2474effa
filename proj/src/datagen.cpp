#include "sasdeconv/datagen.hpp"

#include "sasdeconv/rng.hpp"

#include <cmath>

namespace sasd {
namespace {

constexpr std::uint64_t kStreamX0 = 1;
constexpr std::uint64_t kStreamKernel = 2;

}  // namespace

std::string family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::Spiky: return "spiky";
    case KernelFamily::Generic: return "generic";
    case KernelFamily::TaperedLowpass: return "tapered_lowpass";
  }
  return "generic";
}

KernelFamily family_from_name(const std::string& s) {
  if (s == "spiky") return KernelFamily::Spiky;
  if (s == "generic") return KernelFamily::Generic;
  if (s == "tapered_lowpass") return KernelFamily::TaperedLowpass;
  throw std::invalid_argument("family: unknown kernel family '" + s + "'");
}

int InstanceSpec::resolved_L() const {
  if (lowpass_L > 0) return lowpass_L;
  if (lowpass_beta > 0.0)
    return static_cast<int>(std::ceil(p0 * std::sqrt(1.0 - lowpass_beta)));
  return static_cast<int>(std::ceil(p0 / 3.0));
}

double InstanceSpec::resolved_spiky_noise() const {
  return spiky_noise < 0.0 ? 0.05 / std::sqrt(static_cast<double>(p0)) : spiky_noise;
}

void InstanceSpec::validate() const {
  if (p0 < 2) throw std::invalid_argument("p0: must be >= 2");
  if (n < p0) throw std::invalid_argument("n: must be >= p0");
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::invalid_argument("theta: must lie in (0, 1)");
  if (family == KernelFamily::TaperedLowpass) {
    const int L = resolved_L();
    if (L < 1 || L > p0) throw std::invalid_argument("lowpass_L: must lie in [1, p0]");
    if (lowpass_beta < 0.0 || lowpass_beta >= 1.0)
      throw std::invalid_argument("lowpass_beta: must lie in [0, 1)");
  }
}

SparseMap sample_bg(long n, double theta, std::uint64_t seed) {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("theta: must lie in [0, 1]");
  Rng rng(derive_stream(seed, kStreamX0));
  SparseMap m;
  m.values = Vec::Zero(n);
  for (long i = 0; i < n; ++i) {
    const bool on = rng.u01() <= theta;  // u01 in (0,1]: theta=0 never, theta=1 always
    const double g = rng.normal();       // always drawn; keeps streams aligned
    if (on && g != 0.0) {
      m.values[i] = g;
      m.support.push_back(i);
    }
  }
  return m;
}

Kernel sample_kernel(const InstanceSpec& spec) {
  spec.validate();
  Rng rng(derive_stream(spec.seed, kStreamKernel));
  const int p0 = spec.p0;
  Vec v(p0);
  switch (spec.family) {
    case KernelFamily::Spiky: {
      const double noise = spec.resolved_spiky_noise();
      v[0] = 1.0;
      for (int i = 1; i < p0; ++i) v[i] = rng.uniform(-noise, noise);
      break;
    }
    case KernelFamily::Generic: {
      for (int i = 0; i < p0; ++i) v[i] = rng.normal();
      break;
    }
    case KernelFamily::TaperedLowpass: {
      const int L = spec.resolved_L();
      v.setZero();
      const double w0 = 2.0 * M_PI / p0;
      for (int k = 0; k < L; ++k) {
        const double c = rng.normal();
        const double d = rng.normal();
        for (int j = 0; j < p0; ++j)
          v[j] += c * std::cos(w0 * k * j) + d * std::sin(w0 * k * j);
      }
      for (int j = 0; j < p0; ++j)
        v[j] *= 0.54 - 0.46 * std::cos(2.0 * M_PI * j / (p0 - 1));  // Hamming
      break;
    }
  }
  return Kernel(project_sphere(v));
}

double shift_coherence(const Vec& a, long n) {
  if (n < a.size()) throw std::invalid_argument("shift_coherence: n < kernel length");
  const Vec r = ccorr(embed(a, n), a);  // r_l = <s_l[iota a], iota a>
  double best = 0.0;
  for (long ell = 1; ell < n; ++ell) best = std::max(best, std::abs(r[ell]));
  return best;
}

double truncated_shift_coherence(const Vec& a0) {
  const long p0 = a0.size();
  // <trunc_i, trunc_j> with d = i-j > 0 reduces to a contiguous sum of
  // a0[u]*a0[u+d]; prefix sums give all pairs for one d in O(p0).
  double best = 0.0;
  Eigen::VectorXd prefix(p0 + 1);
  for (long d = 1; d < p0; ++d) {
    prefix[0] = 0.0;
    const long len = p0 - d;  // u in [0, p0-d)
    for (long u = 0; u < len; ++u) prefix[u + 1] = prefix[u] + a0[u] * a0[u + d];
    for (long i = -(p0 - 1) + d; i < p0; ++i) {
      // u-range: u >= max(0, -i), u <= min(p0-1-d, p0-1-i)
      const long lo = std::max<long>(0, -i);
      const long hi = std::min<long>(p0 - 1 - d, p0 - 1 - i);
      if (hi < lo) continue;
      best = std::max(best, std::abs(prefix[hi + 1] - prefix[lo]));
    }
  }
  return best;
}

PlantedInstance make_instance(const InstanceSpec& spec) {
  spec.validate();
  PlantedInstance inst;
  inst.spec = spec;
  inst.a0 = sample_kernel(spec);
  inst.x0 = sample_bg(spec.n, spec.theta, spec.seed);
  inst.y = Observation(cconv(inst.a0.values, inst.x0.values));
  return inst;
}

}  // namespace sasd

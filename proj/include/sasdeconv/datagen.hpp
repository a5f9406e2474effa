#pragma once

#include "sasdeconv/signal.hpp"

#include <cstdint>
#include <string>

namespace sasd {

enum class KernelFamily { Spiky, Generic, TaperedLowpass };

std::string family_name(KernelFamily f);
KernelFamily family_from_name(const std::string& s);

struct InstanceSpec {
  int p0 = 32;
  long n = 1 << 14;
  double theta = 0.05;
  KernelFamily family = KernelFamily::Generic;
  // tapered lowpass: number of retained DFT frequencies; 0 resolves to
  // ceil(p0 * sqrt(1 - beta)) when beta > 0, else ceil(p0 / 3).
  int lowpass_L = 0;
  double lowpass_beta = 0.0;
  // spiky: off-peak noise amplitude; < 0 resolves to 0.05 / sqrt(p0).
  double spiky_noise = -1.0;
  std::uint64_t seed = 0;

  int resolved_L() const;
  double resolved_spiky_noise() const;
  void validate() const;  // std::invalid_argument naming the offending field
};

struct PlantedInstance {
  Kernel a0;
  SparseMap x0;
  Observation y;
  InstanceSpec spec;
};

// Entrywise Bernoulli(theta) gate times N(0,1), support recorded.
SparseMap sample_bg(long n, double theta, std::uint64_t seed);

Kernel sample_kernel(const InstanceSpec& spec);

// mu(a) = max_{l != 0} |<iota a, s_l[iota a]>| over n cyclic shifts.
double shift_coherence(const Vec& a, long n);

// Max inner product over distinct length-p0 window truncations of shifts.
double truncated_shift_coherence(const Vec& a0);

PlantedInstance make_instance(const InstanceSpec& spec);

}  // namespace sasd

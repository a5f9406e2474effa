#pragma once

#include "sasdeconv/signal.hpp"

#include <vector>

namespace sasd {

enum class Region { NegativeCurvature, LargeGradient, ConvexNearShift, Unclassified };

std::string region_name(Region r);

struct OutsideShiftSpan : std::runtime_error {
  explicit OutsideShiftSpan(double resid)
      : std::runtime_error("outside shift span (residual " + std::to_string(resid) + ")") {}
};

// Dictionary of window-truncated shifts of a0. Shift indices are centered:
// c in [-(2 p0 - 2), 2 p0 - 2], where c in [-(p0-1), p0-1] are the canonical
// full in-window shifts; column(c) = iota_p^* s_{c + p0 - 1}[iota a0].
struct ShiftDictionary {
  long p0 = 0;
  long p = 0;
  std::vector<long> shifts;  // centered indices, size 4*p0-3
  Eigen::MatrixXd A;         // p x (4*p0-3)

  long index_of(long centered) const;  // throws on out-of-range
};

ShiftDictionary make_dictionary(const Vec& a0, long p);

// beta_l = <iota a, s_l[iota a0]> for all l in [n] (raw shift indexing).
Vec beta_of(const Vec& a, const Vec& a0, long n);

// Gram matrix of the dictionary columns, (4*p0-3)^2.
Eigen::MatrixXd gram_M(const Vec& a0, long p);

// chi[beta] = C-check_{x0} S_lambda[ C-check_{x0} beta ].
Vec chi(const Vec& beta, const SparseMap& x0, double lambda);

struct DAlphaResult {
  double dist = 0.0;
  Eigen::VectorXd alpha;  // witness coefficients over dictionary shifts
};

// min ||alpha_{tau^c}||_2 s.t. A alpha = a; tau holds centered shift indices.
// Dense solve with pseudo-inverse fallback at rank tolerance 1e-10; throws
// OutsideShiftSpan when a is not in range(A) within 1e-8.
DAlphaResult d_alpha(const Vec& a, const Vec& a0, const std::vector<long>& tau);

struct RegionInfo {
  Region label = Region::Unclassified;
  double beta0 = 0.0;  // largest |beta|
  double beta1 = 0.0;  // second largest
};

// Theorem-style classification from the ordered |beta|:
//   NegativeCurvature  if |beta_(1)| >= (4/5)|beta_(0)|
//   LargeGradient      if (4/5)|beta_(0)| > |beta_(1)| >= lambda / (4 log^2 (1/theta))
//   ConvexNearShift    if |beta_(1)| < lambda / (4 log^2 (1/theta))
RegionInfo classify_region(const Vec& a, const Vec& a0, double theta, double lambda);

// Closed-form Gaussian expectations (test oracles for the shift-space
// calculus): E[g S_lambda(b g + s)] and E[g^2 1{|b g + s| > lambda}].
double oracle_erf_b(double b, double lambda, double s);
double oracle_smoothed_soft(double b, double lambda, double s);
double oracle_f_b(double b, double lambda, double s);
double oracle_smoothed_indicator(double b, double lambda, double s);

struct ShiftAlignment {
  double err = 0.0;      // min over signs/shifts of ||a - sigma iota^* s_l[a0]||
  long ell = 0;          // raw shift index achieving it
  int sign = 1;
  double max_corr = 0.0;  // max_l |<s_l[iota a0], iota a>|
};

ShiftAlignment signed_shift_error(const Vec& a, const Vec& a0, long n);

}  // namespace sasd

#pragma once

#include "sasdeconv/signal.hpp"

namespace sasd::ref {

// Serial reference implementations. These are the independent oracles the
// test and benchmark targets compare the production kernels against; keep
// them loop-level-simple and free of FFTs.

// O(n*m) direct circular convolution.
Vec cconv_direct(const Vec& a, const Vec& x);

// O(n*m) direct cross-correlation, r_i = <s_i[iota a], y>.
Vec ccorr_direct(const Vec& y, const Vec& a);

// Brute-force shift coherence: max_{l != 0} |<iota a, s_l[iota a]>|.
double shift_coherence_direct(const Vec& a, long n);

// Brute-force truncated shift coherence over length-p0 window truncations.
double truncated_shift_coherence_direct(const Vec& a0);

// Bisection solve of lam*x/sqrt(x^2+d^2) + x = z to absolute residual tol.
double prox_pseudo_huber_bisect(double z, double lambda, double delta,
                                double tol = 1e-14);

}  // namespace sasd::ref

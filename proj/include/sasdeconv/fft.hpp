#pragma once

#include <Eigen/Dense>

namespace sasd::fft {

// Real-to-complex transform, length n -> n/2+1 bins (FFTW convention).
Eigen::VectorXcd rfft(const Eigen::VectorXd& x);

// Inverse of rfft, scaled by 1/n.
Eigen::VectorXd irfft(const Eigen::VectorXcd& spectrum, long n);

}  // namespace sasd::fft

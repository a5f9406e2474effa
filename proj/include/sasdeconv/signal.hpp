#pragma once

#include <Eigen/Dense>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace sasd {

using Vec = Eigen::VectorXd;

// Raised by project_sphere on (near-)zero input; callers such as the
// initializer must handle it (e.g. try a different data window).
struct DegenerateProjection : std::runtime_error {
  DegenerateProjection() : std::runtime_error("degenerate projection: zero vector") {}
};

// Short dense kernel. Ground-truth kernels and solver iterates are unit-norm;
// is_unit lets call sites assert that without forcing it on raw storage.
struct Kernel {
  Vec values;

  Kernel() = default;
  explicit Kernel(Vec v) : values(std::move(v)) {}
  long length() const { return values.size(); }
  bool is_unit(double tol = 1e-12) const {
    return std::abs(values.norm() - 1.0) <= tol;
  }
};

// Length-n sparse activation with tracked support. values[i] == 0 exactly for
// every i not in support; support is sorted and duplicate-free.
struct SparseMap {
  Vec values;
  std::vector<long> support;

  static SparseMap from_dense(Vec v);
  long n() const { return values.size(); }
  void validate() const;  // throws std::logic_error on invariant breach
};

// Fixed observation y = a0 * x0 with a lazily cached spectral transform.
// The cache fill is idempotent and serialized; the observation itself is
// immutable, so sharing across threads is safe.
class Observation {
 public:
  Observation() = default;
  explicit Observation(Vec v) : values_(std::move(v)) {}
  Observation(const Observation& o) : values_(o.values_) {}
  Observation& operator=(const Observation& o) {
    if (this != &o) {
      values_ = o.values_;
      std::lock_guard<std::mutex> lock(mutex_);
      spectrum_.resize(0);
    }
    return *this;
  }

  const Vec& values() const { return values_; }
  long n() const { return values_.size(); }
  const Eigen::VectorXcd& spectrum() const;

 private:
  Vec values_;
  mutable Eigen::VectorXcd spectrum_;
  mutable std::mutex mutex_;
};

// --- cyclic signal algebra (window convention: a short vector of length m
// occupies indices [0, m) of its length-n zero-filled embedding) ---

// iota: zero-fill a short vector to length n.
Vec embed(const Vec& a, long n);

// iota^*: first p entries.
Vec window(const Vec& v, long p);

// Modulo-n circular convolution of the zero-padded a (m <= n) with x.
Vec cconv(const Vec& a, const Vec& x);

// Cross-correlation r with r_i = <s_i[iota a], y>. Realizes C_a^* y; the
// orientation is pinned by the adjoint identity <cconv(a,x), y> = <x, ccorr(y,a)>.
Vec ccorr(const Vec& y, const Vec& a);

// Same, using the observation's cached spectrum.
Vec ccorr(const Observation& y, const Vec& a);

// (shift(v, l))_j = v_{j-l mod n}.
Vec shift(const Vec& v, long ell);

// [0^{p0-1}; w; 0^{p0-1}], length 3*p0-2.
Vec zero_pad_window(const Vec& w);

// v / ||v||_2; throws DegenerateProjection when ||v|| vanishes.
Vec project_sphere(const Vec& v);

}  // namespace sasd

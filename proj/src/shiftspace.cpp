#include "sasdeconv/shiftspace.hpp"

#include "sasdeconv/surrogate.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace sasd {
namespace {

constexpr double kRankTol = 1e-10;
constexpr double kFeasTol = 1e-8;

}  // namespace

std::string region_name(Region r) {
  switch (r) {
    case Region::NegativeCurvature: return "NegativeCurvature";
    case Region::LargeGradient: return "LargeGradient";
    case Region::ConvexNearShift: return "ConvexNearShift";
    case Region::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

long ShiftDictionary::index_of(long centered) const {
  const long idx = centered + 2 * p0 - 2;
  if (idx < 0 || idx >= static_cast<long>(shifts.size()))
    throw std::out_of_range("ShiftDictionary: shift index out of range");
  return idx;
}

ShiftDictionary make_dictionary(const Vec& a0, long p) {
  const long p0 = a0.size();
  if (p < p0) throw std::invalid_argument("make_dictionary: p < p0");
  ShiftDictionary d;
  d.p0 = p0;
  d.p = p;
  const long m = 4 * p0 - 3;
  d.A = Eigen::MatrixXd::Zero(p, m);
  d.shifts.reserve(m);
  for (long c = -(2 * p0 - 2); c <= 2 * p0 - 2; ++c) {
    const long raw = c + p0 - 1;  // window offset of the shifted copy
    const long col = d.shifts.size();
    d.shifts.push_back(c);
    for (long j = 0; j < p0; ++j) {
      const long w = raw + j;
      if (w >= 0 && w < p) d.A(w, col) = a0[j];
    }
  }
  return d;
}

Vec beta_of(const Vec& a, const Vec& a0, long n) {
  if (n < a.size() || n < a0.size())
    throw std::invalid_argument("beta_of: ambient length too small");
  return ccorr(embed(a, n), a0);  // beta_l = <s_l[iota a0], iota a>
}

Eigen::MatrixXd gram_M(const Vec& a0, long p) {
  const ShiftDictionary d = make_dictionary(a0, p);
  return d.A.transpose() * d.A;
}

Vec chi(const Vec& beta, const SparseMap& x0, double lambda) {
  if (beta.size() != x0.n()) throw std::invalid_argument("chi: beta/x0 length mismatch");
  const Vec inner = ccorr(x0.values, beta);
  return ccorr(x0.values, soft_threshold(inner, lambda));
}

DAlphaResult d_alpha(const Vec& a, const Vec& a0, const std::vector<long>& tau) {
  const long p = a.size();
  const ShiftDictionary d = make_dictionary(a0, p);
  const long m = d.A.cols();

  std::vector<bool> in_tau(m, false);
  for (long c : tau) in_tau[d.index_of(c)] = true;
  long ntau = 0;
  for (bool b : in_tau) ntau += b;

  Eigen::MatrixXd At(p, ntau), Ac(p, m - ntau);
  std::vector<long> tau_cols, comp_cols;
  for (long j = 0; j < m; ++j) {
    if (in_tau[j]) {
      At.col(tau_cols.size()) = d.A.col(j);
      tau_cols.push_back(j);
    } else {
      Ac.col(comp_cols.size()) = d.A.col(j);
      comp_cols.push_back(j);
    }
  }

  // project out range(A_tau), then min-norm solve on the complement columns
  Eigen::MatrixXd Q;  // orthonormal basis of range(A_tau)
  if (ntau > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
    qr.setThreshold(kRankTol);
    const long r = qr.rank();
    Eigen::MatrixXd Qfull =
        qr.householderQ() * Eigen::MatrixXd::Identity(p, std::min<long>(p, ntau));
    Q = Qfull.leftCols(r);
  }
  auto deflate = [&](const Eigen::MatrixXd& X) -> Eigen::MatrixXd {
    if (Q.size() == 0) return X;
    return X - Q * (Q.transpose() * X);
  };
  const Eigen::MatrixXd B = deflate(Ac);
  const Eigen::VectorXd b = deflate(a);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTol);
  const Eigen::VectorXd z = svd.solve(b);
  const double resid = (B * z - b).norm();
  if (resid > kFeasTol * std::max(1.0, a.norm())) throw OutsideShiftSpan(resid);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
  for (size_t k = 0; k < comp_cols.size(); ++k) alpha[comp_cols[k]] = z[k];

  if (ntau > 0) {
    // any consistent tau-coefficients serve as the witness
    Eigen::VectorXd rhs = a - Ac * z;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
    qr.setThreshold(kRankTol);
    Eigen::VectorXd at = qr.solve(rhs);
    for (size_t k = 0; k < tau_cols.size(); ++k) alpha[tau_cols[k]] = at[k];
  }

  DAlphaResult res;
  res.dist = z.norm();
  res.alpha = std::move(alpha);
  return res;
}

RegionInfo classify_region(const Vec& a, const Vec& a0, double theta, double lambda) {
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::invalid_argument("classify_region: theta must lie in (0,1)");
  const long n = a.size() + a0.size();
  const Vec beta = beta_of(a, a0, n);
  double b0 = 0.0, b1 = 0.0;
  for (long i = 0; i < beta.size(); ++i) {
    const double v = std::abs(beta[i]);
    if (v > b0) {
      b1 = b0;
      b0 = v;
    } else if (v > b1) {
      b1 = v;
    }
  }
  const double logt = std::log(1.0 / theta);
  const double nu2lam = lambda / (4.0 * logt * logt);
  RegionInfo info;
  info.beta0 = b0;
  info.beta1 = b1;
  if (b1 >= 0.8 * b0)
    info.label = Region::NegativeCurvature;
  else if (b1 >= nu2lam)
    info.label = Region::LargeGradient;
  else
    info.label = Region::ConvexNearShift;
  return info;
}

double oracle_erf_b(double b, double lambda, double s) {
  const double ab = std::abs(b);
  auto erf_term = [&](double num) {
    if (ab < 1e-300) return num > 0.0 ? 1.0 : (num < 0.0 ? -1.0 : 0.0);
    return std::erf(num / (std::sqrt(2.0) * ab));
  };
  return 0.5 * erf_term(lambda + s) + 0.5 * erf_term(lambda - s);
}

double oracle_smoothed_soft(double b, double lambda, double s) {
  if (std::abs(b) < 1e-300) return 0.0;
  return b * (1.0 - oracle_erf_b(b, lambda, s));
}

double oracle_f_b(double b, double lambda, double s) {
  const double ab = std::abs(b);
  auto term = [&](double num) {
    if (ab < 1e-300) return 0.0;
    const double t = num / ab;
    return t * std::exp(-0.5 * t * t);
  };
  return (term(lambda + s) + term(lambda - s)) / std::sqrt(2.0 * M_PI);
}

double oracle_smoothed_indicator(double b, double lambda, double s) {
  if (std::abs(b) < 1e-300) return std::abs(s) > lambda ? 1.0 : 0.0;
  return 1.0 - oracle_erf_b(b, lambda, s) + oracle_f_b(b, lambda, s);
}

ShiftAlignment signed_shift_error(const Vec& a, const Vec& a0, long n) {
  const long p = a.size();
  const long p0 = a0.size();
  const Vec beta = beta_of(a, a0, n);
  const double asq = a.squaredNorm();

  auto trunc_sqnorm = [&](long ell) {
    // ||iota_p^* s_ell[iota a0]||^2 in the length-n embedding
    double acc = 0.0;
    for (long j = 0; j < p0; ++j) {
      long w = (ell + j) % n;
      if (w < 0) w += n;
      if (w < p) acc += a0[j] * a0[j];
    }
    return acc;
  };

  ShiftAlignment best;
  best.err = std::numeric_limits<double>::infinity();
  for (long ell = 0; ell < n; ++ell) {
    const double ab = std::abs(beta[ell]);
    best.max_corr = std::max(best.max_corr, ab);
    // only shifts overlapping the window can beat the trivial distance
    const bool overlaps = (ell <= p - 1) || (ell >= n - p0 + 1);
    const double csq = overlaps ? trunc_sqnorm(ell) : 0.0;
    const double err2 = asq + csq - 2.0 * ab;
    if (err2 < best.err) {
      best.err = err2;
      best.ell = ell;
      best.sign = beta[ell] >= 0.0 ? 1 : -1;
    }
  }

  // the correlation route floors at sqrt(machine eps); recompute the winner
  // as an explicit difference
  Vec c = Vec::Zero(p);
  for (long j = 0; j < p0; ++j) {
    long w = (best.ell + j) % n;
    if (w < 0) w += n;
    if (w < p) c[w] = a0[j];
  }
  best.err = (a - static_cast<double>(best.sign) * c).norm();
  return best;
}

}  // namespace sasd

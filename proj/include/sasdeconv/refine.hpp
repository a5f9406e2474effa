#pragma once

#include "sasdeconv/signal.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace sasd {

struct DegenerateSparseMap : std::runtime_error {
  explicit DegenerateSparseMap(const std::string& why)
      : std::runtime_error("degenerate sparse map: " + why) {}
};

enum class Lambda0Mode { Alg1, Thm34, Explicit };

struct RefineConfig {
  Lambda0Mode lambda0_mode = Lambda0Mode::Alg1;
  double lambda0_explicit = 0.0;
  int K2 = 10;
  double theta = 0.05;  // sparsity rate used by the lambda0 formulas
  // mu for the lambda0 formulas: measured truncated shift coherence of the
  // incoming a_bar unless overridden (e.g. with ground-truth coherence).
  std::optional<double> mu;
  double lasso_tol = 1e-8;
  int lasso_max_iters = 4000;
  double cond_limit = 1e12;

  double kappa_I(long n, long p) const;
  double lambda0(long n, long p, double mu_value) const;
};

struct LassoResult {
  SparseMap x;
  int iters = 0;
  bool converged = false;
};

// min_x 0.5 ||a*x - y||^2 + lambda sum_{i not in I_track} |x_i| via
// accelerated proximal gradient; entries in I_track get the identity prox.
// Step 1/L with L from 10 power-iteration steps on C_a^* C_a.
LassoResult reweighted_lasso(const Vec& a, const Observation& y, double lambda,
                             const std::vector<long>& I_track,
                             const RefineConfig& cfg);

// argmin_a 0.5 ||a*x - y||^2 over length-p kernels via the Toeplitz normal
// system, then sphere projection. Throws DegenerateSparseMap when x cannot
// identify a (condition number above cfg.cond_limit, or x == 0).
Vec ls_kernel(const SparseMap& x, const Observation& y, long p,
              double cond_limit = 1e12);

struct RefineIterRecord {
  int iter = 0;
  double lambda = 0.0;
  double err_a = -1.0;  // alignment error to ground truth; -1 when unknown
  long supp_size = 0;
  int lasso_iters = 0;
  bool lasso_converged = true;
};

struct RefineTrace {
  std::vector<RefineIterRecord> iters;
  // CSV columns: iter,lambda,err_a,supp_size,lasso_iters
  void write_csv(std::ostream& os) const;
};

struct RefineResult {
  Vec a_hat;
  SparseMap x_hat;
  RefineTrace trace;
  double lambda0 = 0.0;
};

// Homotopy alternating minimization (Algorithm-1 refinement block):
// I0 from the soft-thresholded correlation, then K2 rounds of reweighted
// Lasso / least-squares / lambda halving / support tracking. ground_truth,
// when provided, is only used for the error column of the trace.
RefineResult refine_loop(const Vec& a_bar, const Observation& y, const RefineConfig& cfg,
                         const Kernel* ground_truth_a0 = nullptr);

}  // namespace sasd

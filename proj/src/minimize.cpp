#include "sasdeconv/minimize.hpp"

#include "sasdeconv/rng.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

namespace sasd {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Stalled: return "stalled";
  }
  return "unknown";
}

Vec exp_map(const Vec& a, const Vec& u) {
  const double nu = u.norm();
  if (nu < 1e-12) return a;
  return std::cos(nu) * a + (std::sin(nu) / nu) * u;
}

Vec log_map(const Vec& a, const Vec& b) {
  double ip = a.dot(b);
  ip = std::max(-1.0, std::min(1.0, ip));
  Vec pb = b - ip * a;
  const double npb = pb.norm();
  if (npb < 1e-12) {
    if (ip < 0.0) throw std::invalid_argument("log_map: antipodal points");
    return Vec::Zero(a.size());
  }
  return (std::acos(ip) / npb) * pb;
}

void MinimizeTrace::write_csv(std::ostream& os) const {
  os << "iter,phi,grad_norm,step,used_curvature\n";
  for (const auto& r : iters) {
    os << r.iter << ',' << r.phi << ',' << r.grad_norm << ',' << r.step << ','
       << (r.used_curvature ? 1 : 0) << '\n';
  }
}

double MinimizeConfig::resolved_lambda(int p0, double theta) const {
  return lambda ? *lambda : c_lambda / std::sqrt(p0 * theta);
}
double MinimizeConfig::resolved_delta(int p0, double theta) const {
  return delta ? *delta : delta_ratio * resolved_lambda(p0, theta);
}
double MinimizeConfig::resolved_t_max(long n, double theta) const {
  return t_max ? *t_max : 0.1 / (static_cast<double>(n) * theta);
}
double MinimizeConfig::resolved_grad_tol(long n, double theta) const {
  return grad_tol ? *grad_tol : 1e-6 * static_cast<double>(n) * theta;
}
double MinimizeConfig::resolved_eta_v(long n, double theta, double lam) const {
  return eta_v ? *eta_v : eta_v_c * static_cast<double>(n) * theta * lam;
}

Vec init_a0(const Observation& y, int p0, const ObjectiveContext& ctx,
            long window_offset, bool use_ell1) {
  const long p = 3L * p0 - 2;
  if (y.n() < p) throw std::invalid_argument("init_a0: need n >= 3*p0 - 2");
  if (ctx.p != p) throw std::invalid_argument("init_a0: context p mismatch");
  Vec w(p0);
  for (int i = 0; i < p0; ++i) {
    long idx = (window_offset + i) % y.n();
    if (idx < 0) idx += y.n();
    w[i] = y.values()[idx];
  }
  Vec seed;
  try {
    seed = project_sphere(zero_pad_window(w));
  } catch (const DegenerateProjection&) {
    throw std::runtime_error(
        "init_a0: data window is all zero; retry with a different window offset");
  }
  const Vec g = use_ell1 ? egrad_phi_ell1(seed, ctx) : egrad_phi_rho(seed, ctx);
  try {
    return Vec(-project_sphere(g));
  } catch (const DegenerateProjection&) {
    throw std::runtime_error(
        "init_a0: vanished gradient at the window seed; retry with a different "
        "window offset");
  }
}

MinimizeResult curvilinear_search(const Vec& a_init, const ObjectiveContext& ctx,
                                  const MinimizeConfig& cfg, int /*p0*/, double theta) {
  const auto t0 = Clock::now();
  const long n = ctx.n();
  const double lam = ctx.params.lambda;
  const double eta_v = cfg.resolved_eta_v(n, theta, lam);
  const double t_max = cfg.resolved_t_max(n, theta);
  const double gtol = cfg.resolved_grad_tol(n, theta);

  MinimizeResult out;
  out.a = project_sphere(a_init);
  out.status = SolveStatus::MaxIters;

  EvalBundle bundle = eval_phi_rho(out.a, ctx);
  Vec eig_guess;

  for (int k = 1; k <= cfg.K1; ++k) {
    const Vec egrad = egrad_from_bundle(bundle, ctx);
    const Vec g = egrad - out.a.dot(egrad) * out.a;
    const double gnorm = g.norm();

    HessianOperator H(out.a, bundle, ctx);
    EigOptions eopts;
    eopts.tol = cfg.eig_tol;
    eopts.max_iters = cfg.eig_max_iters;
    eopts.power_iters = cfg.eig_power_iters;
    eopts.seed = derive_stream(cfg.eig_seed, static_cast<std::uint64_t>(k));
    eopts.grad = &g;
    if (eig_guess.size() == out.a.size()) eopts.guess = &eig_guess;
    const EigResult eig = min_eigpair(H, ctx, eopts);
    eig_guess = eig.eigvec;

    const bool use_curv = eig.converged && eig.eigval < -eta_v;
    const Vec v = use_curv ? eig.eigvec : Vec(Vec::Zero(out.a.size()));
    const double vsq = use_curv ? 1.0 : 0.0;

    if (gnorm <= gtol && !use_curv) {
      out.status = SolveStatus::Converged;
      break;
    }

    // largest t in the backtracking sequence satisfying Eq. 18
    const double gsq = gnorm * gnorm;
    double t = t_max;
    bool accepted = false;
    EvalBundle next;
    Vec a_next;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      a_next = project_sphere(Vec(out.a - t * g - (t * t) * v));
      next = eval_phi_rho(a_next, ctx);
      const double needed =
          bundle.value - 0.5 * (t * gsq + 0.5 * t * t * t * t * eta_v * vsq);
      if (next.value < needed) {
        accepted = true;
        break;
      }
      t *= cfg.armijo_shrink;
    }
    if (!accepted) {
      out.status = SolveStatus::Stalled;
      break;
    }

    IterRecord rec;
    rec.iter = k;
    rec.phi = next.value;
    rec.grad_norm = gnorm;
    rec.step = t;
    rec.used_curvature = use_curv;
    rec.phi_ref = bundle.value;
    rec.gnorm_sq = gsq;
    rec.vnorm_sq = vsq;
    rec.eta_v = eta_v;
    rec.armijo_coeff = 0.5;
    rec.eigval = eig.eigval;
    rec.wall_ms = ms_since(t0);
    out.trace.iters.push_back(rec);

    out.a = a_next;
    bundle = next;
  }
  return out;
}

MinimizeResult accelerated_rgd(const Vec& a_init, const ObjectiveContext& ctx,
                               const MinimizeConfig& cfg, int /*p0*/, double theta) {
  const auto t0 = Clock::now();
  const long n = ctx.n();
  const double gtol = cfg.resolved_grad_tol(n, theta);
  const double carm = cfg.argd_armijo_coeff;

  MinimizeResult out;
  out.a = project_sphere(a_init);
  out.status = SolveStatus::MaxIters;

  Vec a_prev = out.a;
  double phi_a = phi_rho(out.a, ctx);

  for (int k = 1; k <= cfg.K1; ++k) {
    Vec w;
    double phi_w;
    if (k == 1) {
      w = out.a;
      phi_w = phi_a;
    } else {
      // Log lives in the tangent space at the previous iterate; the sphere
      // projection absorbs the small non-tangency at the current one
      const Vec u = cfg.momentum_eta * log_map(a_prev, out.a);
      if (u.norm() < 1e-12) {
        w = out.a;
        phi_w = phi_a;
      } else {
        w = project_sphere(exp_map(out.a, u));
        phi_w = phi_rho(w, ctx);
        if (cfg.momentum_restart && phi_w > phi_a) {
          w = out.a;
          phi_w = phi_a;
        }
      }
    }

    const Vec g = -rgrad_phi_rho(w, ctx);
    const double gsq = g.squaredNorm();
    const double gnorm = std::sqrt(gsq);
    if (gnorm <= gtol) {
      out.status = SolveStatus::Converged;
      break;
    }

    double t = 1.0;
    bool accepted = false;
    Vec a_next;
    double phi_next = 0.0;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      a_next = project_sphere(exp_map(w, Vec(t * g)));
      phi_next = phi_rho(a_next, ctx);
      if (phi_next - phi_w < -carm * t * gsq) {
        accepted = true;
        break;
      }
      t *= cfg.armijo_shrink;
    }
    if (!accepted) {
      out.status = SolveStatus::Stalled;
      break;
    }

    IterRecord rec;
    rec.iter = k;
    rec.phi = phi_next;
    rec.grad_norm = gnorm;
    rec.step = t;
    rec.used_curvature = false;
    rec.phi_ref = phi_w;
    rec.gnorm_sq = gsq;
    rec.vnorm_sq = 0.0;
    rec.eta_v = 0.0;
    rec.armijo_coeff = carm;
    rec.wall_ms = ms_since(t0);
    out.trace.iters.push_back(rec);

    a_prev = out.a;
    out.a = a_next;
    phi_a = phi_next;
  }
  return out;
}

}  // namespace sasd

#include "sasdeconv/gridrun.hpp"

#include "sasdeconv/rng.hpp"
#include "sasdeconv/shiftspace.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace sasd {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr const char* kCsvSchema =
    "# sasdeconv grid csv v1: p0,theta,trial,seed,success,max_corr,iters,mu_measured,status";

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (p0_values.empty()) throw std::invalid_argument("p0_values: must be non-empty");
  if (theta_values.empty()) throw std::invalid_argument("theta_values: must be non-empty");
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
  for (double t : theta_values)
    if (!(t > 0.0) || !(t < 1.0)) throw std::invalid_argument("theta: must lie in (0, 1)");
  for (int p0 : p0_values) {
    if (p0 < 2) throw std::invalid_argument("p0: must be >= 2");
    if (n < 3L * p0 - 2) throw std::invalid_argument("n: must be >= 3*p0 - 2");
  }
  if (solver != "argd" && solver != "curvilinear")
    throw std::invalid_argument("solver: must be 'argd' or 'curvilinear'");
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  json j;
  is >> j;
  ExperimentConfig cfg;
  cfg.p0_values = j.at("p0_values").get<std::vector<int>>();
  cfg.theta_values = j.at("theta_values").get<std::vector<double>>();
  cfg.trials = j.value("trials", cfg.trials);
  cfg.n = j.value("n", cfg.n);
  cfg.family = family_from_name(j.value("family", std::string("generic")));
  cfg.solver = j.value("solver", cfg.solver);
  cfg.refine = j.value("refine", cfg.refine);
  cfg.base_seed = j.value("base_seed", cfg.base_seed);
  cfg.minimize.c_lambda = j.value("c_lambda", cfg.minimize.c_lambda);
  cfg.minimize.delta_ratio = j.value("delta_ratio", cfg.minimize.delta_ratio);
  cfg.minimize.K1 = j.value("K1", cfg.minimize.K1);
  cfg.minimize.momentum_eta = j.value("momentum_eta", cfg.minimize.momentum_eta);
  if (j.contains("grad_tol")) cfg.minimize.grad_tol = j.at("grad_tol").get<double>();
  cfg.refine_cfg.K2 = j.value("K2", cfg.refine_cfg.K2);
  cfg.validate();
  return cfg;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int p0, double theta, int trial) {
  return derive_stream(base_seed, static_cast<std::uint64_t>(p0), double_bits(theta),
                       static_cast<std::uint64_t>(trial));
}

CellResult run_trial(const ExperimentConfig& cfg, int p0, double theta, int trial) {
  CellResult cell;
  cell.p0 = p0;
  cell.theta = theta;
  cell.trial = trial;
  cell.seed = trial_seed(cfg.base_seed, p0, theta, trial);

  const auto t0 = Clock::now();
  try {
    InstanceSpec spec;
    spec.p0 = p0;
    spec.n = cfg.n;
    spec.theta = theta;
    spec.family = cfg.family;
    spec.seed = cell.seed;
    PlantedInstance inst = make_instance(spec);
    cell.mu_measured = shift_coherence(inst.a0.values, std::min<long>(cfg.n, 4L * p0));

    MinimizeConfig mcfg = cfg.minimize;
    SurrogateParams params{mcfg.resolved_lambda(p0, theta), mcfg.resolved_delta(p0, theta)};
    auto yptr = std::make_shared<const Observation>(inst.y);
    ObjectiveContext ctx = ObjectiveContext::make(yptr, 3L * p0 - 2, params);

    const Vec a0 = init_a0(*yptr, p0, ctx);
    MinimizeResult res = cfg.solver == "curvilinear"
                             ? curvilinear_search(a0, ctx, mcfg, p0, theta)
                             : accelerated_rgd(a0, ctx, mcfg, p0, theta);
    cell.iters = static_cast<int>(res.trace.iters.size());
    cell.status = status_name(res.status);

    Vec a_min = res.a;
    if (cfg.refine) {
      RefineConfig rcfg = cfg.refine_cfg;
      rcfg.theta = theta;
      RefineResult ref = refine_loop(a_min, *yptr, rcfg, &inst.a0);
      a_min = ref.a_hat;
    }
    cell.max_corr = signed_shift_error(a_min, inst.a0.values, cfg.n).max_corr;
    cell.success = cell.max_corr > 0.95;
  } catch (const std::exception& e) {
    cell.status = std::string("error: ") + e.what();
    cell.success = false;
  }
  cell.runtime_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return cell;
}

std::vector<CellResult> run_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Task {
    int p0;
    double theta;
    int trial;
  };
  std::vector<Task> tasks;
  for (int p0 : cfg.p0_values)
    for (double theta : cfg.theta_values)
      for (int t = 0; t < cfg.trials; ++t) tasks.push_back({p0, theta, t});

  std::vector<CellResult> rows(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(tasks.size()); ++i)
    rows[i] = run_trial(cfg, tasks[i].p0, tasks[i].theta, tasks[i].trial);

  std::sort(rows.begin(), rows.end(), [](const CellResult& a, const CellResult& b) {
    if (a.p0 != b.p0) return a.p0 < b.p0;
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.trial < b.trial;
  });
  return rows;
}

void write_grid_csv(const std::vector<CellResult>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << kCsvSchema << '\n';
  os << "p0,theta,trial,seed,success,max_corr,iters,mu_measured,status\n";
  for (const auto& r : rows) {
    os << r.p0 << ',' << fmt_double(r.theta) << ',' << r.trial << ',' << r.seed << ','
       << (r.success ? 1 : 0) << ',' << fmt_double(r.max_corr) << ',' << r.iters << ','
       << fmt_double(r.mu_measured) << ',' << r.status << '\n';
  }
}

void write_grid_summary(const std::vector<CellResult>& rows, const ExperimentConfig& cfg,
                        const std::string& path) {
  json cells = json::array();
  for (int p0 : cfg.p0_values) {
    for (double theta : cfg.theta_values) {
      int total = 0, succ = 0;
      for (const auto& r : rows)
        if (r.p0 == p0 && r.theta == theta) {
          ++total;
          succ += r.success ? 1 : 0;
        }
      if (total == 0) continue;
      cells.push_back({{"p0", p0},
                       {"theta", theta},
                       {"trials", total},
                       {"successes", succ},
                       {"success_rate", static_cast<double>(succ) / total}});
    }
  }
  json summary;
  summary["format"] = "sasdeconv-grid-summary";
  summary["solver"] = cfg.solver;
  summary["family"] = family_name(cfg.family);
  summary["n"] = cfg.n;
  summary["base_seed"] = cfg.base_seed;
  summary["cells"] = cells;
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << summary.dump(2) << '\n';
}

}  // namespace sasd

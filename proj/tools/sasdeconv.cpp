#include "sasdeconv/gridrun.hpp"
#include "sasdeconv/io.hpp"
#include "sasdeconv/shiftspace.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using json = nlohmann::ordered_json;
using namespace sasd;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct GenOptions {
  std::string config;
  std::string out = "instance";
  int p0 = 32;
  long n = 1L << 14;
  double theta = 0.05;
  std::string family = "generic";
  int lowpass_L = 0;
  double lowpass_beta = 0.0;
  double spiky_noise = -1.0;
  std::uint64_t seed = 0;
};

InstanceSpec spec_from_options(const GenOptions& o) {
  InstanceSpec spec;
  if (!o.config.empty()) {
    std::ifstream is(o.config);
    if (!is) throw IoError("cannot open config " + o.config);
    json j;
    is >> j;
    spec.p0 = j.value("p0", spec.p0);
    spec.n = j.value("n", spec.n);
    spec.theta = j.value("theta", spec.theta);
    spec.family = family_from_name(j.value("family", std::string("generic")));
    spec.lowpass_L = j.value("lowpass_L", spec.lowpass_L);
    spec.lowpass_beta = j.value("lowpass_beta", spec.lowpass_beta);
    spec.spiky_noise = j.value("spiky_noise", spec.spiky_noise);
    spec.seed = j.value("seed", spec.seed);
  } else {
    spec.p0 = o.p0;
    spec.n = o.n;
    spec.theta = o.theta;
    spec.family = family_from_name(o.family);
    spec.lowpass_L = o.lowpass_L;
    spec.lowpass_beta = o.lowpass_beta;
    spec.spiky_noise = o.spiky_noise;
    spec.seed = o.seed;
  }
  spec.validate();
  return spec;
}

int cmd_gen(const GenOptions& o) {
  const InstanceSpec spec = spec_from_options(o);
  const PlantedInstance inst = make_instance(spec);
  save_instance(inst, o.out);
  json summary = {
      {"instance", o.out + ".json"},
      {"p0", spec.p0},
      {"n", spec.n},
      {"theta", spec.theta},
      {"family", family_name(spec.family)},
      {"seed", spec.seed},
      {"x0_support_size", inst.x0.support.size()},
      {"mu", shift_coherence(inst.a0.values, std::min<long>(spec.n, 4L * spec.p0))},
      {"truncated_mu", truncated_shift_coherence(inst.a0.values)},
  };
  std::cout << summary.dump(2) << std::endl;
  return kExitOk;
}

struct SolveOptions {
  std::string instance;
  std::string out = "solve";
  std::string solver = "argd";
  bool refine = false;
  double c_lambda = 0.5;
  double delta_ratio = 1e-2;
  int K1 = 500;
  int K2 = 10;
  double momentum_eta = 0.9;
  std::string lambda0_mode = "alg1";
  double lambda0 = 0.0;
};

Lambda0Mode lambda0_mode_from(const std::string& s) {
  if (s == "alg1") return Lambda0Mode::Alg1;
  if (s == "thm34") return Lambda0Mode::Thm34;
  if (s == "explicit") return Lambda0Mode::Explicit;
  throw std::invalid_argument("lambda0-mode: must be alg1, thm34 or explicit");
}

int cmd_solve(const SolveOptions& o, bool refine_only) {
  const PlantedInstance inst = load_instance(o.instance);
  const int p0 = inst.spec.p0;
  const double theta = inst.spec.theta;
  const long p = 3L * p0 - 2;

  MinimizeConfig mcfg;
  mcfg.c_lambda = o.c_lambda;
  mcfg.delta_ratio = o.delta_ratio;
  mcfg.K1 = o.K1;
  mcfg.momentum_eta = o.momentum_eta;
  SurrogateParams params{mcfg.resolved_lambda(p0, theta), mcfg.resolved_delta(p0, theta)};
  auto yptr = std::make_shared<const Observation>(inst.y);
  ObjectiveContext ctx = ObjectiveContext::make(yptr, p, params);

  json result;
  result["format"] = "sasdeconv-result";
  result["instance"] = o.instance;
  result["lambda"] = params.lambda;
  result["delta"] = params.delta;

  Vec a_min;
  if (refine_only) {
    a_min = project_sphere(embed(inst.a0.values, p));  // refine from the planted kernel
    result["solver"] = "none";
  } else {
    const Vec a0 = init_a0(*yptr, p0, ctx);
    MinimizeResult res = o.solver == "curvilinear"
                             ? curvilinear_search(a0, ctx, mcfg, p0, theta)
                             : accelerated_rgd(a0, ctx, mcfg, p0, theta);
    a_min = res.a;
    result["solver"] = o.solver;
    result["status"] = status_name(res.status);
    result["iters"] = res.trace.iters.size();
    std::ofstream tr(o.out + "_trace.csv", std::ios::trunc);
    res.trace.write_csv(tr);
  }

  SparseMap x_hat;
  if (o.refine || refine_only) {
    RefineConfig rcfg;
    rcfg.theta = theta;
    rcfg.K2 = o.K2;
    rcfg.lambda0_mode = lambda0_mode_from(o.lambda0_mode);
    rcfg.lambda0_explicit = o.lambda0;
    RefineResult ref = refine_loop(a_min, *yptr, rcfg, &inst.a0);
    a_min = ref.a_hat;
    x_hat = ref.x_hat;
    result["refine_lambda0"] = ref.lambda0;
    std::ofstream tr(o.out + "_refine_trace.csv", std::ios::trunc);
    ref.trace.write_csv(tr);
  }

  const ShiftAlignment align = signed_shift_error(a_min, inst.a0.values, inst.spec.n);
  result["max_corr"] = align.max_corr;
  result["success"] = align.max_corr > 0.95;
  result["align_err"] = align.err;
  result["align_shift"] = align.ell;
  result["align_sign"] = align.sign;

  save_vector_f64(a_min, o.out + "_a.f64");
  result["a_hat"] = o.out + "_a.f64";
  if (x_hat.n() > 0) {
    save_vector_f64(x_hat.values, o.out + "_x.f64");
    result["x_hat"] = o.out + "_x.f64";
    result["x_hat_support_size"] = x_hat.support.size();
  }

  std::ofstream os(o.out + ".json", std::ios::trunc);
  if (!os) throw IoError("cannot open " + o.out + ".json for writing");
  os << result.dump(2) << '\n';
  std::cout << result.dump(2) << std::endl;
  return kExitOk;
}

struct DiagnoseOptions {
  std::string instance;
  std::string a_file;
  std::string out;
  std::vector<long> tau;
  int top_k = 8;
};

int cmd_diagnose(const DiagnoseOptions& o) {
  const PlantedInstance inst = load_instance(o.instance);
  const long p = 3L * inst.spec.p0 - 2;
  Vec a = o.a_file.empty() ? project_sphere(embed(inst.a0.values, p))
                           : load_vector_f64(o.a_file);
  if (a.size() != p)
    throw std::invalid_argument("a: expected length 3*p0-2 = " + std::to_string(p) +
                                ", got " + std::to_string(a.size()));
  a = project_sphere(a);

  const double lambda = 0.1 / std::sqrt(inst.spec.p0 * inst.spec.theta);
  const RegionInfo region = classify_region(a, inst.a0.values, inst.spec.theta, lambda);

  const Vec beta = beta_of(a, inst.a0.values, inst.spec.n);
  std::vector<long> order(beta.size());
  for (long i = 0; i < beta.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](long i, long j) { return std::abs(beta[i]) > std::abs(beta[j]); });
  json top = json::array();
  const int p0 = inst.spec.p0;
  for (int k = 0; k < o.top_k && k < static_cast<int>(order.size()); ++k) {
    long raw = order[k];
    long folded = raw <= inst.spec.n / 2 ? raw : raw - inst.spec.n;
    top.push_back({{"shift_raw", raw},
                   {"shift_centered", folded - (p0 - 1)},
                   {"beta", beta[raw]}});
  }

  std::vector<long> tau = o.tau;
  if (tau.empty()) {
    const int want = std::max<int>(1, static_cast<int>(std::ceil(4 * inst.spec.theta * p0)));
    for (int k = 0; k < want && k < static_cast<int>(order.size()); ++k) {
      long folded = order[k] <= inst.spec.n / 2 ? order[k] : order[k] - inst.spec.n;
      long centered = folded - (p0 - 1);
      if (std::abs(centered) <= 2 * p0 - 2) tau.push_back(centered);
    }
  }

  json result;
  result["format"] = "sasdeconv-diagnostic";
  result["instance"] = o.instance;
  result["lambda"] = lambda;
  result["region"] = region_name(region.label);
  result["beta0"] = region.beta0;
  result["beta1"] = region.beta1;
  result["beta_top_k"] = top;
  result["tau"] = tau;
  try {
    const DAlphaResult da = d_alpha(a, inst.a0.values, tau);
    result["d_alpha"] = da.dist;
  } catch (const OutsideShiftSpan& e) {
    result["d_alpha"] = nullptr;
    result["d_alpha_error"] = e.what();
  }
  result["mu"] = shift_coherence(inst.a0.values, std::min<long>(inst.spec.n, 4L * p0));
  result["truncated_mu"] = truncated_shift_coherence(inst.a0.values);

  if (!o.out.empty()) {
    std::ofstream os(o.out, std::ios::trunc);
    if (!os) throw IoError("cannot open " + o.out + " for writing");
    os << result.dump(2) << '\n';
  }
  std::cout << result.dump(2) << std::endl;
  return kExitOk;
}

struct GridOptions {
  std::string config;
  std::string out = "grid";
};

int cmd_grid(const GridOptions& o) {
  const ExperimentConfig cfg = ExperimentConfig::from_json_file(o.config);
  const auto rows = run_grid(cfg);
  write_grid_csv(rows, o.out + ".csv");
  write_grid_summary(rows, cfg, o.out + "_summary.json");
  double total_ms = 0.0;
  for (const auto& r : rows) total_ms += r.runtime_ms;
  std::cerr << "[grid] " << rows.size() << " trials, total solve time " << total_ms / 1e3
            << " s, results in " << o.out << ".csv" << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short-and-Sparse blind deconvolution over the sphere"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* sc_gen = app.add_subcommand("gen", "generate a planted instance");
  sc_gen->add_option("--config", gen.config, "instance spec JSON");
  sc_gen->add_option("--out", gen.out, "output prefix");
  sc_gen->add_option("--p0", gen.p0, "kernel length");
  sc_gen->add_option("--n", gen.n, "signal length");
  sc_gen->add_option("--theta", gen.theta, "sparsity rate in (0,1)");
  sc_gen->add_option("--family", gen.family, "spiky|generic|tapered_lowpass");
  sc_gen->add_option("--lowpass-L", gen.lowpass_L, "retained DFT frequencies");
  sc_gen->add_option("--lowpass-beta", gen.lowpass_beta, "coherence target beta");
  sc_gen->add_option("--spiky-noise", gen.spiky_noise, "spiky off-peak noise");
  sc_gen->add_option("--seed", gen.seed, "instance seed");

  SolveOptions solve;
  auto* sc_solve = app.add_subcommand("solve", "minimize phi_rho on an instance");
  sc_solve->add_option("instance", solve.instance, "instance JSON path")->required();
  sc_solve->add_option("--out", solve.out, "output prefix");
  sc_solve->add_option("--solver", solve.solver, "argd|curvilinear");
  sc_solve->add_flag("--refine", solve.refine, "run homotopy refinement after minimize");
  sc_solve->add_option("--c-lambda", solve.c_lambda, "lambda = c/sqrt(p0*theta)");
  sc_solve->add_option("--delta-ratio", solve.delta_ratio, "delta = ratio*lambda");
  sc_solve->add_option("--K1", solve.K1, "minimization iteration cap");
  sc_solve->add_option("--K2", solve.K2, "refinement iteration cap");
  sc_solve->add_option("--momentum-eta", solve.momentum_eta, "ARGD momentum");
  sc_solve->add_option("--lambda0-mode", solve.lambda0_mode, "alg1|thm34|explicit");
  sc_solve->add_option("--lambda0", solve.lambda0, "explicit refinement lambda0");

  SolveOptions refi;
  auto* sc_refine = app.add_subcommand("refine", "homotopy refinement from the planted kernel");
  sc_refine->add_option("instance", refi.instance, "instance JSON path")->required();
  sc_refine->add_option("--out", refi.out, "output prefix");
  sc_refine->add_option("--K2", refi.K2, "refinement iteration cap");
  sc_refine->add_option("--lambda0-mode", refi.lambda0_mode, "alg1|thm34|explicit");
  sc_refine->add_option("--lambda0", refi.lambda0, "explicit refinement lambda0");

  DiagnoseOptions diag;
  auto* sc_diag = app.add_subcommand("diagnose", "shift-space diagnostics for an iterate");
  sc_diag->add_option("instance", diag.instance, "instance JSON path")->required();
  sc_diag->add_option("--a", diag.a_file, "iterate file (.f64, length 3*p0-2)");
  sc_diag->add_option("--out", diag.out, "diagnostic JSON output path");
  sc_diag->add_option("--tau", diag.tau, "centered shift indices for d_alpha");
  sc_diag->add_option("--top-k", diag.top_k, "number of beta entries to report");

  GridOptions grid;
  auto* sc_grid = app.add_subcommand("grid", "phase-transition experiment grid");
  sc_grid->add_option("--config", grid.config, "experiment config JSON")->required();
  sc_grid->add_option("--out", grid.out, "output prefix");

  try {
    app.parse(argc, argv);
    if (sc_gen->parsed()) return cmd_gen(gen);
    if (sc_solve->parsed()) return cmd_solve(solve, false);
    if (sc_refine->parsed()) {
      refi.refine = true;
      return cmd_solve(refi, true);
    }
    if (sc_diag->parsed()) return cmd_diagnose(diag);
    if (sc_grid->parsed()) return cmd_grid(grid);
    return kExitValidation;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const sasd::IoError& e) {
    std::cerr << "io error: " << e.what() << std::endl;
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << std::endl;
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitIo;
  }
}

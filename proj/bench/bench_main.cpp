// Benchmark comparing the production kernels against the serial reference
// implementations, plus solver-level scaling across OpenMP threads.

#include "sasdeconv/gridrun.hpp"
#include "sasdeconv/reference.hpp"
#include "sasdeconv/rng.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace sasd;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up plans/buffers
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

Vec randn_vec(Rng& rng, long n) {
  Vec v(n);
  for (long i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

void bench_conv() {
  std::printf("--- circular convolution: fft path vs serial direct oracle ---\n");
  std::printf("%8s %6s %14s %14s %10s\n", "n", "m", "fft (ms)", "direct (ms)", "speedup");
  Rng rng(1);
  for (long n : {1L << 10, 1L << 13, 1L << 16}) {
    const long m = 3 * (n >= 4096 ? 64 : 16) - 2;
    const Vec a = randn_vec(rng, m);
    const Vec x = randn_vec(rng, n);
    const int reps = n >= (1L << 16) ? 3 : 10;
    const double fft_ms = time_ms([&] { cconv(a, x); }, 10 * reps);
    const double dir_ms = time_ms([&] { ref::cconv_direct(a, x); }, reps);
    std::printf("%8ld %6ld %14.4f %14.4f %9.1fx\n", n, m, fft_ms, dir_ms, dir_ms / fft_ms);
  }
}

void bench_prox() {
  std::printf("\n--- pseudo-huber prox: openmp newton vs serial bisection oracle ---\n");
  std::printf("%8s %8s %16s %16s %10s\n", "n", "threads", "newton (ms)", "bisect (ms)",
              "speedup");
  Rng rng(2);
  const SurrogateParams p{0.3, 3e-3};
  for (long n : {1L << 14, 1L << 17}) {
    const Vec z = 2.0 * randn_vec(rng, n);
    const double serial_ms = time_ms(
        [&] {
          Vec out(n);
          for (long i = 0; i < n; ++i)
            out[i] = ref::prox_pseudo_huber_bisect(z[i], p.lambda, p.delta);
        },
        3);
    for (int threads : {1, omp_get_max_threads()}) {
      omp_set_num_threads(threads);
      const double par_ms = time_ms([&] { prox_rho(z, p); }, 10);
      std::printf("%8ld %8d %16.4f %16.4f %9.1fx\n", n, threads, par_ms, serial_ms,
                  serial_ms / par_ms);
    }
  }
  omp_set_num_threads(omp_get_max_threads());
}

void bench_coherence() {
  std::printf("\n--- shift coherence: fft autocorrelation vs serial double loop ---\n");
  std::printf("%8s %8s %14s %14s %10s\n", "p0", "n", "fft (ms)", "direct (ms)", "speedup");
  Rng rng(3);
  for (long p0 : {64L, 256L}) {
    const long n = 4 * p0;
    const Vec a = project_sphere(randn_vec(rng, p0));
    const double fft_ms = time_ms([&] { shift_coherence(a, n); }, 20);
    const double dir_ms = time_ms([&] { ref::shift_coherence_direct(a, n); }, 3);
    std::printf("%8ld %8ld %14.4f %14.4f %9.1fx\n", p0, n, fft_ms, dir_ms,
                dir_ms / fft_ms);
  }
}

void bench_grid_scaling() {
  std::printf("\n--- grid runner scaling across openmp threads ---\n");
  ExperimentConfig cfg;
  cfg.p0_values = {16};
  cfg.theta_values = {0.05};
  cfg.trials = 16;
  cfg.n = 1L << 12;
  cfg.solver = "argd";
  cfg.base_seed = 4;
  cfg.minimize.K1 = 80;
  std::printf("%8s %14s\n", "threads", "wall (ms)");
  const int max_threads = omp_get_max_threads();
  for (int threads : {1, 2, max_threads}) {
    omp_set_num_threads(threads);
    const auto t0 = std::chrono::steady_clock::now();
    run_grid(cfg);
    const auto t1 = std::chrono::steady_clock::now();
    std::printf("%8d %14.1f\n", threads,
                std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  omp_set_num_threads(max_threads);
}

}  // namespace

int main() {
  std::printf("sasdeconv benchmarks (max %d openmp threads)\n\n", omp_get_max_threads());
  bench_conv();
  bench_prox();
  bench_coherence();
  bench_grid_scaling();
  return 0;
}

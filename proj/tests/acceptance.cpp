// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "z2amp/amp_engine.hpp"
#include "z2amp/config.hpp"
#include "z2amp/denoiser.hpp"
#include "z2amp/emit.hpp"
#include "z2amp/harness.hpp"
#include "z2amp/metrics.hpp"
#include "z2amp/state_evolution.hpp"

using namespace z2amp;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ExperimentConfig base(std::size_t n, double lambda, int seeds, int t_max) {
  ExperimentConfig c;
  c.n = n;
  c.lambda = lambda;
  c.n_seeds = seeds;
  c.t_max = t_max;
  c.backend = Backend::Dense;
  c.base_seed = 1;
  c.workers = 4;
  return c;
}

double mean_over(const std::vector<double>& v, std::size_t from) {
  double s = 0.0;
  for (std::size_t k = from; k < v.size(); ++k) s += v[k];
  return s / static_cast<double>(v.size() - from);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_files(const std::vector<fs::path>& a, const std::vector<fs::path>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (slurp(a[k]) != slurp(b[k])) return false;
  return true;
}

// ---------------------------------------------------------------------------

ExperimentResult criterion1() {
  const auto result = run_experiment(base(2000, 1.2, 20, 150));
  const auto& rnd = result.curves[0];
  const auto& spc = result.curves[1];
  const std::size_t from = 79;  // t = 80
  const double plateau_r = mean_over(rnd.mean_corr, from);
  const double plateau_s = mean_over(spc.mean_corr, from);
  double worst = 0.0;
  for (std::size_t k = from; k < rnd.mean_corr.size(); ++k)
    worst = std::max(worst, std::abs(rnd.mean_corr[k] - plateau_s));
  const double target = result.alpha_star / 1.2;
  const bool ok = worst <= 0.05 && std::abs(plateau_r - target) <= 0.05 &&
                  std::abs(plateau_s - target) <= 0.05;
  report(1, ok,
         "random vs spectral plateau max gap " + fmt("%.4f", worst) + " (<= 0.05); plateaus " +
             fmt("%.4f", plateau_r) + " / " + fmt("%.4f", plateau_s) + " vs alpha*/lambda " +
             fmt("%.4f", target) + " (+-0.05)");
  return result;
}

void criterion2() {
  struct Cell {
    double median;
    double finite_fraction;
  };
  const auto cell = [](std::size_t n, double lambda) {
    ExperimentConfig c = base(n, lambda, 20, 200);
    c.inits = {InitKind::Random};
    const auto row = summarize(run_experiment(c)).front();
    return Cell{row.median_crossing.value_or(std::numeric_limits<double>::infinity()),
                static_cast<double>(row.crossed) / row.runs};
  };

  bool ok = true;
  std::string detail = "median crossing at n=2000:";
  double prev = std::numeric_limits<double>::infinity();
  Cell at13{};
  for (double lambda : {1.1, 1.2, 1.3}) {
    const Cell c = cell(2000, lambda);
    if (lambda == 1.3) at13 = c;
    ok = ok && c.finite_fraction >= 0.9 && std::isfinite(c.median) && c.median < prev;
    prev = c.median;
    detail += " " + fmt("%.1f", c.median) + " (" + fmt("%.0f%%", 100 * c.finite_fraction) + ")";
  }
  detail += "; lambda=1.3 growth vs n=500:";
  const Cell c500 = cell(500, 1.3);
  ok = ok && std::isfinite(c500.median);
  for (std::size_t n : {1000u, 2000u}) {
    const Cell c = n == 2000 ? at13 : cell(n, 1.3);
    const double growth = c.median / c500.median;
    const double bound = 1.5 * std::log(double(n)) / std::log(500.0);
    ok = ok && growth <= bound;
    detail += " n=" + std::to_string(n) + " " + fmt("%.2f", growth) + " (<= " + fmt("%.2f", bound) + ")";
  }
  report(2, ok, detail);
}

// Per-seed max |log(alpha_t^2 / alpha*_t^2)| over crossing <= t <= 100.
double se_statistic(const ExperimentResult& result) {
  double sum = 0.0;
  int count = 0;
  for (const auto& run : result.runs) {
    if (!run.se_max_abs_log_ratio) return std::numeric_limits<double>::infinity();
    sum += *run.se_max_abs_log_ratio;
    ++count;
  }
  return sum / count;
}

void criteria3and4() {
  // Records 1..99 carry alpha_2..alpha_100.
  ExperimentConfig c = base(4000, 1.3, 10, 99);
  c.inits = {InitKind::Random};
  c.store_iterates = true;
  c.risk_t = 60;
  const auto big = run_experiment(c);

  ExperimentConfig small = c;
  small.n = 1000;
  small.store_iterates = false;
  small.risk_t = 0;
  const auto little = run_experiment(small);

  const double s4000 = se_statistic(big);
  const double s1000 = se_statistic(little);
  report(3, s4000 <= 0.15 && s1000 >= 0.9 * s4000,
         "mean max|log ratio| n=4000 " + fmt("%.4f", s4000) + " (<= 0.15), n=1000 " +
             fmt("%.4f", s1000) + " (>= 0.9 x n=4000)");

  double risk = 0.0;
  for (const auto& run : big.runs) risk += run.risk->empirical_risk;
  risk /= static_cast<double>(big.runs.size());
  const double lambda = 1.3;
  const double a = big.alpha_star;
  const double predicted = big.predicted_risk;
  // Large-n limit of the same estimator at the fixed point, for reference.
  const double a4 = std::pow(a, 4), s = a * a + 1.0;
  const double limit = 1.0 - 2.0 * a4 / (std::pow(lambda, 6) * s) + a4 / (std::pow(lambda, 8) * s * s);
  report(4, std::abs(risk - predicted) <= 0.05,
         "mean empirical risk at t=60 " + fmt("%.4f", risk) + " vs 1 - alpha*^4/lambda^4 = " +
             fmt("%.4f", predicted) + " (+-0.05); estimator's own large-n limit " +
             fmt("%.4f", limit));
}

void criterion5() {
  double identity = 0.0;
  for (double alpha : {0.25, 0.5, 1.0, 1.5})
    identity = std::max(identity, std::abs(h(alpha * alpha) - h_squared(alpha * alpha)));

  double derivative = 0.0;
  for (double tau = 0.05; tau <= 5.0; tau += 0.05) {
    const double step = 1e-5;
    const double fd = (h(tau + step) - h(tau - step)) / (2 * step);
    derivative = std::max(derivative, std::abs(h_prime(tau) - fd));
  }

  double residual = 0.0;
  for (double lambda : {1.05, 1.1, 1.2, 1.5}) {
    const double a = fixed_point(lambda);
    residual = std::max(residual, std::abs(lambda * lambda * h(a * a) - a * a));
  }

  double contraction = -std::numeric_limits<double>::infinity();
  for (double lambda : {1.05, 1.1, 1.2}) {
    const double lo = lambda * lambda - 1.0;
    for (double tau = lo; tau <= lo + 10.0; tau += 0.01)
      contraction = std::max(contraction, lambda * lambda * h_prime(tau) - (1.0 - (lambda - 1.0)));
  }

  const bool ok = identity < 1e-8 && derivative <= 1e-5 && residual < 1e-10 && contraction <= 1e-6;
  report(5, ok,
         "tanh identity " + fmt("%.2e", identity) + " (< 1e-8), h' vs FD " +
             fmt("%.2e", derivative) + " (<= 1e-5), fixed-point residual " +
             fmt("%.2e", residual) + " (< 1e-10), lambda^2 h' - (2 - lambda) max " +
             fmt("%.2e", contraction) + " (<= 1e-6)");
}

void criterion6() {
  double norm_err = 0.0;
  double backend_gap = 0.0;
  for (double lambda : {1.1, 1.2, 1.3}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const ModelParams p{1000, lambda, seed, Backend::Dense, NoiseKind::Gaussian};
      const auto dense = SpikedModel::build(p);
      ModelParams ps = p;
      ps.backend = Backend::Streamed;
      const auto streamed = SpikedModel::build(ps);
      for (InitKind kind : {InitKind::Random, InitKind::Spectral}) {
        InitSpec spec;
        spec.kind = kind;
        spec.init_seed = seed;
        RecordOptions options;
        options.store_denoised = true;
        const auto a = run(dense, spec, 100, options);
        for (const auto& eta : a.denoised) {
          double s = 0.0;
          for (double e : eta) s += e * e;
          norm_err = std::max(norm_err, std::abs(std::sqrt(s) - 1.0));
        }
        if (seed == 1) {
          const auto b = run(streamed, spec, 100);
          for (std::size_t k = 0; k < a.records.size(); ++k)
            backend_gap = std::max(backend_gap,
                                   std::abs(a.records[k].alpha_oracle - b.records[k].alpha_oracle));
        }
      }
    }
  }

  double fd_err = 0.0;
  {
    std::vector<double> x(200);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.08 * std::sin(1.3 * double(i)) + 0.03;
    const auto params = compute_params(x);
    const auto d = apply_denoiser_derivative(params, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      const double fd = (apply_denoiser(params, xp)[i] - apply_denoiser(params, xm)[i]) / 2e-6;
      fd_err = std::max(fd_err, std::abs(fd - d[i]));
    }
  }

  double risk_err = 0.0;
  for (std::size_t n : {5u, 20u, 50u}) {
    const auto v = sample_signal(n, n).entries;
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = 0.7 * v[i] + 0.05 * std::cos(double(i));
    double brute = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double e = v[i] * v[j] - u[i] * u[j];
        brute += e * e;
      }
    risk_err = std::max(risk_err, std::abs(empirical_risk(u, v).empirical_risk - brute));
  }

  const bool ok = norm_err <= 1e-12 && backend_gap <= 1e-10 && fd_err <= 1e-5 && risk_err <= 1e-10;
  report(6, ok,
         "| ||eta||-1 | " + fmt("%.2e", norm_err) + " (<= 1e-12), dense vs streamed alpha " +
             fmt("%.2e", backend_gap) + " (<= 1e-10), eta' vs FD " + fmt("%.2e", fd_err) +
             " (<= 1e-5), risk expansion " + fmt("%.2e", risk_err) + " (<= 1e-10)");
}

void criterion7() {
  ExperimentConfig c = base(2000, 1.2, 1, 50);
  c.inits = {InitKind::Random};
  const auto diag = diagnose(c, 10);
  double norm_dev = 0.0, kurt = 0.0;
  for (const auto& s : diag.gaussianity) {
    norm_dev = std::max(norm_dev, std::abs(s.residual_norm - 1.0));
    kurt = std::max(kurt, std::abs(s.excess_kurtosis));
  }
  const double lo = diag.gram_eigenvalues.front();
  const double hi = diag.gram_eigenvalues.back();
  const bool ok = norm_dev <= 0.1 && lo >= 0.5 && hi <= 1.5 && kurt <= 0.3;
  report(7, ok,
         "max | ||x_t - alpha_t v*|| - 1 | over t<=50 " + fmt("%.4f", norm_dev) +
             " (<= 0.1), Gram eigenvalues [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) +
             "] (within [0.5, 1.5]), max |excess kurtosis| " + fmt("%.3f", kurt) + " (<= 0.3)");
}

void criterion8(const ExperimentResult& desk_parallel) {
  const fs::path dir = fs::temp_directory_path() / "z2amp_acceptance";
  fs::remove_all(dir);

  // Desk preset, executed with different seed-level and matvec worker counts.
  ExperimentConfig c = base(2000, 1.2, 20, 150);
  apply_preset(c, find_preset("desk"));
  c.workers = 1;
  c.matvec_workers = 3;
  const auto serial = run_experiment(c);
  const auto a = emit(desk_parallel, OutputFormat::Csv, (dir / "desk_a").string());
  const auto b = emit(serial, OutputFormat::Csv, (dir / "desk_b").string());
  const bool desk_same = same_files(a, b);

  // Paper preset geometry (n=10000, streamed), truncated to keep runtime down.
  ExperimentConfig p;
  apply_preset(p, find_preset("paper"));
  p.n_seeds = 1;
  p.t_max = 4;
  p.inits = {InitKind::Random};
  p.workers = 1;
  const auto p1 = emit(run_experiment(p), OutputFormat::Csv, (dir / "paper_a").string());
  p.matvec_workers = 2;
  const auto p2 = emit(run_experiment(p), OutputFormat::Csv, (dir / "paper_b").string());
  const bool paper_same = same_files(p1, p2);

  report(8, desk_same && paper_same,
         std::string("desk preset CSVs byte-identical across worker counts: ") +
             (desk_same ? "yes" : "no") + "; paper preset (1 seed, 4 iterations) identical: " +
             (paper_same ? "yes" : "no"));
}

}  // namespace

int main() {
  try {
    criterion5();
    criterion6();
    const auto desk = criterion1();
    criterion2();
    criteria3and4();
    criterion7();
    criterion8(desk);
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

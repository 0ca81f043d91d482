// Copyright 2026 The pivotlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pivotlab/concentration.hpp"
#include "pivotlab/harness.hpp"
#include "pivotlab/pivot_index.hpp"
#include "pivotlab/rng.hpp"
#include "pivotlab/vc_bounds.hpp"

namespace pl = pivotlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Criteria 1 and 3 share the same randomized query trials.
struct ExactnessTotals {
  std::size_t trials = 0;
  std::size_t range_ok = 0;
  std::size_t knn_ok = 0;
  std::size_t queries = 0;
  std::size_t cost_ok = 0;
  double seconds = 0.0;
};

ExactnessTotals exactness_trials(std::uint64_t seed) {
  ExactnessTotals t;
  const auto t0 = Clock::now();
  pl::Rng rng(seed);
  const pl::PivotStrategy strategies[] = {pl::PivotStrategy::kRandom,
                                          pl::PivotStrategy::kFarthestFirst,
                                          pl::PivotStrategy::kIncrementalMeanRho};
  for (std::size_t trial = 0; trial < 1200; ++trial) {
    const bool hamming = trial % 2 == 0;
    const pl::SpaceKind space =
        hamming ? pl::SpaceKind::hamming(1 + rng.below(64))
                : pl::SpaceKind::sphere(2 + rng.below(31));
    const std::size_t n = 1 + rng.below(512);
    const std::size_t k = rng.below(std::min<std::size_t>(16, n) + 1);
    auto data = std::make_shared<const pl::Dataset>(pl::sample(space, n, rng.next()));
    const pl::PivotIndex index = pl::build_index(
        data, pl::select_pivots(*data, k, strategies[trial % 3], rng.next()));

    const pl::Point q = rng.below(4) == 0 ? data->copy_point(rng.below(n))
                                          : pl::sample_point(space, rng);
    double r = 0.0;
    switch (rng.below(4)) {
      case 0: r = rng.uniform01() * space.diameter(); break;
      case 1: r = 0.0; break;
      case 2: r = space.diameter(); break;
      // A radius equal to a true distance puts a point exactly on the shell.
      default:
        r = pl::testing::reference_distance(space, q, data->copy_point(rng.below(n)));
    }

    const pl::QueryResult range = index.range_query(q, r);
    const pl::QueryResult scan = pl::linear_scan(*data, q, r);
    const auto truth = pl::testing::brute_range(*data, q, r);
    if (range.matches == scan.matches && range.matches == truth) ++t.range_ok;

    const std::size_t knn = 1 + rng.below(std::min<std::size_t>(n, 20));
    const pl::QueryResult nn = index.knn_query(q, knn);
    if (nn.matches == pl::testing::brute_knn(*data, q, knn)) ++t.knn_ok;

    for (const pl::QueryResult* res : {&range, &nn}) {
      ++t.queries;
      if (res->cost == k + (n - res->discarded)) ++t.cost_ok;
    }
    ++t.trials;
  }
  t.seconds = seconds_since(t0);
  return t;
}

Outcome criterion1(const ExactnessTotals& t) {
  Outcome o;
  o.require(t.trials >= 1000, "fewer than 1000 trials");
  o.require(t.range_ok == t.trials,
            fmt("range_query disagreed in %g of %g trials",
                double(t.trials - t.range_ok), double(t.trials)));
  o.require(t.knn_ok == t.trials,
            fmt("knn_query disagreed in %g of %g trials",
                double(t.trials - t.knn_ok), double(t.trials)));
  o.require(t.seconds < 60.0, fmt("took %.1f s", t.seconds));
  if (o.pass) {
    o.detail = fmt("%g trials, range and kNN exact, %.1f s", double(t.trials),
                   t.seconds);
  }
  return o;
}

Outcome criterion3(const ExactnessTotals& t) {
  Outcome o;
  o.require(t.cost_ok == t.queries,
            fmt("%g of %g queries broke cost = k + n - |C_q|",
                double(t.queries - t.cost_ok), double(t.queries)));
  if (o.pass) o.detail = fmt("%g queries checked", double(t.queries));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const pl::SpaceKind spaces[] = {pl::SpaceKind::hamming(48),
                                  pl::SpaceKind::sphere(12),
                                  pl::SpaceKind::sphere(12, pl::SphereMetric::kGeodesic),
                                  pl::SpaceKind::ball(6)};
  std::size_t triples = 0;
  std::uint64_t salt = 0;
  for (const pl::SpaceKind& space : spaces) {
    const double tol = space.is_binary() ? 0.0 : 1e-12;
    pl::Rng rng(pl::derive_seed(2, {salt++}));
    std::size_t per_space = 0;
    // 100 independent (dataset, pivots) draws, 1000 (q, x) pairs each.
    for (int rep = 0; rep < 100; ++rep) {
      auto data = std::make_shared<const pl::Dataset>(pl::sample(space, 200, rng.next()));
      const std::size_t k = 1 + rng.below(16);
      const pl::PivotIndex index = pl::build_index(
          data, pl::select_pivots(*data, k, pl::PivotStrategy::kRandom, rng.next()));
      for (int t = 0; t < 1000; ++t) {
        const pl::Point q = pl::sample_point(space, rng);
        const auto qd = index.pivot_distances(q.view(), nullptr);
        const std::size_t j = rng.below(data->size());
        const double lb = index.rho_k(qd, j);
        const double truth =
            pl::testing::reference_distance(space, q, data->copy_point(j));
        o.require(lb <= truth + tol,
                  fmt("rho_k %.17g exceeds true distance %.17g", lb, truth));
        ++per_space;
      }
    }
    triples += per_space;
    o.require(per_space >= 100000, "fewer than 1e5 triples in a space");
  }

  // Append one pivot at a time and check the bound never shrinks.
  std::size_t appends = 0;
  pl::Rng rng(pl::derive_seed(2, {99}));
  for (const pl::SpaceKind& space : spaces) {
    auto data = std::make_shared<const pl::Dataset>(pl::sample(space, 300, rng.next()));
    const pl::PivotSet all =
        pl::select_pivots(*data, 16, pl::PivotStrategy::kRandom, rng.next());
    std::vector<pl::PivotIndex> prefixes;
    for (std::size_t m = 0; m <= all.size(); ++m) {
      pl::PivotSet p = all;
      p.pivots.resize(m);
      p.source_indices.resize(m);
      prefixes.push_back(pl::build_index(data, p));
    }
    for (int t = 0; t < 2500; ++t) {
      const pl::Point q = pl::sample_point(space, rng);
      const std::size_t j = rng.below(data->size());
      const std::size_t m = rng.below(all.size());
      const double before =
          prefixes[m].rho_k(prefixes[m].pivot_distances(q.view(), nullptr), j);
      const double after = prefixes[m + 1].rho_k(
          prefixes[m + 1].pivot_distances(q.view(), nullptr), j);
      o.require(after >= before, fmt("rho_k fell from %.17g to %.17g", before, after));
      ++appends;
    }
  }
  if (o.pass) {
    o.detail = fmt("%g triples over 4 spaces, %g pivot appends", double(triples),
                   double(appends));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::size_t n = 100000;
  const std::vector<std::size_t> dims = {10, 20, 50, 100};
  std::vector<double> eps;
  for (int i = 1; i <= 10; ++i) eps.push_back(i / 10.0);
  const auto rows = pl::run_concentration_experiment(pl::SpaceKind::sphere(2),
                                                     dims, eps, n, 4);
  const double margin = 3.0 * std::sqrt(0.25 / n);
  double worst_gap = -1.0;
  for (const auto& r : rows) {
    const double closed = std::exp(-(r.d - 1.0) * r.eps * r.eps / 2.0);
    o.require(r.alpha_hat <= closed + margin,
              fmt("d=%g eps=%g alpha_hat=%g above bound", double(r.d), r.eps,
                  r.alpha_hat));
    worst_gap = std::max(worst_gap, r.alpha_hat - closed);
  }
  // Rows come ordered by d then eps.
  for (std::size_t e = 0; e < eps.size(); ++e) {
    for (std::size_t di = 1; di < dims.size(); ++di) {
      const double lo = rows[di * eps.size() + e].alpha_hat;
      const double hi = rows[(di - 1) * eps.size() + e].alpha_hat;
      o.require(lo <= hi, fmt("alpha_hat rose with d at eps=%g (%g -> %g)",
                              eps[e], hi, lo));
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < 120.0, fmt("took %.1f s", secs));
  if (o.pass) {
    o.detail = fmt("40 (d, eps) cells, max alpha_hat - bound = %.4g, %.1f s",
                   worst_gap, secs);
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const std::vector<std::size_t> dims = {10, 20, 50, 100};
  const auto series = pl::run_projection_figure(dims, 1000, 5);
  std::string summary;
  for (const auto& s : series) {
    std::vector<double> norms;
    for (const auto& [x, y] : s.points) norms.push_back(std::hypot(x, y));
    o.require(norms.size() == 1000, "wrong number of projected points");
    std::sort(norms.begin(), norms.end());
    const double med = norms[(norms.size() - 1) / 2];
    const double target = std::sqrt(2.0 / s.d);
    const double rel = std::fabs(med - target) / target;
    o.require(rel <= 0.2, fmt("d=%g median norm %g vs %g", double(s.d), med, target));
    summary += fmt(" d=%g:%.3f", double(s.d), rel);
  }
  if (o.pass) o.detail = "relative deviations" + summary;
  return o;
}

struct CurseRun {
  std::vector<pl::CellReport> cells;
  double seconds = 0.0;
};

CurseRun curse_run() {
  pl::ExperimentConfig c = pl::parse_experiment_config(R"({"seed": 1})");
  CurseRun out;
  const auto t0 = Clock::now();
  out.cells = pl::run_curse_experiment(c);
  out.seconds = seconds_since(t0);
  return out;
}

Outcome criterion6(const CurseRun& run) {
  Outcome o;
  const auto& cells = run.cells;
  o.require(cells.size() == 4, "default schedule should have 4 cells");
  std::string pruned = " pruned:";
  std::string cost = " cost/n:";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const auto expected_k =
        static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(c.cell.n))));
    o.require(c.cell.k == expected_k, "k differs from ceil(log2 n)");
    o.require(c.queries.size() == 200, "expected 200 queries per cell");
    o.require(c.strategy == "random", "expected random pivots");
    // Recompute the medians from the per-query records.
    std::vector<double> frac, cn;
    for (const auto& q : c.queries) {
      frac.push_back(double(q.discarded) / double(c.cell.n));
      cn.push_back(double(q.cost) / double(c.cell.n));
    }
    std::sort(frac.begin(), frac.end());
    std::sort(cn.begin(), cn.end());
    const double f = frac[(frac.size() - 1) / 2];
    const double m = cn[(cn.size() - 1) / 2];
    o.require(f == c.aggregates.median_pruned_fraction, "pruned median mismatch");
    o.require(m == c.aggregates.median_cost_over_n, "cost median mismatch");
    pruned += fmt(" %.4g", f);
    cost += fmt(" %.4g", m);
    if (i > 0) {
      o.require(f <= cells[i - 1].aggregates.median_pruned_fraction,
                fmt("(a) pruned fraction rose at d=%g", double(c.cell.d)));
      o.require(m >= cells[i - 1].aggregates.median_cost_over_n,
                fmt("(b) cost/n fell at d=%g", double(c.cell.d)));
    }
  }
  if (!cells.empty()) {
    o.require(cells.back().cell.d == 256, "last cell should be d=256");
    o.require(cells.back().aggregates.median_cost_over_n >= 0.5,
              fmt("(c) median cost/n %g < 0.5 at d=256",
                  cells.back().aggregates.median_cost_over_n));
  }
  o.require(run.seconds < 600.0, fmt("took %.1f s", run.seconds));
  if (o.pass) o.detail = pruned + ";" + cost + fmt("; %.1f s", run.seconds);
  return o;
}

Outcome criterion7(const CurseRun& run) {
  Outcome o;
  std::string summary;
  for (const auto& c : run.cells) {
    // Calibrated Hamming Levy bound evaluated at half the median radius.
    const double half = c.aggregates.median_radius / 2.0;
    const double alpha = 1.0 * std::exp(-2.0 * half * half * double(c.cell.d));
    const double bound = 2.0 * double(c.cell.k) * alpha;
    o.require(std::fabs(bound - c.pruning_bound) <= 1e-12 * std::max(1.0, bound),
              "reported pruning bound differs from the Levy formula");
    const double unpruned = c.aggregates.median_unpruned_mass;
    o.require(unpruned >= 1.0 - bound - 0.1,
              fmt("d=%g unpruned %g < 1 - %g - 0.1", double(c.cell.d), unpruned,
                  bound));
    summary += fmt(" d=%g: %.4g vs %.3g;", double(c.cell.d), unpruned,
                   1.0 - bound - 0.1);
  }
  if (o.pass) o.detail = "unpruned mass vs floor" + summary;
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::string summary;
  for (std::size_t d : {32u, 128u, 512u}) {
    const pl::SpaceKind h = pl::SpaceKind::hamming(d);
    const double dt = pl::intrinsic_dimension(h, 100000, 8);
    o.require(std::fabs(dt - d / 2.0) <= 0.1 * d / 2.0,
              fmt("d=%g intrinsic dimension %g", double(d), dt));
    const double med = pl::median_distance(h, 100000, 8).median;
    o.require(std::fabs(med - 0.5) <= 1.0 / d,
              fmt("d=%g median distance %g", double(d), med));
    summary += fmt(" d=%g: dt=%.2f M=%.4f;", double(d), dt, med);
  }
  for (std::size_t d : {10u, 50u, 100u}) {
    const double med = pl::median_distance(pl::SpaceKind::sphere(d), 100000, 8).median;
    o.require(std::fabs(med - std::sqrt(2.0)) <= 0.02 * std::sqrt(2.0),
              fmt("sphere d=%g median distance %g", double(d), med));
    summary += fmt(" sphere d=%g: M=%.4f;", double(d), med);
  }
  if (o.pass) o.detail = summary;
  return o;
}

Outcome criterion9(const CurseRun& run) {
  Outcome o;
  std::string summary;
  for (const auto& c : run.cells) {
    std::vector<double> nn;
    for (const auto& q : c.queries) nn.push_back(q.nn_distance);
    std::sort(nn.begin(), nn.end());
    const double m = nn[(nn.size() - 1) / 2];
    o.require(m > 0.1, fmt("d=%g nn median %g", double(c.cell.d), m));
    summary += fmt(" d=%g: %.4g", double(c.cell.d), m);
  }
  o.require(run.cells.size() == 4, "missing cells");
  if (o.pass) o.detail = "nn medians" + summary;
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto near = [&](double got, double want, double tol, const char* what) {
    o.require(std::fabs(got - want) <= tol,
              std::string(what) + fmt(": got %.10g want %.10g", got, want));
  };
  near(pl::growth_bound(5, 5), 5.0 * std::log(2.0), 1e-12, "growth_bound(5,5)");
  near(pl::union_vc_bound(4, 4), 9.0, 0.0, "union_vc_bound(4,4)");
  near(pl::pivot_family_vc_bound({pl::VcFamily::kL2, 1, 1}), 20.0 * std::log(6.0),
       1e-12, "L2 d=1 k=1");
  near(pl::pivot_family_vc_bound({pl::VcFamily::kHamming, 16, 4}), 2084.8, 0.1,
       "Hamming d=16 k=4");
  for (std::size_t d = 1; d <= 8; ++d) {
    for (std::size_t k = 1; k <= 8; ++k) {
      const double lhs = pl::intersection_vc_bound(2.0 * d + 3.0, 2 * k);
      const double rhs = k * (8.0 * d + 12.0) * std::log(6.0 * k);
      near(lhs, rhs, 1e-9 * rhs, "intersection identity");
      near(pl::pivot_family_vc_bound({pl::VcFamily::kL2, d, k}), rhs, 1e-9 * rhs,
           "L2 family identity");
    }
  }
  near(double(pl::sample_size_bound(10, 0.5, 0.1)), 19582.0, 1.0,
       "sample_size_bound(10,0.5,0.1)");
  near(pl::vc_convergence_exponent(1000000, 1.0, 0.01), -84.47, 0.05,
       "convergence exponent");
  const double b = pl::vc_convergence_bound(1000000, 1.0, 0.01);
  near(std::log(b / 4.0), -84.47, 0.05, "convergence bound");
  double worst = 0.0;
  for (double delta : {1.0, 10.0, 50.0}) {
    for (double eps : {0.1, 0.3, 0.5}) {
      for (double eta : {0.01, 0.05, 0.2}) {
        const auto n = pl::sample_size_bound(delta, eps, eta);
        const double p = pl::vc_convergence_bound(n, delta, eps);
        o.require(p <= 1.01 * eta, fmt("grid (%g, %g, %g) not consistent", delta,
                                       eps, eta));
        worst = std::max(worst, p / eta);
      }
    }
  }
  if (o.pass) o.detail = fmt("all formulas match; grid max bound/eta = %.3g", worst);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion11(const std::string& cli, const fs::path& work) {
  Outcome o;
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path cfg = work / "curse.json";
  {
    std::ofstream out(cfg);
    out << R"({"seed": 20261016, "space": "hamming"})" << '\n';
  }
  for (const char* run : {"a", "b"}) {
    const std::string cmd = cli + " curse --config " + cfg.string() +
                            " --out-dir " + (work / run).string() +
                            " --format csv";
    const int status = std::system(cmd.c_str());
    o.require(status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0,
              "curse subcommand failed: " + cmd);
  }
  if (!o.pass) return o;
  for (const char* file : {"curse.csv", "curse_queries.csv"}) {
    const std::string a = slurp(work / "a" / file);
    const std::string b = slurp(work / "b" / file);
    o.require(!a.empty(), std::string(file) + " is empty");
    o.require(a == b, std::string(file) + " differs between runs");
  }
  if (o.pass) {
    o.detail = fmt("curse.csv %g bytes identical across runs",
                   double(slurp(work / "a" / "curse.csv").size()));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  fs::path work = fs::temp_directory_path() / "pivotlab_acceptance";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    else if (flag == "--workdir") work = argv[i + 1];
  }
  if (cli.empty()) {
    std::fprintf(stderr, "usage: acceptance --cli <pivotlab binary> [--workdir d]\n");
    return 2;
  }

  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d %-22s %s  %s\n", id, name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  ExactnessTotals exact;
  bool exact_ran = false;
  auto ensure_exact = [&] {
    if (!exact_ran) {
      exact = exactness_trials(20261016);
      exact_ran = true;
    }
  };
  CurseRun curse;
  bool curse_ran = false;
  auto ensure_curse = [&] {
    if (!curse_ran) {
      curse = curse_run();
      curse_ran = true;
    }
  };

  report(1, "exactness", [&] { ensure_exact(); return criterion1(exact); });
  report(2, "lower-bound", criterion2);
  report(3, "cost-accounting", [&] { ensure_exact(); return criterion3(exact); });
  report(4, "sphere-concentration", criterion4);
  report(5, "projection-figure", criterion5);
  report(6, "curse-trend", [&] { ensure_curse(); return criterion6(curse); });
  report(7, "pruning-envelope", [&] { ensure_curse(); return criterion7(curse); });
  report(8, "intrinsic-dimension", criterion8);
  report(9, "nn-median", [&] { ensure_curse(); return criterion9(curse); });
  report(10, "vc-formulas", criterion10);
  report(11, "determinism", [&] { return criterion11(cli, work); });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

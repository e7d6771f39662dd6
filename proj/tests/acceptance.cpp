// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dpc/cbpso.hpp"
#include "dpc/cli.hpp"
#include "dpc/dpca.hpp"
#include "dpc/oracle.hpp"
#include "dpc/simgen.hpp"
#include "support.hpp"

using namespace dpc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* pattern, auto... args) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), pattern, args...);
  return buffer;
}

// Runs gathered by criteria 2 and 3 and audited by criterion 4.
struct RunRecord {
  double fit;
  double lower_bound;
  std::vector<TracePoint> trace;
};
std::vector<RunRecord> g_runs;

void record_run(const DisjointModel& model, double lower_bound) {
  g_runs.push_back({model.fit, lower_bound, model.trace});
}

PhiSpec phi(int n, int p, std::vector<int> blocks, std::uint64_t seed) {
  PhiSpec spec;
  spec.n = n;
  spec.p = p;
  spec.q = static_cast<int>(blocks.size());
  spec.block_sizes = std::move(blocks);
  spec.seed = seed;
  return spec;
}

// ------------------------------------------------------------------------ 1

Verdict combinatorial_exactness() {
  Verdict v;
  const auto start = Clock::now();
  const std::vector<std::tuple<int, int, const char*>> table{
      {10, 2, "1022"},       {10, 3, "55980"},      {15, 2, "32766"},
      {15, 3, "14250606"},   {20, 2, "1048574"},    {20, 3, "3483638676"},
      {30, 2, "1073741822"}, {30, 3, "205887910869180"}};
  for (const auto& [j, q, expected] : table) {
    const BigInt got = count_feasible(j, q);
    v.require(got == BigInt(expected), fmt("count(%d,%d) = %s", j, q, got.str().c_str()));
  }
  v.require(fmt("%.9e", count_feasible(30, 3).convert_to<double>()) == "2.058879109e+14",
            "count(30,3) does not round to 2.058879109e14");
  const double count_seconds = seconds_since(start);
  v.require(count_seconds < 1.0, fmt("counting took %.3f s", count_seconds));

  for (int j = 1; j <= 10; ++j) {
    for (int q = 1; q <= std::min(j, 3); ++q) {
      AssignmentEnumerator it(j, q);
      std::uint64_t n = 0;
      while (it.next()) ++n;
      v.require(BigInt(n) == count_feasible(j, q), fmt("enumeration(%d,%d) has %llu entries", j, q,
                                                        static_cast<unsigned long long>(n)));
    }
  }
  const double total_seconds = seconds_since(start);
  v.require(total_seconds < 60.0, fmt("enumeration took %.1f s", total_seconds));
  if (v.pass) v.detail = fmt("8/8 counts exact, enumeration J<=10 Q<=3 matches, %.3f s / %.2f s",
                             count_seconds, total_seconds);
  return v;
}

// ------------------------------------------------------------------------ 2

Verdict oracle_equivalence() {
  Verdict v;
  const auto start = Clock::now();
  constexpr int kInstances = 30;
  constexpr int kSeeds = 10;
  int pso_hits = 0;
  int dpca_hits = 0;
  int single_hits = 0;
  for (int inst = 0; inst < kInstances; ++inst) {
    const int j = 5 + inst % 3;
    const int q = 2 + (inst / 3) % 2;
    std::optional<DataMatrix> x;
    if (inst % 2 == 0) {
      std::vector<int> blocks(static_cast<std::size_t>(q), j / q);
      blocks[0] += j % q;
      x.emplace(generate(phi(20, j, blocks, 1000 + static_cast<std::uint64_t>(inst))).data);
    } else {
      Rng rng = make_rng(5000 + static_cast<std::uint64_t>(inst));
      x.emplace(test::centered_gaussian(20, j, rng));
    }
    const double optimum = oracle_best(*x, q).fit;
    const double bound = classic_pca(*x, q).fit;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
      PsoConfig pso;
      pso.particles = 50;
      pso.max_iterations = 10;
      pso.seed = seed;
      const DisjointModel swarm = cbpso_fit(*x, q, pso);
      record_run(swarm, bound);
      pso_hits += swarm.fit <= optimum + 1e-9 ? 1 : 0;

      DpcaConfig greedy;
      greedy.seed = seed;
      greedy.restarts = 10;
      const DisjointModel restarted = dpca_fit(*x, q, greedy);
      record_run(restarted, bound);
      dpca_hits += restarted.fit <= optimum + 1e-9 ? 1 : 0;

      greedy.restarts = 1;
      const DisjointModel single = dpca_fit(*x, q, greedy);
      record_run(single, bound);
      single_hits += single.fit <= optimum + 1e-9 ? 1 : 0;
    }
  }
  const int runs = kInstances * kSeeds;
  const double elapsed = seconds_since(start);
  v.require(pso_hits * 100 >= 95 * runs, "cbpso below 95%");
  v.require(dpca_hits * 100 >= 90 * runs, "dpca x10 below 90%");
  v.require(single_hits * 100 >= 50 * runs, "dpca x1 below 50%");
  v.require(elapsed < 300.0, "over 5 min");
  const std::string summary = fmt("cbpso %d/%d, dpca x10 %d/%d, dpca x1 %d/%d, %.1f s", pso_hits,
                                  runs, dpca_hits, runs, single_hits, runs, elapsed);
  v.detail = v.detail.empty() ? summary : v.detail + " (" + summary + ")";
  return v;
}

// ------------------------------------------------------------------------ 3

Verdict structure_recovery() {
  Verdict v;
  const auto start = Clock::now();
  int recovered = 0;
  int quality_failures = 0;
  double worst_fit = 0.0;
  double worst_explained = 100.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PlantedMatrix m = generate(phi(100, 8, {4, 3, 1}, seed));
    PsoConfig cfg;
    cfg.particles = 50;
    cfg.max_iterations = 10;
    cfg.seed = seed;
    const DisjointModel model = cbpso_fit(m.data, 3, cfg);
    record_run(model, classic_pca(m.data, 3).fit);
    if (!test::same_partition(model.assignment, m.planted)) continue;
    ++recovered;
    worst_fit = std::max(worst_fit, model.fit);
    worst_explained = std::min(worst_explained, model.variance.total);
    if (!(model.fit < 0.10 && model.variance.total > 90.0)) ++quality_failures;
  }
  const double elapsed = seconds_since(start);
  v.require(recovered >= 95, "planted structure recovered below 95/100");
  v.require(quality_failures == 0, fmt("%d successes miss fit/variance bounds", quality_failures));
  v.require(elapsed < 120.0, "over 2 min");
  const std::string summary =
      fmt("recovered %d/100, worst success fit %.4f, worst explained %.2f%%, %.1f s", recovered,
          worst_fit, worst_explained, elapsed);
  v.detail = v.detail.empty() ? summary : v.detail + " (" + summary + ")";
  return v;
}

// ------------------------------------------------------------------------ 4

Verdict lower_bound_invariant() {
  Verdict v;
  int below = 0;
  int rising = 0;
  for (const RunRecord& run : g_runs) {
    if (run.fit < run.lower_bound - 1e-12) ++below;
    for (std::size_t k = 1; k < run.trace.size(); ++k) {
      if (run.trace[k].fit > run.trace[k - 1].fit) {
        ++rising;
        break;
      }
    }
  }
  v.require(!g_runs.empty(), "no runs recorded");
  v.require(below == 0, fmt("%d runs below the classic PCA fit", below));
  v.require(rising == 0, fmt("%d traces increase", rising));
  if (v.pass) v.detail = fmt("%zu runs audited", g_runs.size());
  return v;
}

// ------------------------------------------------------------------------ 5

Verdict operator_identities() {
  Verdict v;
  Rng rng = make_rng(55);
  std::uniform_real_distribution<double> entry(-5.0, 5.0);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int q = test::uniform_int(1, 6, rng);
    const int j = test::uniform_int(q, 12, rng);
    Matrix m(j, q);
    for (int r = 0; r < j; ++r)
      for (int c = 0; c < q; ++c) m(r, c) = entry(rng);
    if (!(binarize(squash(m)) == binarize(m))) ++mismatches;
  }
  v.require(mismatches == 0, fmt("binarize(squash(m)) differs on %d matrices", mismatches));

  std::uniform_real_distribution<double> z(-20.0, 20.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double s = z(rng);
    worst = std::max(worst, std::abs(squash(s) + std::tanh(s / 2.0)));
  }
  v.require(worst <= 1e-12, fmt("squash vs -tanh(z/2) off by %.3g", worst));

  PsoConfig cfg;
  v.require(inertia_at(0, cfg) == cfg.max_inertia, "inertia_at(0) != max");
  v.require(inertia_at(cfg.max_iterations, cfg) == cfg.min_inertia, "inertia_at(nIter) != min");
  if (v.pass) v.detail = fmt("1000 matrices, max |L + tanh| %.1e, inertia endpoints exact", worst);
  return v;
}

// ------------------------------------------------------------------------ 6

Verdict loading_constraints() {
  Verdict v;
  Rng rng = make_rng(66);
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int q = test::uniform_int(1, 5, rng);
    const int j = test::uniform_int(q, 10, rng);
    const DataMatrix x = test::centered_gaussian(test::uniform_int(3, 30, rng), j, rng);
    const Assignment a = test::random_onto(j, q, rng);
    const Matrix b = loadings_from_assignment(x, a).values();
    bool ok = true;
    for (int c = 0; c < q; ++c) ok = ok && std::abs(b.col(c).norm() - 1.0) <= 1e-10;
    for (int r = 0; r < j; ++r)
      for (int c = 0; c < q; ++c)
        if (a.label(r) != c) ok = ok && b(r, c) == 0.0;
    ok = ok && (b.transpose() * b - Matrix::Identity(q, q)).cwiseAbs().maxCoeff() <= 1e-10;
    const double f = objective(x, b);
    ok = ok && f >= 0.0 && f <= 1.0 + 1e-12;
    if (!ok) ++failures;
  }
  v.require(failures == 0, fmt("%d of 500 pairs violate a constraint", failures));

  int identity_failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int j = test::uniform_int(1, 8, rng);
    const DataMatrix x = test::centered_gaussian(test::uniform_int(j + 1, 20, rng), j, rng);
    std::vector<int> labels(static_cast<std::size_t>(j));
    for (int r = 0; r < j; ++r) labels[static_cast<std::size_t>(r)] = r;
    const Matrix identity = loadings_from_assignment(x, Assignment(labels, j)).values();
    std::shuffle(labels.begin(), labels.end(), rng);
    const Assignment permuted(labels, j);
    const Matrix b = loadings_from_assignment(x, permuted).values();
    Matrix expected = Matrix::Zero(j, j);
    for (int r = 0; r < j; ++r) expected(r, labels[static_cast<std::size_t>(r)]) = 1.0;
    if (!(identity == Matrix::Identity(j, j)) || !(b == expected) || objective(x, b) > 1e-12) {
      ++identity_failures;
    }
  }
  v.require(identity_failures == 0, fmt("Q = J: %d cases not F = 0, B = I", identity_failures));
  if (v.pass) v.detail = "500 random pairs satisfy all constraints; Q = J gives F = 0, B = I";
  return v;
}

// ------------------------------------------------------------------------ 7

Verdict variance_accounting() {
  Verdict v;
  Rng rng = make_rng(77);
  double worst = 0.0;
  double worst_total = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int j = test::uniform_int(2, 10, rng);
    const DataMatrix x = test::centered_gaussian(test::uniform_int(j + 1, 40, rng), j, rng);
    const Matrix a = scores(x, classic_pca(x, j).loadings);
    const auto variance = [](const Vector& col) {
      return (col.array() - col.mean()).square().sum() / static_cast<double>(col.size() - 1);
    };
    double rotated = 0.0;
    double original = 0.0;
    for (int q = 0; q < j; ++q) rotated += variance(a.col(q));
    for (int c = 0; c < j; ++c) original += variance(x.values().col(c));
    worst = std::max(worst, std::abs(rotated - original));

    const Assignment full = test::random_onto(j, j, rng);
    const double total = explained_variance(x, scores(x, loadings_from_assignment(x, full))).total;
    worst_total = std::max(worst_total, std::abs(total - 100.0));
  }
  v.require(worst <= 1e-9, fmt("trace invariance off by %.3g", worst));
  v.require(worst_total <= 1e-9, fmt("Q = J explained total off by %.3g", worst_total));
  if (v.pass) v.detail = fmt("trace drift %.1e, Q = J total drift %.1e", worst, worst_total);
  return v;
}

// ------------------------------------------------------------------------ 8

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict determinism() {
  Verdict v;
  test::TempDir dir("dpc_acceptance");
  const std::string csv = (dir.path() / "data" / "phi.csv").string();
  const std::vector<std::vector<std::string>> commands{
      {"simulate", "--n", "100", "--p", "8", "--q", "3", "--blocks", "4,3,1", "--seed", "7",
       "--permute"},
      {"analyze", "-i", csv, "-q", "3", "--seed", "5", "--particles", "60", "--iterations", "10",
       "--restarts", "2"},
      {"analyze", "-i", csv, "-q", "3", "--seed", "5", "--method", "cbpso", "--sync", "--threads",
       "2", "--particles", "40", "--iterations", "8"},
      {"benchmark", "-i", csv, "-q", "3", "--runs", "5", "--seed", "9", "--particles", "30",
       "--iterations", "5"},
      {"oracle", "-i", csv, "-q", "3"},
  };
  {
    std::ostringstream out;
    std::ostringstream err;
    auto seed_args = commands[0];
    seed_args.insert(seed_args.end(), {"--out", (dir.path() / "data").string()});
    v.require(cli::run(seed_args, out, err) == cli::kOk, "simulate failed: " + err.str());
  }
  int compared = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<fs::path> outs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out_dir = dir.path() / fmt("cmd%zu_%d", c, rep);
      auto args = commands[c];
      args.insert(args.end(), {"--no-timing", "--out", out_dir.string()});
      std::ostringstream out;
      std::ostringstream err;
      if (cli::run(args, out, err) != cli::kOk) {
        v.require(false, commands[c][0] + " failed: " + err.str());
      }
      outs.push_back(out_dir);
    }
    if (!fs::exists(outs[0])) continue;
    for (const auto& entry : fs::directory_iterator(outs[0])) {
      const fs::path name = entry.path().filename();
      ++compared;
      v.require(slurp(outs[0] / name) == slurp(outs[1] / name),
                commands[c][0] + " " + name.string() + " differs between runs");
    }
  }
  std::ostringstream a;
  std::ostringstream b;
  std::ostringstream err;
  cli::run({"count", "30", "3"}, a, err);
  cli::run({"count", "30", "3"}, b, err);
  v.require(a.str() == b.str(), "count output differs");
  if (v.pass) v.detail = fmt("%d artifacts from 5 commands identical across two runs", compared);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"combinatorial exactness", combinatorial_exactness},
      {"oracle equivalence", oracle_equivalence},
      {"structure recovery", structure_recovery},
      {"lower-bound invariant", lower_bound_invariant},
      {"operator identities", operator_identities},
      {"loading constraints", loading_constraints},
      {"variance accounting", variance_accounting},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict verdict;
    try {
      verdict = criteria[k].second();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    failed += verdict.pass ? 0 : 1;
    std::cout << (verdict.pass ? "PASS" : "FAIL") << "  criterion " << k + 1 << " ("
              << criteria[k].first << "): " << verdict.detail << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

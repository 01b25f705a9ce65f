#include "tscl/selftest.hpp"

#include "tscl/averaging.hpp"
#include "tscl/distances.hpp"
#include "tscl/lloyd.hpp"
#include "tscl/metrics.hpp"
#include "tscl/stats.hpp"
#include "tscl/synthetic.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tscl {

namespace {

TimeSeries random_series(std::mt19937_64& rng, Eigen::Index m)
{
  std::normal_distribution<double> g(0.0, 1.0);
  TimeSeries x(m);
  for (Eigen::Index i = 0; i < m; ++i) x(i) = g(rng);
  return z_normalize(x);
}

std::vector<int> random_labels(std::mt19937_64& rng, int n, int k)
{
  std::uniform_int_distribution<int> u(0, k - 1);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& v : out) v = u(rng);
  return out;
}

} // namespace

int run_selftest(std::ostream& out, unsigned seed)
{
  std::mt19937_64 rng(seed);
  int failures = 0;
  auto check = [&](const std::string& name, const std::function<bool()>& property) {
    bool ok = false;
    std::string detail;
    try
    {
      ok = property();
    }
    catch (const std::exception& e)
    {
      detail = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << name << detail << '\n';
    if (!ok) ++failures;
  };

  check("distances: identity and symmetry", [&] {
    for (int t = 0; t < 50; ++t)
    {
      const TimeSeries x = random_series(rng, 16), y = random_series(rng, 16);
      for (const DistanceSpec& spec :
           {DistanceSpec{SquaredEuclidean{}}, DistanceSpec{Euclidean{}}, DistanceSpec{Dtw{0.2}},
            DistanceSpec{Msm{1.0}}, DistanceSpec{Sbd{}}, DistanceSpec{Ksc{}}})
      {
        if (std::abs(distance(spec, x, x)) > 1e-9) return false;
        if (std::holds_alternative<Ksc>(spec)) continue;
        if (std::abs(distance(spec, x, y) - distance(spec, y, x)) > 1e-9) return false;
      }
    }
    return true;
  });

  check("distances: dtw band monotonicity", [&] {
    for (int t = 0; t < 50; ++t)
    {
      const TimeSeries x = random_series(rng, 16), y = random_series(rng, 16);
      double prev = squared_euclidean(x, y) + 1e-12;
      for (double w : {0.0, 0.1, 0.25, 0.5, 1.0})
      {
        const double d = dtw(x, y, w);
        if (d > prev + 1e-12) return false;
        prev = d;
      }
    }
    return true;
  });

  check("distances: soft-dtw approaches dtw", [&] {
    for (int t = 0; t < 20; ++t)
    {
      const TimeSeries x = random_series(rng, 16), y = random_series(rng, 16);
      if (std::abs(soft_dtw(x, y, 1e-3) - dtw(x, y)) > 1e-2) return false;
    }
    return true;
  });

  check("distances: soft-dtw gradient vs finite differences", [&] {
    for (int t = 0; t < 10; ++t)
    {
      TimeSeries x = random_series(rng, 8);
      const TimeSeries y = random_series(rng, 8);
      const TimeSeries g = soft_dtw_gradient(x, y, 1.0);
      for (Eigen::Index i = 0; i < x.size(); ++i)
      {
        const double h = 1e-5, keep = x(i);
        x(i) = keep + h;
        const double up = soft_dtw(x, y, 1.0);
        x(i) = keep - h;
        const double down = soft_dtw(x, y, 1.0);
        x(i) = keep;
        const double fd = (up - down) / (2 * h);
        if (std::abs(fd - g(i)) > 1e-4 * std::max(1.0, std::abs(fd))) return false;
      }
    }
    return true;
  });

  check("averaging: dba and soft-dba do not worsen warm start", [&] {
    for (int t = 0; t < 10; ++t)
    {
      SeriesMatrix cluster(5, 16);
      for (int r = 0; r < 5; ++r) cluster.row(r) = random_series(rng, 16).transpose();
      const TimeSeries init = cluster.row(0).transpose();
      double before = 0, after = 0;
      const TimeSeries mu = dba(cluster, init);
      for (int r = 0; r < 5; ++r)
      {
        before += dtw(cluster.row(r), init);
        after += dtw(cluster.row(r), mu);
      }
      if (after > before + 1e-9) return false;
      const TimeSeries smu = soft_dba(cluster, init, 1.0);
      if (soft_dba_objective(cluster, smu, 1.0) > soft_dba_objective(cluster, init, 1.0) + 1e-9)
        return false;
    }
    return true;
  });

  check("lloyd: inertia non-increasing for euclidean/mean", [&] {
    for (int t = 0; t < 10; ++t)
    {
      SeriesMatrix data(40, 10);
      for (int r = 0; r < 40; ++r) data.row(r) = random_series(rng, 10).transpose();
      KMeansConfig config;
      config.k = 3;
      config.n_restarts = 0;
      config.seed = rng();
      const ClusterModel model = fit(data, config);
      for (std::size_t i = 1; i < model.inertia_trace.size(); ++i)
        if (model.inertia_trace[i] > model.inertia_trace[i - 1] + 1e-9) return false;
      const double recomputed = inertia_of(data, model.centroids, model.assignments, config.distance);
      if (std::abs(recomputed - model.inertia) > 1e-9 * std::max(1.0, recomputed)) return false;
    }
    return true;
  });

  check("metrics: perfect labelling scores one", [&] {
    for (int t = 0; t < 20; ++t)
    {
      std::vector<int> y = random_labels(rng, 12, 3);
      std::vector<int> p(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) p[i] = (y[i] + 1) % 3;
      const ScoreSet s = evaluate(y, p);
      if (std::abs(s.clacc - 1) > 1e-12 || std::abs(s.ri - 1) > 1e-12 || std::abs(s.ari - 1) > 1e-12 ||
          std::abs(s.nmi - 1) > 1e-12 || std::abs(s.ami - 1) > 1e-12)
        return false;
    }
    return true;
  });

  check("metrics: worked examples", [&] {
    const std::vector<int> y1 = {0, 0, 1, 1}, p1 = {1, 1, 0, 2};
    const std::vector<int> y2 = {0, 0, 1}, p2 = {0, 1, 1};
    return std::abs(cl_accuracy(y1, p1) - 0.75) < 1e-12 && std::abs(rand_index(y2, p2) - 1.0 / 3) < 1e-12;
  });

  check("stats: wilcoxon all-positive n=5", [&] {
    const std::vector<double> a = {2, 3, 4, 5, 6}, b = {1, 1, 1, 1, 1};
    return std::abs(wilcoxon_signed_rank(a, b) - 0.0625) < 1e-12;
  });

  check("stats: rank sums", [&] {
    ScoreTable table;
    table.algorithms = {"a", "b", "c", "d"};
    table.scores = Eigen::MatrixXd::Random(6, 4);
    table.scores(0, 1) = table.scores(0, 2);
    for (int d = 0; d < 6; ++d) table.datasets.push_back("d" + std::to_string(d));
    const Eigen::MatrixXd ranks = rank_matrix(table);
    for (Eigen::Index d = 0; d < ranks.rows(); ++d)
      if (std::abs(ranks.row(d).sum() - 10.0) > 1e-12) return false;
    return true;
  });

  return failures;
}

} // namespace tscl

#include "doctest.h"

#include "helpers.hpp"

#include "tscl/errors.hpp"
#include "tscl/lloyd.hpp"

#include <random>
#include <set>

using namespace tscl;

namespace {

SeriesMatrix points(std::initializer_list<std::initializer_list<double>> rows)
{
  SeriesMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows)
  {
    Eigen::Index c = 0;
    for (double v : row) out(r, c++) = v;
    ++r;
  }
  return out;
}

bool is_member(const SeriesMatrix& data, const TimeSeries& s)
{
  for (Eigen::Index r = 0; r < data.rows(); ++r)
    if (data.row(r).transpose() == s) return true;
  return false;
}

} // namespace

TEST_CASE("forgy")
{
  std::mt19937_64 g(1);
  const SeriesMatrix data = testing::znormal_rows(g, 6, 4);
  Rng rng(3);
  const SeriesMatrix all = init_forgy(data, 6, rng);
  std::set<std::vector<double>> seen;
  for (Eigen::Index r = 0; r < 6; ++r)
  {
    CHECK(is_member(data, all.row(r).transpose()));
    seen.insert(std::vector<double>(all.row(r).data(), all.row(r).data() + 4));
  }
  CHECK(seen.size() == 6);
  Rng a(5), b(5);
  CHECK(init_forgy(data, 3, a) == init_forgy(data, 3, b));
  CHECK(init_forgy(data, 1, a).rows() == 1);
  CHECK_THROWS_AS(init_forgy(data, 7, a), ParameterError);
}

TEST_CASE("random init")
{
  const SeriesMatrix same = points({{1, 2}, {1, 2}, {1, 2}});
  Rng rng(1);
  const SeriesMatrix c = init_random(same, 2, rng);
  CHECK(c.row(0) == same.row(0));
  CHECK(c.row(1) == same.row(0));

  std::mt19937_64 g(2);
  const SeriesMatrix data = testing::znormal_rows(g, 10, 5);
  const SeriesMatrix r = init_random(data, 4, rng);
  for (Eigen::Index j = 0; j < 5; ++j)
  {
    CHECK(r.col(j).minCoeff() >= data.col(j).minCoeff());
    CHECK(r.col(j).maxCoeff() <= data.col(j).maxCoeff());
  }
  Rng a(9), b(9);
  CHECK(init_random(data, 3, a) == init_random(data, 3, b));
}

TEST_CASE("k-means++")
{
  const SeriesMatrix line = points({{0}, {5}, {10}});
  Rng rng(1);
  const SeriesMatrix greedy = init_kmeanspp_from(line, 2, SquaredEuclidean{}, rng, true, 0);
  CHECK(greedy(0, 0) == 0.0);
  CHECK(greedy(1, 0) == 10.0);
  CHECK(init_kmeanspp(line, 3, SquaredEuclidean{}, rng, true).rows() == 3);

  const SeriesMatrix same = points({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  const SeriesMatrix c = init_kmeanspp(same, 3, Dtw{}, rng, false);
  CHECK(c.rows() == 3);

  // sampling never repeats a member
  std::mt19937_64 g(4);
  const SeriesMatrix data = testing::znormal_rows(g, 8, 6);
  for (int t = 0; t < 20; ++t)
  {
    const SeriesMatrix picks = init_kmeanspp(data, 8, Euclidean{}, rng, false);
    std::set<std::vector<double>> seen;
    for (Eigen::Index r = 0; r < 8; ++r) seen.insert(std::vector<double>(picks.row(r).data(), picks.row(r).data() + 6));
    CHECK(seen.size() == 8);
  }
}

TEST_CASE("assignment")
{
  std::mt19937_64 g(5);
  const SeriesMatrix data = testing::znormal_rows(g, 4, 6);
  const Assignment self = assign(data, data, Dtw{});
  CHECK(self.labels == std::vector<int>{0, 1, 2, 3});
  CHECK(self.inertia == 0.0);
  CHECK(assign(data, data.topRows(1), Msm{}).labels == std::vector<int>{0, 0, 0, 0});

  const SeriesMatrix cents = testing::znormal_rows(g, 2, 6);
  const Assignment a = assign(data, cents, SquaredEuclidean{});
  double total = 0;
  for (Eigen::Index i = 0; i < 4; ++i)
  {
    const double d0 = (data.row(i) - cents.row(0)).squaredNorm();
    const double d1 = (data.row(i) - cents.row(1)).squaredNorm();
    CHECK(a.labels[static_cast<std::size_t>(i)] == (d1 < d0 ? 1 : 0));
    total += std::min(d0, d1);
  }
  CHECK(a.inertia == doctest::Approx(total));
  CHECK(assign(data, cents, Euclidean{}).inertia == doctest::Approx(total));
}

TEST_CASE("centroid update")
{
  const SeriesMatrix data = points({{0, 0}, {2, 2}});
  const SeriesMatrix cur = data;
  CHECK(update_centroids(data, {0, 1}, {}, SquaredEuclidean{}, cur) == data);

  std::mt19937_64 g(6);
  const SeriesMatrix d2 = testing::znormal_rows(g, 9, 8);
  const std::vector<int> labels = {0, 1, 2, 0, 1, 2, 0, 1, 2};
  const SeriesMatrix start = d2.topRows(3);
  const SeriesMatrix next = update_centroids(d2, labels, {AveragingKind::Dba, 30, 1e-6}, Dtw{}, start);
  for (int c = 0; c < 3; ++c)
  {
    double before = 0, after = 0;
    for (int i = 0; i < 9; ++i)
      if (labels[static_cast<std::size_t>(i)] == c)
      {
        before += dtw(d2.row(i), start.row(c));
        after += dtw(d2.row(i), next.row(c));
      }
    CHECK(after <= before + 1e-12);
  }
}

TEST_CASE("empty cluster repair")
{
  // cluster 0 owns all three series; the third sits 3 away from its centroid
  const SeriesMatrix data = points({{0}, {0}, {3}});
  const SeriesMatrix cents = points({{0}, {100}});
  const std::vector<int> labels = {0, 0, 0};
  const double before = inertia_of(data, cents, labels, SquaredEuclidean{});
  CHECK(before == 9.0);
  const RepairResult r = repair_empty_clusters(data, labels, cents, SquaredEuclidean{});
  CHECK(r.moved == std::vector<Eigen::Index>{2});
  CHECK(r.labels == std::vector<int>{0, 0, 1});
  CHECK(r.centroids(1, 0) == 3.0);
  CHECK(r.inertia == doctest::Approx(0.0));

  const SeriesMatrix d4 = points({{0}, {1}, {-5}, {7}});
  const SeriesMatrix c4 = points({{0}, {50}, {60}});
  const RepairResult two = repair_empty_clusters(d4, {0, 0, 0, 0}, c4, SquaredEuclidean{});
  CHECK(two.moved == std::vector<Eigen::Index>{3, 2});
  CHECK(two.labels == std::vector<int>{0, 0, 2, 1});

  const RepairResult none = repair_empty_clusters(data, {0, 1, 1}, cents, SquaredEuclidean{});
  CHECK(none.moved.empty());
  CHECK(none.labels == std::vector<int>{0, 1, 1});
}

TEST_CASE("fit on two separated groups")
{
  const SeriesMatrix data = points({{0, 0}, {0.1, 0}, {10, 10}, {10.1, 10}});
  KMeansConfig config;
  config.k = 2;
  config.distance = Euclidean{};
  const ClusterModel m = fit(data, config);
  CHECK(m.assignments[0] == m.assignments[1]);
  CHECK(m.assignments[2] == m.assignments[3]);
  CHECK(m.assignments[0] != m.assignments[2]);
  CHECK(m.converged_reason == StopReason::StableAssignments);
  CHECK(m.restart_inertias.size() == 11);
}

TEST_CASE("fit edge cases")
{
  std::mt19937_64 g(7);
  const SeriesMatrix data = testing::znormal_rows(g, 5, 6);
  KMeansConfig config;
  config.k = 5;
  const ClusterModel m = fit(data, config);
  CHECK(m.inertia == 0.0);
  CHECK(m.inertia_trace.front() == 0.0);

  config.k = 6;
  CHECK_THROWS_AS(fit(data, config), ParameterError);
  config.k = 0;
  CHECK_THROWS_AS(fit(data, config), ParameterError);
}

TEST_CASE("fit is deterministic and thread independent")
{
  std::mt19937_64 g(8);
  const SeriesMatrix data = testing::znormal_rows(g, 30, 10);
  for (const auto& [distance, averaging] :
       std::vector<std::pair<DistanceSpec, AveragingSpec>>{{SquaredEuclidean{}, {}},
                                                           {Dtw{0.2}, {AveragingKind::Dba, 10, 1e-6}},
                                                           {Sbd{}, {AveragingKind::ShapeExtraction}},
                                                           {Ksc{}, {AveragingKind::KscAverage}}})
  {
    KMeansConfig config;
    config.k = 3;
    config.distance = distance;
    config.averaging = averaging;
    config.n_restarts = 3;
    config.seed = 42;
    const ClusterModel a = fit(data, config);
    config.threads = 3;
    const ClusterModel b = fit(data, config);
    CHECK(a.assignments == b.assignments);
    CHECK(a.centroids == b.centroids);
    CHECK(a.inertia == b.inertia);
    CHECK(a.inertia == *std::min_element(a.restart_inertias.begin(), a.restart_inertias.end()));
    CHECK(a.inertia == doctest::Approx(inertia_of(data, a.centroids, a.assignments, config.distance)));
    CHECK(a.iterations_run <= config.max_iters);
  }
}

TEST_CASE("every init strategy yields a valid model")
{
  std::mt19937_64 g(9);
  const SeriesMatrix data = testing::znormal_rows(g, 20, 8);
  for (auto init : {InitStrategy::Forgy, InitStrategy::Random, InitStrategy::KMeansPlusPlus,
                    InitStrategy::GreedyKMeansPlusPlus})
  {
    KMeansConfig config;
    config.k = 4;
    config.init = init;
    config.n_restarts = 2;
    const ClusterModel m = fit(data, config);
    std::set<int> used(m.assignments.begin(), m.assignments.end());
    CHECK(used.size() == 4);
    CHECK(parse_init_strategy(to_string(init)) == init);
  }
}

TEST_CASE("predict")
{
  std::mt19937_64 g(10);
  const SeriesMatrix data = testing::znormal_rows(g, 25, 8);
  KMeansConfig config;
  config.k = 3;
  const ClusterModel m = fit(data, config);
  if (m.converged_reason == StopReason::StableAssignments) CHECK(predict(m, data, config.distance) == m.assignments);

  const SeriesMatrix test = testing::znormal_rows(g, 10, 8);
  const std::vector<int> p = predict(m, test, config.distance);
  for (Eigen::Index i = 0; i < test.rows(); ++i)
  {
    Eigen::Index best;
    (m.centroids.rowwise() - test.row(i)).rowwise().squaredNorm().minCoeff(&best);
    CHECK(p[static_cast<std::size_t>(i)] == best);
  }

  ClusterModel one = m;
  one.centroids = m.centroids.topRows(1);
  CHECK(predict(one, test, config.distance) == std::vector<int>(10, 0));
  CHECK_THROWS_AS(predict(m, testing::znormal_rows(g, 2, 9), config.distance), LengthMismatchError);
}

TEST_CASE("deadline")
{
  std::mt19937_64 g(11);
  const SeriesMatrix data = testing::znormal_rows(g, 20, 8);
  KMeansConfig config;
  config.k = 2;
  CHECK_THROWS_AS(fit(data, config, std::chrono::steady_clock::now() - std::chrono::seconds(1)), TimeoutError);
}

#include "doctest.h"

#include "helpers.hpp"

#include "tscl/averaging.hpp"
#include "tscl/errors.hpp"

#include <random>

using namespace tscl;

namespace {

SeriesMatrix rows_of(std::initializer_list<TimeSeries> series)
{
  SeriesMatrix out(static_cast<Eigen::Index>(series.size()), series.begin()->size());
  Eigen::Index r = 0;
  for (const auto& s : series) out.row(r++) = s.transpose();
  return out;
}

double summed(const SeriesMatrix& c, const TimeSeries& mu, const DistanceSpec& spec)
{
  double s = 0;
  for (Eigen::Index r = 0; r < c.rows(); ++r) s += distance(spec, c.row(r), mu);
  return s;
}

} // namespace

TEST_CASE("arithmetic mean")
{
  const SeriesMatrix c = rows_of({Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 2)});
  CHECK(arithmetic_mean(c) == Eigen::Vector2d(1, 1));
  const SeriesMatrix single = rows_of({Eigen::Vector3d(1, 5, 2)});
  CHECK(arithmetic_mean(single) == Eigen::Vector3d(1, 5, 2));

  std::mt19937_64 rng(10);
  const SeriesMatrix cl = testing::znormal_rows(rng, 6, 8);
  const TimeSeries mu = arithmetic_mean(cl);
  const double best = summed(cl, mu, SquaredEuclidean{});
  std::normal_distribution<double> g(0, 0.05);
  for (int t = 0; t < 1000; ++t)
  {
    TimeSeries p = mu;
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) += g(rng);
    CHECK(summed(cl, p, SquaredEuclidean{}) >= best);
  }
  CHECK_THROWS(arithmetic_mean(SeriesMatrix(0, 3)));
}

TEST_CASE("dba")
{
  std::mt19937_64 rng(11);
  const TimeSeries x = testing::znormal(rng, 8);
  CHECK(dba(rows_of({x}), x).isApprox(x));
  CHECK(dba(rows_of({x, x}), x).isApprox(x));
  for (int t = 0; t < 20; ++t)
  {
    const SeriesMatrix c = testing::znormal_rows(rng, 3, 8);
    const TimeSeries init = testing::znormal(rng, 8);
    CHECK(summed(c, dba(c, init), Dtw{}) <= summed(c, init, Dtw{}) + 1e-12);
    CHECK(summed(c, dba(c, init, 0.25), Dtw{0.25}) <= summed(c, init, Dtw{0.25}) + 1e-12);
  }
}

TEST_CASE("shape extraction")
{
  std::mt19937_64 rng(12);
  const TimeSeries x = testing::znormal(rng, 12);
  const TimeSeries single = shape_extraction(rows_of({x}), x);
  CHECK(sbd(single, x) == doctest::Approx(0.0).epsilon(1e-10));

  const SeriesMatrix c = testing::znormal_rows(rng, 5, 12);
  const TimeSeries ref = c.row(0).transpose();
  const TimeSeries mu = shape_extraction(c, ref);
  CHECK(std::abs(mu.mean()) < 1e-10);
  CHECK(std::sqrt(mu.squaredNorm() / 12.0) == doctest::Approx(1.0));

  const SeriesMatrix flipped = -c;
  const TimeSeries mu_flipped = shape_extraction(flipped, -ref);
  CHECK(mu_flipped.isApprox(-mu, 1e-8));
  CHECK(summed(flipped, mu_flipped, Sbd{}) == doctest::Approx(summed(c, mu, Sbd{})));
}

TEST_CASE("k-sc average")
{
  std::mt19937_64 rng(13);
  const TimeSeries x = testing::znormal(rng, 10);
  const TimeSeries single = ksc_average(rows_of({x}), x, 3);
  CHECK(ksc_distance(x, single, 3) < 1e-8);
  CHECK(single.norm() == doctest::Approx(1.0).epsilon(1e-9));

  const SeriesMatrix c = testing::znormal_rows(rng, 4, 10);
  SeriesMatrix doubled(8, 10);
  doubled << c, c;
  const TimeSeries ref = c.row(0).transpose();
  const TimeSeries a = ksc_average(c, ref, 2), b = ksc_average(doubled, ref, 2);
  CHECK(std::abs(a.dot(b)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("soft-dba")
{
  std::mt19937_64 rng(14);
  const TimeSeries x = testing::znormal(rng, 8);
  const SeriesMatrix twins = rows_of({x, x});
  CHECK(soft_dba_objective(twins, soft_dba(twins, x), 1.0) <= soft_dba_objective(twins, x, 1.0));

  const SeriesMatrix c = testing::znormal_rows(rng, 4, 8);
  const TimeSeries init = testing::znormal(rng, 8);
  const TimeSeries mu = soft_dba(c, init, 1.0);
  CHECK(soft_dba_objective(c, mu, 1.0) < soft_dba_objective(c, init, 1.0));

  TimeSeries grad = TimeSeries::Zero(8);
  for (Eigen::Index r = 0; r < c.rows(); ++r) grad += soft_dtw_gradient(init, c.row(r), 1.0);
  const TimeSeries step = init - 1e-3 * grad;
  CHECK(soft_dba_objective(c, step, 1.0) < soft_dba_objective(c, init, 1.0));
}

TEST_CASE("dispatch picks parameters from the distance")
{
  std::mt19937_64 rng(15);
  const SeriesMatrix c = testing::znormal_rows(rng, 3, 8);
  const TimeSeries init = c.row(1).transpose();
  CHECK(average(c, init, {AveragingKind::Mean}, SquaredEuclidean{}) == arithmetic_mean(c));
  CHECK(average(c, init, {AveragingKind::Dba, 30, 1e-6}, Dtw{0.25}) == dba(c, init, 0.25));
  CHECK(average(c, init, {AveragingKind::KscAverage}, Ksc{2}) == ksc_average(c, init, 2));
  CHECK(average(c, init, {AveragingKind::SoftDba, 30, 1e-6}, SoftDtw{0.5}) == soft_dba(c, init, 0.5));
  CHECK_THROWS_AS(validate(AveragingSpec{AveragingKind::Dba, 0, 1e-6}), ParameterError);
}

#include "tscl/averaging.hpp"

#include "tscl/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace tscl {

std::string to_string(AveragingKind kind)
{
  switch (kind)
  {
  case AveragingKind::Mean: return "mean";
  case AveragingKind::Dba: return "dba";
  case AveragingKind::ShapeExtraction: return "shape-extraction";
  case AveragingKind::KscAverage: return "ksc-average";
  case AveragingKind::SoftDba: return "soft-dba";
  }
  return "unknown";
}

void validate(const AveragingSpec& spec)
{
  if (spec.inner_max_iters < 1) throw ParameterError("inner_max_iters must be >= 1");
  if (!(spec.inner_tol > 0.0)) throw ParameterError("inner_tol must be positive");
}

namespace {

void require_members(const SeriesMatrix& cluster)
{
  if (cluster.rows() == 0) throw DegenerateInputError("cannot average an empty cluster");
}

void require_length(const SeriesMatrix& cluster, const TimeSeries& s)
{
  if (s.size() != cluster.cols())
    throw LengthMismatchError("prototype length differs from cluster series length");
}

double summed_dtw(const SeriesMatrix& cluster, const TimeSeries& avg, double window)
{
  double total = 0.0;
  for (Eigen::Index r = 0; r < cluster.rows(); ++r) total += dtw(cluster.row(r), avg, window);
  return total;
}

/// Sign of an eigenvector chosen by the smaller summed distance; exact ties
/// fall back to agreeing with the sum of aligned members, then to a
/// positive leading non-zero coordinate.
template <typename Cost>
TimeSeries choose_sign(const TimeSeries& v, const Eigen::VectorXd& aligned_sum, Cost&& cost)
{
  const TimeSeries neg = -v;
  const double plus = cost(v), minus = cost(neg);
  if (minus < plus) return neg;
  if (plus < minus) return v;
  const double agree = v.dot(aligned_sum);
  if (agree < 0.0) return neg;
  if (agree > 0.0) return v;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0.0) return v(i) > 0.0 ? v : neg;
  return v;
}

} // namespace

TimeSeries arithmetic_mean(const SeriesMatrix& cluster)
{
  require_members(cluster);
  return cluster.colwise().mean().transpose();
}

TimeSeries dba(const SeriesMatrix& cluster, const TimeSeries& init, double window, int max_iters,
               double tol)
{
  require_members(cluster);
  require_length(cluster, init);
  const Eigen::Index m = cluster.cols();

  TimeSeries best = init;
  double best_cost = summed_dtw(cluster, best, window);
  for (int it = 0; it < max_iters; ++it)
  {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(m);
    for (Eigen::Index r = 0; r < cluster.rows(); ++r)
    {
      const Eigen::VectorXd member = cluster.row(r).transpose();
      for (const auto& [i, j] : dtw_alignment(best, member, window).path)
      {
        sums(i) += member(j);
        counts(i) += 1.0;
      }
    }
    const TimeSeries next = sums.cwiseQuotient(counts);
    const double cost = summed_dtw(cluster, next, window);
    if (!(cost < best_cost)) break;
    const double gain = best_cost - cost;
    best = next;
    best_cost = cost;
    if (gain < tol) break;
  }
  return best;
}

TimeSeries shape_extraction(const SeriesMatrix& cluster, const TimeSeries& reference)
{
  require_members(cluster);
  require_length(cluster, reference);
  const Eigen::Index m = cluster.cols();

  SeriesMatrix aligned(cluster.rows(), m);
  const bool zero_reference = reference.squaredNorm() == 0.0;
  for (Eigen::Index r = 0; r < cluster.rows(); ++r)
  {
    if (zero_reference)
    {
      aligned.row(r) = cluster.row(r);
      continue;
    }
    const Eigen::Index s = best_correlation_shift(reference, cluster.row(r));
    aligned.row(r) = shift_series(cluster.row(r), s).transpose();
  }

  const Eigen::MatrixXd gram = aligned.transpose() * aligned;
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  const Eigen::MatrixXd M = centering.transpose() * gram * centering;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success) throw NumericError("shape extraction eigen-solve failed");
  const TimeSeries v = z_normalize(solver.eigenvectors().col(m - 1));

  const Eigen::VectorXd aligned_sum = aligned.colwise().sum().transpose();
  return choose_sign(v, aligned_sum, [&](const TimeSeries& c) {
    double total = 0.0;
    for (Eigen::Index r = 0; r < cluster.rows(); ++r) total += sbd(cluster.row(r), c);
    return total;
  });
}

TimeSeries ksc_average(const SeriesMatrix& cluster, const TimeSeries& reference,
                       std::optional<Eigen::Index> max_shift)
{
  require_members(cluster);
  require_length(cluster, reference);
  const Eigen::Index m = cluster.cols();
  for (Eigen::Index r = 0; r < cluster.rows(); ++r)
    if (cluster.row(r).squaredNorm() == 0.0)
      throw DegenerateInputError("k-SC average undefined for an all-zero member");

  const bool zero_reference = reference.squaredNorm() == 0.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd aligned_sum = Eigen::VectorXd::Zero(m);
  for (Eigen::Index r = 0; r < cluster.rows(); ++r)
  {
    Eigen::VectorXd y = cluster.row(r).transpose();
    if (!zero_reference) y = shift_series(y, ksc_best_shift(reference, y, max_shift));
    const double yy = y.squaredNorm();
    M += Eigen::MatrixXd::Identity(m, m) - (y * y.transpose()) / yy;
    aligned_sum += y;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success) throw NumericError("k-SC eigen-solve failed");
  const TimeSeries v = solver.eigenvectors().col(0).normalized();

  return choose_sign(v, aligned_sum, [&](const TimeSeries& c) {
    double total = 0.0;
    for (Eigen::Index r = 0; r < cluster.rows(); ++r)
      total += ksc_distance(cluster.row(r), c, max_shift);
    return total;
  });
}

double soft_dba_objective(const SeriesMatrix& cluster, const TimeSeries& mu, double gamma)
{
  double total = 0.0;
  for (Eigen::Index r = 0; r < cluster.rows(); ++r) total += soft_dtw(mu, cluster.row(r), gamma);
  return total;
}

TimeSeries soft_dba(const SeriesMatrix& cluster, const TimeSeries& init, double gamma,
                    int max_iters, double tol)
{
  require_members(cluster);
  require_length(cluster, init);
  if (!(gamma > 0.0)) throw ParameterError("soft-DTW gamma must be positive");

  constexpr int max_halvings = 20;
  const double base_step = 1.0 / (2.0 * static_cast<double>(cluster.rows()));

  TimeSeries mu = init;
  double step = base_step;
  for (int it = 0; it < max_iters; ++it)
  {
    double f = 0.0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(mu.size());
    for (Eigen::Index r = 0; r < cluster.rows(); ++r)
    {
      auto vg = soft_dtw_value_and_gradient(mu, cluster.row(r), gamma);
      f += vg.value;
      grad += vg.gradient;
    }
    if (grad.squaredNorm() == 0.0) break;

    bool accepted = false;
    double f_next = f;
    TimeSeries candidate;
    for (int h = 0; h <= max_halvings; ++h, step *= 0.5)
    {
      candidate = mu - step * grad;
      f_next = soft_dba_objective(cluster, candidate, gamma);
      if (f_next < f)
      {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    mu = std::move(candidate);
    const double rel = (f - f_next) / std::max(std::abs(f), 1e-12);
    if (rel < tol) break;
    step = std::min(2.0 * step, 4.0 * base_step);
  }
  return mu;
}

TimeSeries average(const SeriesMatrix& cluster, const TimeSeries& warm_start,
                   const AveragingSpec& spec, const DistanceSpec& distance)
{
  switch (spec.kind)
  {
  case AveragingKind::Mean: return arithmetic_mean(cluster);
  case AveragingKind::Dba:
  {
    const auto* p = std::get_if<Dtw>(&distance);
    return dba(cluster, warm_start, p ? p->window : 1.0, spec.inner_max_iters, spec.inner_tol);
  }
  case AveragingKind::ShapeExtraction: return shape_extraction(cluster, warm_start);
  case AveragingKind::KscAverage:
  {
    const auto* p = std::get_if<Ksc>(&distance);
    return ksc_average(cluster, warm_start, p ? p->max_shift : std::nullopt);
  }
  case AveragingKind::SoftDba:
  {
    const auto* p = std::get_if<SoftDtw>(&distance);
    return soft_dba(cluster, warm_start, p ? p->gamma : 1.0, spec.inner_max_iters, spec.inner_tol);
  }
  }
  throw ParameterError("unknown averaging kind");
}

} // namespace tscl

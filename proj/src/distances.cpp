#include "tscl/distances.hpp"

#include "tscl/parallel.hpp"

namespace tscl {

std::string distance_name(const DistanceSpec& spec)
{
  return std::visit(overloaded{
                        [](const SquaredEuclidean&) { return std::string("squared-euclidean"); },
                        [](const Euclidean&) { return std::string("euclidean"); },
                        [](const Dtw&) { return std::string("dtw"); },
                        [](const Msm&) { return std::string("msm"); },
                        [](const Sbd&) { return std::string("sbd"); },
                        [](const Ksc&) { return std::string("ksc"); },
                        [](const SoftDtw&) { return std::string("soft-dtw"); },
                    },
                    spec);
}

void validate(const DistanceSpec& spec, std::optional<Eigen::Index> length)
{
  std::visit(overloaded{
                 [](const SquaredEuclidean&) {},
                 [](const Euclidean&) {},
                 [](const Dtw& p) {
                   if (!(p.window >= 0.0 && p.window <= 1.0))
                     throw ParameterError("DTW window must lie in [0, 1]");
                 },
                 [](const Msm& p) {
                   if (!(p.cost > 0.0)) throw ParameterError("MSM cost must be positive");
                 },
                 [](const Sbd&) {},
                 [&](const Ksc& p) {
                   if (p.max_shift && *p.max_shift < 0)
                     throw ParameterError("k-SC max_shift must be non-negative");
                   if (p.max_shift && length && *p.max_shift > *length)
                     throw ParameterError("k-SC max_shift exceeds series length");
                 },
                 [](const SoftDtw& p) {
                   if (!(p.gamma > 0.0)) throw ParameterError("soft-DTW gamma must be positive");
                 },
             },
             spec);
}

double sse_contribution(const DistanceSpec& spec, double distance)
{
  return std::holds_alternative<Euclidean>(spec) ? distance * distance : distance;
}

DtwAlignment dtw_alignment(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y, double window)
{
  detail::require_same_length(x, y);
  const Eigen::Index m = x.size();
  const Eigen::Index r = detail::band_radius(window, m);
  constexpr double inf = std::numeric_limits<double>::infinity();

  Eigen::MatrixXd C = Eigen::MatrixXd::Constant(m + 1, m + 1, inf);
  C(0, 0) = 0.0;
  for (Eigen::Index i = 1; i <= m; ++i)
    for (Eigen::Index j = std::max<Eigen::Index>(1, i - r); j <= std::min(m, i + r); ++j)
    {
      const double d = x(i - 1) - y(j - 1);
      C(i, j) = d * d + std::min({C(i - 1, j - 1), C(i - 1, j), C(i, j - 1)});
    }

  DtwAlignment out;
  out.cost = C(m, m);
  Eigen::Index i = m, j = m;
  while (i > 0 && j > 0)
  {
    out.path.emplace_back(i - 1, j - 1);
    const double diag = C(i - 1, j - 1), up = C(i - 1, j), left = C(i, j - 1);
    if (diag <= up && diag <= left)
    {
      --i;
      --j;
    }
    else if (up <= left)
      --i;
    else
      --j;
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

Eigen::MatrixXd pairwise_matrix(const SeriesMatrix& A, const SeriesMatrix& B,
                                const DistanceSpec& spec, int threads)
{
  if (A.rows() > 0 && B.rows() > 0 && A.cols() != B.cols())
    throw LengthMismatchError("pairwise_matrix: series lengths differ");
  Eigen::MatrixXd out(A.rows(), B.rows());
  parallel_for(static_cast<std::size_t>(A.rows()), threads, [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < B.rows(); ++j) out(row, j) = distance(spec, A.row(row), B.row(j));
  });
  return out;
}

} // namespace tscl

#pragma once

// Time-series distance kernels.
//
// Every kernel takes two equal-length vector expressions (row or column,
// any scalar type) and returns a value in the first argument's scalar type.
// Pointwise costs inside DTW and soft-DTW are squared differences; DTW
// returns the un-rooted path cost.

#include "tscl/errors.hpp"
#include "tscl/tsdata.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace tscl {

struct SquaredEuclidean
{};

struct Euclidean
{};

struct Dtw
{
  /// Sakoe-Chiba band as a fraction of the series length; 1 = unrestricted.
  double window = 1.0;
};

struct Msm
{
  double cost = 1.0;
};

struct Sbd
{};

struct Ksc
{
  /// Largest shift tried in either direction; unset means the full length.
  std::optional<Eigen::Index> max_shift;
};

struct SoftDtw
{
  double gamma = 1.0;
};

/// Which kernel, carrying only the parameters that kernel uses.
using DistanceSpec = std::variant<SquaredEuclidean, Euclidean, Dtw, Msm, Sbd, Ksc, SoftDtw>;

std::string distance_name(const DistanceSpec& spec);

/// Throws ParameterError on out-of-range parameters. `length` is the series
/// length when known (checks k-SC max_shift against it).
void validate(const DistanceSpec& spec, std::optional<Eigen::Index> length = std::nullopt);

/// The per-series term of the k-means objective for a raw distance value:
/// the square for Euclidean, the value itself for every other kind (the
/// squared-Euclidean, DTW, MSM, SBD, k-SC and soft-DTW values are already
/// the quantity each algorithm minimises).
double sse_contribution(const DistanceSpec& spec, double distance);

namespace detail {

template <typename X, typename Y>
void require_same_length(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y)
{
  if (x.size() != y.size())
    throw LengthMismatchError("series lengths differ: " + std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()));
  if (x.size() == 0) throw LengthMismatchError("empty series");
}

template <typename T>
constexpr T inf()
{
  return std::numeric_limits<T>::infinity();
}

/// Band radius for a window fraction: ceil(w * m).
inline Eigen::Index band_radius(double window, Eigen::Index m)
{
  if (!(window >= 0.0 && window <= 1.0))
    throw ParameterError("DTW window must lie in [0, 1]");
  return static_cast<Eigen::Index>(std::ceil(window * static_cast<double>(m)));
}

/// <x, shift(y, s)> where shift(y, s)[i] = y[i - s], zero outside range.
template <typename X, typename Y>
typename X::Scalar shifted_dot(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
                               Eigen::Index s)
{
  using Scalar = typename X::Scalar;
  const Eigen::Index m = x.size();
  Scalar acc(0);
  const Eigen::Index lo = std::max<Eigen::Index>(0, s);
  const Eigen::Index hi = std::min<Eigen::Index>(m, m + s);
  for (Eigen::Index i = lo; i < hi; ++i) acc += x.coeff(i) * static_cast<Scalar>(y.coeff(i - s));
  return acc;
}

template <typename Scalar>
Scalar softmin3(Scalar a, Scalar b, Scalar c, Scalar gamma)
{
  using std::exp;
  using std::log;
  const Scalar lo = std::min({a, b, c});
  if (lo == inf<Scalar>()) return lo;
  const Scalar sum = exp(-(a - lo) / gamma) + exp(-(b - lo) / gamma) + exp(-(c - lo) / gamma);
  return lo - gamma * log(sum);
}

} // namespace detail

/// Zero-padded shift: out[i] = x[i - s].
template <typename X>
Eigen::Matrix<typename X::Scalar, Eigen::Dynamic, 1> shift_series(const Eigen::MatrixBase<X>& x,
                                                                  Eigen::Index s)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(X)
  const Eigen::Index m = x.size();
  Eigen::Matrix<typename X::Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<typename X::Scalar, Eigen::Dynamic, 1>::Zero(m);
  for (Eigen::Index i = std::max<Eigen::Index>(0, s); i < std::min<Eigen::Index>(m, m + s); ++i)
    out(i) = x.coeff(i - s);
  return out;
}

template <typename X, typename Y>
typename X::Scalar squared_euclidean(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(X)
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Y)
  detail::require_same_length(x, y);
  using Scalar = typename X::Scalar;
  Scalar acc(0);
  for (Eigen::Index i = 0; i < x.size(); ++i)
  {
    const Scalar d = x.coeff(i) - static_cast<Scalar>(y.coeff(i));
    acc += d * d;
  }
  return acc;
}

template <typename X, typename Y>
typename X::Scalar euclidean(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y)
{
  using std::sqrt;
  return sqrt(squared_euclidean(x, y));
}

/// DTW restricted to |i - j| <= ceil(window * m).
template <typename X, typename Y>
typename X::Scalar dtw(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
                       double window = 1.0)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(X)
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Y)
  detail::require_same_length(x, y);
  using Scalar = typename X::Scalar;
  const Eigen::Index m = x.size();
  const Eigen::Index r = detail::band_radius(window, m);

  // prev/curr hold row i-1 / i of the cost matrix, column 0 is the border
  std::vector<Scalar> prev(m + 1, detail::inf<Scalar>()), curr(m + 1, detail::inf<Scalar>());
  prev[0] = Scalar(0);
  for (Eigen::Index i = 1; i <= m; ++i)
  {
    std::fill(curr.begin(), curr.end(), detail::inf<Scalar>());
    const Eigen::Index lo = std::max<Eigen::Index>(1, i - r);
    const Eigen::Index hi = std::min<Eigen::Index>(m, i + r);
    for (Eigen::Index j = lo; j <= hi; ++j)
    {
      const Scalar d = x.coeff(i - 1) - static_cast<Scalar>(y.coeff(j - 1));
      const Scalar best = std::min({prev[j - 1], prev[j], curr[j - 1]});
      curr[j] = d * d + best;
    }
    std::swap(prev, curr);
  }
  return prev[m];
}

/// Optimal DTW warping path as (i, j) index pairs from (0,0) to (m-1,m-1).
/// Ties between predecessors resolve diagonal, then up, then left.
struct DtwAlignment
{
  double cost = 0.0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> path;
};

DtwAlignment dtw_alignment(const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& y, double window = 1.0);

namespace detail {

template <typename Scalar>
Scalar msm_step(Scalar u, Scalar v, Scalar t, Scalar c)
{
  using std::abs;
  if ((v <= u && u <= t) || (v >= u && u >= t)) return c;
  return c + std::min(abs(u - v), abs(u - t));
}

} // namespace detail

/// Move-Split-Merge distance with split/merge cost c.
template <typename X, typename Y>
typename X::Scalar msm(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
                       double cost = 1.0)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(X)
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Y)
  detail::require_same_length(x, y);
  if (!(cost > 0.0)) throw ParameterError("MSM cost must be positive");
  using Scalar = typename X::Scalar;
  using std::abs;
  const Eigen::Index m = x.size();
  const Scalar c = static_cast<Scalar>(cost);
  auto xv = [&](Eigen::Index i) { return static_cast<Scalar>(x.coeff(i)); };
  auto yv = [&](Eigen::Index j) { return static_cast<Scalar>(y.coeff(j)); };

  std::vector<Scalar> prev(m), curr(m);
  prev[0] = abs(xv(0) - yv(0));
  for (Eigen::Index j = 1; j < m; ++j)
    prev[j] = prev[j - 1] + detail::msm_step(yv(j), yv(j - 1), xv(0), c);
  for (Eigen::Index i = 1; i < m; ++i)
  {
    curr[0] = prev[0] + detail::msm_step(xv(i), xv(i - 1), yv(0), c);
    for (Eigen::Index j = 1; j < m; ++j)
    {
      const Scalar move = prev[j - 1] + abs(xv(i) - yv(j));
      const Scalar split = prev[j] + detail::msm_step(xv(i), xv(i - 1), yv(j), c);
      const Scalar merge = curr[j - 1] + detail::msm_step(yv(j), yv(j - 1), xv(i), c);
      curr[j] = std::min({move, split, merge});
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

/// Shift in [-(m-1), m-1] maximising <x, shift(y, s)>; ties keep the
/// smallest |s|, negative before positive.
template <typename X, typename Y>
Eigen::Index best_correlation_shift(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y)
{
  detail::require_same_length(x, y);
  const Eigen::Index m = x.size();
  Eigen::Index best_shift = 0;
  auto best = detail::shifted_dot(x, y, 0);
  for (Eigen::Index k = 1; k < m; ++k)
    for (Eigen::Index s : {-k, k})
    {
      const auto cc = detail::shifted_dot(x, y, s);
      if (cc > best)
      {
        best = cc;
        best_shift = s;
      }
    }
  return best_shift;
}

/// Shape-based distance: 1 - max normalised zero-padded cross-correlation.
/// Defined as 1 when either series is all zero.
template <typename X, typename Y>
typename X::Scalar sbd(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(X)
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Y)
  detail::require_same_length(x, y);
  using Scalar = typename X::Scalar;
  using std::sqrt;
  const Scalar norms = sqrt(x.squaredNorm() * static_cast<Scalar>(y.squaredNorm()));
  if (norms == Scalar(0)) return Scalar(1);
  const Eigen::Index m = x.size();
  Scalar best = -detail::inf<Scalar>();
  for (Eigen::Index s = -(m - 1); s < m; ++s) best = std::max(best, detail::shifted_dot(x, y, s));
  return Scalar(1) - best / norms;
}

namespace detail {

/// k-SC residual ||x - a*shift(y,q)|| / ||x|| at the optimal scale a.
template <typename X, typename Y>
typename X::Scalar ksc_at_shift(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
                                Eigen::Index q, typename X::Scalar x_norm)
{
  using Scalar = typename X::Scalar;
  using std::sqrt;
  const Eigen::Index m = x.size();
  Scalar yy(0);
  for (Eigen::Index i = std::max<Eigen::Index>(0, q); i < std::min<Eigen::Index>(m, m + q); ++i)
    yy += static_cast<Scalar>(y.coeff(i - q)) * static_cast<Scalar>(y.coeff(i - q));
  const Scalar alpha = yy == Scalar(0) ? Scalar(0) : shifted_dot(x, y, q) / yy;
  Scalar resid(0);
  for (Eigen::Index i = 0; i < m; ++i)
  {
    const Eigen::Index src = i - q;
    const Scalar ys = (src >= 0 && src < m) ? static_cast<Scalar>(y.coeff(src)) : Scalar(0);
    const Scalar d = x.coeff(i) - alpha * ys;
    resid += d * d;
  }
  return sqrt(resid) / x_norm;
}

inline Eigen::Index resolve_max_shift(std::optional<Eigen::Index> max_shift, Eigen::Index m)
{
  const Eigen::Index s = max_shift.value_or(m);
  if (s < 0 || s > m) throw ParameterError("k-SC max_shift must lie in [0, m]");
  return s;
}

} // namespace detail

/// k-SC distance: min over shifts |q| <= max_shift and scale a of
/// ||x - a*shift(y, q)|| / ||x||. Normalised by x only, so not symmetric.
template <typename X, typename Y>
typename X::Scalar ksc_distance(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
                                std::optional<Eigen::Index> max_shift = std::nullopt)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(X)
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Y)
  detail::require_same_length(x, y);
  using Scalar = typename X::Scalar;
  const Eigen::Index s = detail::resolve_max_shift(max_shift, x.size());
  const Scalar x_norm = x.norm();
  if (x_norm == Scalar(0)) throw DegenerateInputError("k-SC distance undefined for a zero series");
  Scalar best = detail::ksc_at_shift(x, y, 0, x_norm);
  for (Eigen::Index k = 1; k <= s; ++k)
    for (Eigen::Index q : {-k, k}) best = std::min(best, detail::ksc_at_shift(x, y, q, x_norm));
  return best;
}

/// Shift of y (|q| <= max_shift) that best matches x under the k-SC
/// distance; ties keep the smallest |q|, negative before positive.
template <typename X, typename Y>
Eigen::Index ksc_best_shift(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
                            std::optional<Eigen::Index> max_shift = std::nullopt)
{
  detail::require_same_length(x, y);
  using Scalar = typename X::Scalar;
  const Eigen::Index s = detail::resolve_max_shift(max_shift, x.size());
  const Scalar x_norm = x.norm();
  if (x_norm == Scalar(0)) throw DegenerateInputError("k-SC distance undefined for a zero series");
  Eigen::Index best_q = 0;
  Scalar best = detail::ksc_at_shift(x, y, 0, x_norm);
  for (Eigen::Index k = 1; k <= s; ++k)
    for (Eigen::Index q : {-k, k})
    {
      const Scalar d = detail::ksc_at_shift(x, y, q, x_norm);
      if (d < best)
      {
        best = d;
        best_q = q;
      }
    }
  return best_q;
}

namespace detail {

inline void require_gamma(double gamma)
{
  if (!(gamma > 0.0)) throw ParameterError("soft-DTW gamma must be positive");
}

/// Forward soft-DTW table R of size (m+1)x(m+1); R(0,0) = 0, borders = inf.
template <typename X, typename Y>
Eigen::Matrix<typename X::Scalar, Eigen::Dynamic, Eigen::Dynamic>
soft_dtw_table(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
               typename X::Scalar gamma)
{
  using Scalar = typename X::Scalar;
  const Eigen::Index m = x.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> R =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Constant(m + 1, m + 1, inf<Scalar>());
  R(0, 0) = Scalar(0);
  for (Eigen::Index j = 1; j <= m; ++j)
    for (Eigen::Index i = 1; i <= m; ++i)
    {
      const Scalar d = x.coeff(i - 1) - static_cast<Scalar>(y.coeff(j - 1));
      R(i, j) = d * d + softmin3(R(i - 1, j - 1), R(i - 1, j), R(i, j - 1), gamma);
    }
  return R;
}

} // namespace detail

/// Soft-DTW with smoothing gamma; may be negative.
template <typename X, typename Y>
typename X::Scalar soft_dtw(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
                            double gamma = 1.0)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(X)
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Y)
  detail::require_same_length(x, y);
  detail::require_gamma(gamma);
  using Scalar = typename X::Scalar;
  const Eigen::Index m = x.size();
  std::vector<Scalar> prev(m + 1, detail::inf<Scalar>()), curr(m + 1, detail::inf<Scalar>());
  prev[0] = Scalar(0);
  const Scalar g = static_cast<Scalar>(gamma);
  for (Eigen::Index i = 1; i <= m; ++i)
  {
    curr[0] = detail::inf<Scalar>();
    for (Eigen::Index j = 1; j <= m; ++j)
    {
      const Scalar d = x.coeff(i - 1) - static_cast<Scalar>(y.coeff(j - 1));
      curr[j] = d * d + detail::softmin3(prev[j - 1], prev[j], curr[j - 1], g);
    }
    std::swap(prev, curr);
  }
  return prev[m];
}

template <typename Scalar>
struct SoftDtwValueGradient
{
  Scalar value;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gradient;
};

/// Soft-DTW value and its gradient with respect to x, via the backward
/// expected-alignment recursion.
template <typename X, typename Y>
SoftDtwValueGradient<typename X::Scalar>
soft_dtw_value_and_gradient(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y,
                            double gamma = 1.0)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(X)
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Y)
  detail::require_same_length(x, y);
  detail::require_gamma(gamma);
  using Scalar = typename X::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::exp;
  const Eigen::Index m = x.size();
  const Scalar g = static_cast<Scalar>(gamma);

  const Matrix fwd = detail::soft_dtw_table(x, y, g);

  // padded to (m+2)x(m+2): row/col m+1 is the terminal border
  Matrix R = Matrix::Constant(m + 2, m + 2, -detail::inf<Scalar>());
  R.topLeftCorner(m + 1, m + 1) = fwd;
  R(m + 1, m + 1) = fwd(m, m);
  Matrix D = Matrix::Zero(m + 2, m + 2);
  for (Eigen::Index i = 1; i <= m; ++i)
    for (Eigen::Index j = 1; j <= m; ++j)
    {
      const Scalar d = x.coeff(i - 1) - static_cast<Scalar>(y.coeff(j - 1));
      D(i, j) = d * d;
    }
  Matrix E = Matrix::Zero(m + 2, m + 2);
  E(m + 1, m + 1) = Scalar(1);
  for (Eigen::Index j = m; j >= 1; --j)
    for (Eigen::Index i = m; i >= 1; --i)
    {
      const Scalar a = exp((R(i + 1, j) - R(i, j) - D(i + 1, j)) / g);
      const Scalar b = exp((R(i, j + 1) - R(i, j) - D(i, j + 1)) / g);
      const Scalar c = exp((R(i + 1, j + 1) - R(i, j) - D(i + 1, j + 1)) / g);
      E(i, j) = E(i + 1, j) * a + E(i, j + 1) * b + E(i + 1, j + 1) * c;
    }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grad(m);
  for (Eigen::Index i = 1; i <= m; ++i)
  {
    Scalar acc(0);
    for (Eigen::Index j = 1; j <= m; ++j)
      acc += E(i, j) * Scalar(2) * (x.coeff(i - 1) - static_cast<Scalar>(y.coeff(j - 1)));
    grad(i - 1) = acc;
  }
  return {fwd(m, m), std::move(grad)};
}

/// d soft_dtw(x, y, gamma) / dx.
template <typename X, typename Y>
Eigen::Matrix<typename X::Scalar, Eigen::Dynamic, 1>
soft_dtw_gradient(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Y>& y, double gamma = 1.0)
{
  return soft_dtw_value_and_gradient(x, y, gamma).gradient;
}

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Dispatches to the kernel selected by `spec`.
template <typename X, typename Y>
typename X::Scalar distance(const DistanceSpec& spec, const Eigen::MatrixBase<X>& x,
                            const Eigen::MatrixBase<Y>& y)
{
  return std::visit(overloaded{
                        [&](const SquaredEuclidean&) { return squared_euclidean(x, y); },
                        [&](const Euclidean&) { return euclidean(x, y); },
                        [&](const Dtw& p) { return dtw(x, y, p.window); },
                        [&](const Msm& p) { return msm(x, y, p.cost); },
                        [&](const Sbd&) { return sbd(x, y); },
                        [&](const Ksc& p) { return ksc_distance(x, y, p.max_shift); },
                        [&](const SoftDtw& p) { return soft_dtw(x, y, p.gamma); },
                    },
                    spec);
}

/// |A| x |B| matrix of distance(spec, A.row(i), B.row(j)). Rows may be
/// computed on `threads` workers; every entry is the scalar kernel's value.
Eigen::MatrixXd pairwise_matrix(const SeriesMatrix& A, const SeriesMatrix& B,
                                const DistanceSpec& spec, int threads = 1);

} // namespace tscl

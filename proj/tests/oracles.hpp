#pragma once

// Slow reference implementations, written directly from the definitions and
// sharing no code with the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline Vec to_vec(const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); }

inline double squared_euclidean(const Vec& x, const Vec& y)
{
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return s;
}

// memoised recursion over D(i, j) with cells outside the band unreachable
inline double dtw(const Vec& x, const Vec& y, long radius)
{
  const long m = static_cast<long>(x.size());
  std::map<std::pair<long, long>, double> memo;
  const double inf = std::numeric_limits<double>::infinity();
  std::function<double(long, long)> D = [&](long i, long j) -> double {
    if (i < 0 || j < 0 || std::abs(i - j) > radius) return inf;
    const double c = (x[i] - y[j]) * (x[i] - y[j]);
    if (i == 0 && j == 0) return c;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    const double v = c + std::min({D(i - 1, j - 1), D(i - 1, j), D(i, j - 1)});
    memo[{i, j}] = v;
    return v;
  };
  return D(m - 1, m - 1);
}

// every monotone warping path from (0,0) to (m-1,n-1); only sensible for m <= 6
inline std::vector<double> all_path_costs(const Vec& x, const Vec& y, long radius = 1 << 20)
{
  std::vector<double> costs;
  const long m = static_cast<long>(x.size()), n = static_cast<long>(y.size());
  std::function<void(long, long, double)> walk = [&](long i, long j, double acc) {
    if (std::abs(i - j) > radius) return;
    acc += (x[i] - y[j]) * (x[i] - y[j]);
    if (i == m - 1 && j == n - 1)
    {
      costs.push_back(acc);
      return;
    }
    if (i + 1 < m) walk(i + 1, j, acc);
    if (j + 1 < n) walk(i, j + 1, acc);
    if (i + 1 < m && j + 1 < n) walk(i + 1, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return costs;
}

inline double soft_dtw_by_paths(const Vec& x, const Vec& y, double gamma)
{
  long double sum = 0;
  for (double c : all_path_costs(x, y)) sum += std::exp(-static_cast<long double>(c) / gamma);
  return static_cast<double>(-gamma * std::log(sum));
}

// plain soft-min recursion without any overflow guard
inline double soft_dtw(const Vec& x, const Vec& y, double gamma)
{
  const std::size_t m = x.size(), n = y.size();
  const long double inf = std::numeric_limits<long double>::infinity();
  std::vector<std::vector<long double>> R(m + 1, std::vector<long double>(n + 1, inf));
  R[0][0] = 0;
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= n; ++j)
    {
      long double s = 0;
      for (long double r : {R[i - 1][j - 1], R[i - 1][j], R[i][j - 1]}) s += std::exp(-r / gamma);
      const long double d = (x[i - 1] - y[j - 1]) * (x[i - 1] - y[j - 1]);
      R[i][j] = d - gamma * std::log(s);
    }
  return static_cast<double>(R[m][n]);
}

// move-split-merge, recursive form
inline double msm(const Vec& x, const Vec& y, double c)
{
  auto C = [c](double now, double before, double other) {
    if ((before <= now && now <= other) || (before >= now && now >= other)) return c;
    return c + std::min(std::abs(now - before), std::abs(now - other));
  };
  std::map<std::pair<long, long>, double> memo;
  std::function<double(long, long)> D = [&](long i, long j) -> double {
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    double v;
    if (i == 0 && j == 0)
      v = std::abs(x[0] - y[0]);
    else if (j == 0)
      v = D(i - 1, 0) + C(x[i], x[i - 1], y[0]);
    else if (i == 0)
      v = D(0, j - 1) + C(y[j], y[j - 1], x[0]);
    else
      v = std::min({D(i - 1, j - 1) + std::abs(x[i] - y[j]), D(i - 1, j) + C(x[i], x[i - 1], y[j]),
                    D(i, j - 1) + C(y[j], y[j - 1], x[i])});
    memo[{i, j}] = v;
    return v;
  };
  return D(static_cast<long>(x.size()) - 1, static_cast<long>(y.size()) - 1);
}

// y moved right by s with zero fill
inline Vec shifted(const Vec& y, long s)
{
  const long m = static_cast<long>(y.size());
  Vec out(y.size(), 0.0);
  for (long i = 0; i < m; ++i)
    if (i - s >= 0 && i - s < m) out[i] = y[i - s];
  return out;
}

inline double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

inline double sbd(const Vec& x, const Vec& y)
{
  const long m = static_cast<long>(x.size());
  double best = -std::numeric_limits<double>::infinity();
  for (long s = -(m - 1); s <= m - 1; ++s) best = std::max(best, dot(x, shifted(y, s)));
  return 1.0 - best / std::sqrt(dot(x, x) * dot(y, y));
}

inline double ksc(const Vec& x, const Vec& y, long max_shift)
{
  double best = std::numeric_limits<double>::infinity();
  for (long q = -max_shift; q <= max_shift; ++q)
  {
    const Vec ys = shifted(y, q);
    const double yy = dot(ys, ys);
    const double a = yy > 0 ? dot(x, ys) / yy : 0.0;
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r += (x[i] - a * ys[i]) * (x[i] - a * ys[i]);
    best = std::min(best, std::sqrt(r / dot(x, x)));
  }
  return best;
}

// ---- assignment and clustering metrics ----

inline double min_assignment_cost(const Eigen::MatrixXd& cost)
{
  Eigen::MatrixXd c = cost.rows() <= cost.cols() ? cost : Eigen::MatrixXd(cost.transpose());
  std::vector<int> cols(static_cast<std::size_t>(c.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do
  {
    double s = 0;
    for (Eigen::Index r = 0; r < c.rows(); ++r) s += c(r, cols[static_cast<std::size_t>(r)]);
    best = std::min(best, s);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

inline double cl_accuracy(const std::vector<int>& truth, const std::vector<int>& pred)
{
  const int k = *std::max_element(pred.begin(), pred.end()) + 1;
  const int c = *std::max_element(truth.begin(), truth.end()) + 1;
  const int s = std::max(k, c);
  std::vector<int> perm(static_cast<std::size_t>(s));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do
  {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (perm[static_cast<std::size_t>(pred[i])] == truth[i]) ++hits;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(truth.size());
}

struct Pairs
{
  cpp_int both = 0, only_truth = 0, only_pred = 0, neither = 0;
};

inline Pairs pair_counts(const std::vector<int>& truth, const std::vector<int>& pred)
{
  Pairs p;
  for (std::size_t i = 0; i < truth.size(); ++i)
    for (std::size_t j = i + 1; j < truth.size(); ++j)
    {
      const bool t = truth[i] == truth[j], q = pred[i] == pred[j];
      if (t && q) ++p.both;
      else if (t) ++p.only_truth;
      else if (q) ++p.only_pred;
      else ++p.neither;
    }
  return p;
}

inline double rand_index(const std::vector<int>& truth, const std::vector<int>& pred)
{
  const Pairs p = pair_counts(truth, pred);
  return static_cast<double>(cpp_rational(p.both + p.neither, p.both + p.neither + p.only_truth + p.only_pred));
}

inline double adjusted_rand_index(const std::vector<int>& truth, const std::vector<int>& pred)
{
  const Pairs p = pair_counts(truth, pred);
  const cpp_int num = 2 * (p.neither * p.both - p.only_truth * p.only_pred);
  const cpp_int den = (p.neither + p.only_truth) * (p.only_truth + p.both) +
                      (p.neither + p.only_pred) * (p.only_pred + p.both);
  if (den == 0) return 1.0;
  return static_cast<double>(cpp_rational(num, den));
}

inline std::map<int, long> tally(const std::vector<int>& v)
{
  std::map<int, long> out;
  for (int x : v) ++out[x];
  return out;
}

inline long double entropy(const std::vector<int>& v)
{
  long double h = 0;
  const long double n = static_cast<long double>(v.size());
  for (auto [_, c] : tally(v)) h -= c / n * std::log(c / n);
  return h;
}

inline long double mutual_information(const std::vector<int>& truth, const std::vector<int>& pred)
{
  std::map<std::pair<int, int>, long> joint;
  for (std::size_t i = 0; i < truth.size(); ++i) ++joint[{truth[i], pred[i]}];
  const auto a = tally(truth), b = tally(pred);
  const long double n = static_cast<long double>(truth.size());
  long double mi = 0;
  for (auto [key, c] : joint)
    mi += c / n * std::log(n * c / (static_cast<long double>(a.at(key.first)) * b.at(key.second)));
  return mi;
}

inline cpp_int binomial(long n, long k)
{
  if (k < 0 || k > n) return 0;
  cpp_int r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// expectation of MI under the hypergeometric model with fixed marginals
inline long double expected_mutual_information(const std::vector<int>& truth, const std::vector<int>& pred)
{
  const long N = static_cast<long>(truth.size());
  long double emi = 0;
  for (auto [_, a] : tally(truth))
    for (auto [__, b] : tally(pred))
      for (long nij = std::max(1L, a + b - N); nij <= std::min(a, b); ++nij)
      {
        const cpp_rational prob(binomial(b, nij) * binomial(N - b, a - nij), binomial(N, a));
        emi += static_cast<long double>(nij) / N *
               std::log(static_cast<long double>(N) * nij / (static_cast<long double>(a) * b)) *
               static_cast<long double>(prob);
      }
  return emi;
}

inline bool same_partition(const std::vector<int>& truth, const std::vector<int>& pred)
{
  for (std::size_t i = 0; i < truth.size(); ++i)
    for (std::size_t j = 0; j < truth.size(); ++j)
      if ((truth[i] == truth[j]) != (pred[i] == pred[j])) return false;
  return true;
}

inline double nmi(const std::vector<int>& truth, const std::vector<int>& pred)
{
  const long double h = (entropy(truth) + entropy(pred)) / 2;
  if (h == 0) return same_partition(truth, pred) ? 1.0 : 0.0;
  return static_cast<double>(mutual_information(truth, pred) / h);
}

inline double ami(const std::vector<int>& truth, const std::vector<int>& pred)
{
  const long double h = (entropy(truth) + entropy(pred)) / 2;
  if (h == 0) return same_partition(truth, pred) ? 1.0 : 0.0;
  const long double emi = expected_mutual_information(truth, pred);
  // every item alone in both labellings: MI = EMI = H, so 0/0
  if (std::abs(h - emi) < 1e-15L * h) return same_partition(truth, pred) ? 1.0 : 0.0;
  return static_cast<double>((mutual_information(truth, pred) - emi) / (h - emi));
}

// ---- Wilcoxon by enumerating sign patterns ----

inline double wilcoxon_enumerated(const Vec& a, const Vec& b)
{
  Vec mags;
  std::vector<bool> pos;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i])
    {
      mags.push_back(std::abs(a[i] - b[i]));
      pos.push_back(a[i] > b[i]);
    }
  const std::size_t n = mags.size();
  Vec ranks(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
      if (mags[j] < mags[i]) ++less;
      if (mags[j] == mags[i]) ++equal;
    }
    ranks[i] = less + (equal + 1) / 2;
  }
  double w = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (pos[i]) w += ranks[i];
  double lower = 0, upper = 0;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask)
  {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s += ranks[i];
    if (s <= w + 1e-9) ++lower;
    if (s >= w - 1e-9) ++upper;
  }
  return std::min(1.0, 2 * std::min(lower, upper) / static_cast<double>(1UL << n));
}

} // namespace oracle

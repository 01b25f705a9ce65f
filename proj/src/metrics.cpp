#include "tscl/metrics.hpp"

#include "tscl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace tscl {

ContingencyTable contingency(std::span<const int> truth, std::span<const int> pred)
{
  if (truth.size() != pred.size())
    throw LengthMismatchError("label vectors differ in length (" + std::to_string(truth.size()) +
                              " vs " + std::to_string(pred.size()) + ")");
  if (truth.empty()) throw LengthMismatchError("no labels to compare");
  if (*std::min_element(truth.begin(), truth.end()) < 0 ||
      *std::min_element(pred.begin(), pred.end()) < 0)
    throw ParameterError("labels must be non-negative");

  const int rows = *std::max_element(pred.begin(), pred.end()) + 1;
  const int cols = *std::max_element(truth.begin(), truth.end()) + 1;
  ContingencyTable t;
  t.counts = CountMatrix::Zero(rows, cols);
  for (std::size_t i = 0; i < truth.size(); ++i) ++t.counts(pred[i], truth[i]);
  t.row_sums = t.counts.rowwise().sum();
  t.col_sums = t.counts.colwise().sum().transpose();
  t.total = static_cast<std::int64_t>(truth.size());
  return t;
}

LinearAssignment hungarian_assign(const Eigen::MatrixXd& cost)
{
  const Eigen::Index rows = cost.rows(), cols = cost.cols();
  LinearAssignment out;
  out.row_to_col.assign(static_cast<std::size_t>(rows), -1);
  if (rows == 0 || cols == 0) return out;
  if (!cost.allFinite()) throw ParameterError("assignment costs must be finite");

  // square problem with zero-cost dummy rows/columns
  const int n = static_cast<int>(std::max(rows, cols));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.topLeftCorner(rows, cols) = cost;

  // shortest augmenting path Hungarian with potentials (1-indexed)
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i)
  {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do
    {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j)
      {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j])
        {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta)
        {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j)
      {
        if (used[j])
        {
          u[p[j]] += delta;
          v[j] -= delta;
        }
        else
          minv[j] -= delta;
      }
      j0 = j1;
    } while (p[j0] != 0);
    do
    {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> match_row(n, -1), match_col(n, -1);
  for (int j = 1; j <= n; ++j)
  {
    match_row[p[j] - 1] = j - 1;
    match_col[j - 1] = p[j] - 1;
  }

  // Every optimal assignment uses only zero-reduced-cost edges, so the
  // lexicographically smallest optimum is the lexicographically smallest
  // perfect matching on those edges.
  const double eps = 1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff());
  auto tight = [&](int r, int c) { return a(r, c) - u[r + 1] - v[c + 1] <= eps; };

  std::vector<bool> locked(n, false);
  std::vector<bool> visited(n, false);
  int banned = -1;
  std::function<bool(int)> augment = [&](int row) {
    for (int col = 0; col < n; ++col)
    {
      if (locked[col] || col == banned || visited[col] || !tight(row, col)) continue;
      visited[col] = true;
      if (match_col[col] == -1 || augment(match_col[col]))
      {
        match_col[col] = row;
        match_row[row] = col;
        return true;
      }
    }
    return false;
  };

  for (int r = 0; r < n; ++r)
  {
    for (int c = 0; c < n; ++c)
    {
      if (locked[c] || !tight(r, c)) continue;
      if (match_row[r] == c) break;
      const int holder = match_col[c];
      const int freed = match_row[r];
      match_col[freed] = -1;
      banned = c;
      std::fill(visited.begin(), visited.end(), false);
      if (augment(holder))
      {
        match_row[r] = c;
        match_col[c] = r;
        break;
      }
      match_col[freed] = r;
    }
    locked[match_row[r]] = true;
  }

  for (Eigen::Index r = 0; r < rows; ++r)
  {
    const int c = match_row[static_cast<std::size_t>(r)];
    if (c < cols)
    {
      out.row_to_col[static_cast<std::size_t>(r)] = c;
      out.total_cost += cost(r, c);
    }
  }
  return out;
}

double cl_accuracy(std::span<const int> truth, std::span<const int> pred)
{
  const ContingencyTable t = contingency(truth, pred);
  const Eigen::MatrixXd counts = t.counts.cast<double>();
  const Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(counts.rows(), counts.cols(),
                                                         counts.maxCoeff()) - counts;
  const LinearAssignment match = hungarian_assign(cost);
  std::int64_t correct = 0;
  for (std::size_t r = 0; r < match.row_to_col.size(); ++r)
    if (match.row_to_col[r] >= 0) correct += t.counts(static_cast<Eigen::Index>(r), match.row_to_col[r]);
  return static_cast<double>(correct) / static_cast<double>(t.total);
}

namespace {

double pairs(std::int64_t k)
{
  return static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
}

struct PairCounts
{
  double joint = 0.0;  // pairs together in both
  double rows = 0.0;   // pairs together in the clustering
  double cols = 0.0;   // pairs together in the truth
  double total = 0.0;
};

PairCounts pair_counts(const ContingencyTable& t)
{
  PairCounts pc;
  for (Eigen::Index i = 0; i < t.counts.size(); ++i) pc.joint += pairs(t.counts.data()[i]);
  for (Eigen::Index i = 0; i < t.row_sums.size(); ++i) pc.rows += pairs(t.row_sums(i));
  for (Eigen::Index j = 0; j < t.col_sums.size(); ++j) pc.cols += pairs(t.col_sums(j));
  pc.total = pairs(t.total);
  return pc;
}

void require_pairs(std::span<const int> truth)
{
  if (truth.size() < 2) throw ParameterError("pair-counting indices need at least two items");
}

/// True when the two labelings induce the same partition.
bool same_partition(const ContingencyTable& t)
{
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i)
    if (t.row_sums(i) > 0 && t.counts.row(i).maxCoeff() != t.row_sums(i)) return false;
  for (Eigen::Index j = 0; j < t.counts.cols(); ++j)
    if (t.col_sums(j) > 0 && t.counts.col(j).maxCoeff() != t.col_sums(j)) return false;
  return true;
}

double entropy(const CountVector& sums, std::int64_t total)
{
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (Eigen::Index i = 0; i < sums.size(); ++i)
    if (sums(i) > 0)
    {
      const double p = static_cast<double>(sums(i)) / n;
      h -= p * std::log(p);
    }
  return h;
}

double mutual_information(const ContingencyTable& t)
{
  const double n = static_cast<double>(t.total);
  double mi = 0.0;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i)
    for (Eigen::Index j = 0; j < t.counts.cols(); ++j)
    {
      const auto nij = t.counts(i, j);
      if (nij == 0) continue;
      const double c = static_cast<double>(nij);
      mi += c / n *
            (std::log(c) + std::log(n) - std::log(static_cast<double>(t.row_sums(i))) -
             std::log(static_cast<double>(t.col_sums(j))));
    }
  return std::max(mi, 0.0);
}

} // namespace

double rand_index(std::span<const int> truth, std::span<const int> pred)
{
  require_pairs(truth);
  const PairCounts pc = pair_counts(contingency(truth, pred));
  // agreeing = together in both + apart in both
  const double agree = pc.joint + (pc.total - pc.rows - pc.cols + pc.joint);
  return agree / pc.total;
}

double adjusted_rand_index(std::span<const int> truth, std::span<const int> pred)
{
  require_pairs(truth);
  const PairCounts pc = pair_counts(contingency(truth, pred));
  const double expected = pc.rows * pc.cols / pc.total;
  const double max_index = (pc.rows + pc.cols) / 2.0;
  if (max_index == expected) return 1.0;
  return (pc.joint - expected) / (max_index - expected);
}

double expected_mutual_information(const ContingencyTable& t)
{
  const std::int64_t N = t.total;
  std::vector<double> lfact(static_cast<std::size_t>(N) + 1);
  for (std::int64_t i = 0; i <= N; ++i) lfact[static_cast<std::size_t>(i)] = std::lgamma(static_cast<double>(i) + 1.0);
  auto lf = [&](std::int64_t i) { return lfact[static_cast<std::size_t>(i)]; };

  const double n = static_cast<double>(N);
  double emi = 0.0;
  for (Eigen::Index i = 0; i < t.row_sums.size(); ++i)
  {
    const std::int64_t a = t.row_sums(i);
    if (a == 0) continue;
    for (Eigen::Index j = 0; j < t.col_sums.size(); ++j)
    {
      const std::int64_t b = t.col_sums(j);
      if (b == 0) continue;
      const double base = lf(a) + lf(b) + lf(N - a) + lf(N - b) - lf(N);
      for (std::int64_t nij = std::max<std::int64_t>(1, a + b - N); nij <= std::min(a, b); ++nij)
      {
        const double c = static_cast<double>(nij);
        const double log_p =
            base - lf(nij) - lf(a - nij) - lf(b - nij) - lf(N - a - b + nij);
        emi += c / n * std::log(n * c / (static_cast<double>(a) * static_cast<double>(b))) *
               std::exp(log_p);
      }
    }
  }
  return emi;
}

MutualInformation mutual_information_family(std::span<const int> truth, std::span<const int> pred)
{
  const ContingencyTable t = contingency(truth, pred);
  MutualInformation out;
  out.mi = mutual_information(t);
  const double normaliser = 0.5 * (entropy(t.row_sums, t.total) + entropy(t.col_sums, t.total));
  const bool identical = same_partition(t);

  if (normaliser == 0.0)
  {
    out.nmi = identical ? 1.0 : 0.0;
    out.ami = out.nmi;
    return out;
  }
  out.nmi = std::clamp(out.mi / normaliser, 0.0, 1.0);

  const double emi = expected_mutual_information(t);
  const double denominator = normaliser - emi;
  if (std::abs(denominator) < 1e-12 * std::max(1.0, normaliser))
    out.ami = identical ? 1.0 : 0.0;
  else
    out.ami = (out.mi - emi) / denominator;
  return out;
}

ScoreSet evaluate(std::span<const int> truth, std::span<const int> pred)
{
  ScoreSet s;
  s.clacc = cl_accuracy(truth, pred);
  s.ri = rand_index(truth, pred);
  s.ari = adjusted_rand_index(truth, pred);
  const MutualInformation mi = mutual_information_family(truth, pred);
  s.mi = mi.mi;
  s.nmi = mi.nmi;
  s.ami = mi.ami;
  return s;
}

} // namespace tscl

#include "tscl/stats.hpp"

#include "tscl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tscl {

namespace {

void require_table(const ScoreTable& table)
{
  if (table.scores.rows() == 0 || table.scores.cols() == 0)
    throw ParameterError("score table is empty");
  if (static_cast<Eigen::Index>(table.algorithms.size()) != table.scores.cols() ||
      static_cast<Eigen::Index>(table.datasets.size()) != table.scores.rows())
    throw ParameterError("score table names do not match its shape");
  if (!table.scores.allFinite()) throw ParameterError("score table has missing entries");
}

/// Mean ranks of `values`, ascending (smallest value gets rank 1).
std::vector<double> ascending_ranks(const std::vector<double>& values)
{
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();)
  {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

struct SignedRanks
{
  std::vector<double> ranks;
  std::vector<bool> positive;
};

SignedRanks signed_ranks(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size()) throw LengthMismatchError("Wilcoxon samples differ in length");
  std::vector<double> mag;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    const double d = a[i] - b[i];
    if (d == 0.0) continue;
    mag.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  if (mag.size() < 3)
    throw UndefinedTestError("Wilcoxon test needs at least three non-zero differences");
  return {ascending_ranks(mag), std::move(positive)};
}

double w_plus(const SignedRanks& sr)
{
  double w = 0.0;
  for (std::size_t i = 0; i < sr.ranks.size(); ++i)
    if (sr.positive[i]) w += sr.ranks[i];
  return w;
}

double exact_p(const SignedRanks& sr)
{
  // Ranks are multiples of 1/2; count sign patterns per doubled W+.
  std::vector<int> doubled;
  int total = 0;
  for (double r : sr.ranks)
  {
    doubled.push_back(static_cast<int>(std::lround(2.0 * r)));
    total += doubled.back();
  }
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  for (int r : doubled)
    for (int s = total; s >= r; --s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];

  const int observed = static_cast<int>(std::lround(2.0 * w_plus(sr)));
  const double patterns = std::ldexp(1.0, static_cast<int>(sr.ranks.size()));
  double lower = 0.0, upper = 0.0;
  for (int s = 0; s <= total; ++s)
  {
    if (s <= observed) lower += ways[static_cast<std::size_t>(s)];
    if (s >= observed) upper += ways[static_cast<std::size_t>(s)];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / patterns);
}

double normal_p(const SignedRanks& sr)
{
  const double n = static_cast<double>(sr.ranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;

  std::vector<double> sorted = sr.ranks;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();)
  {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  if (var <= 0.0) return 1.0;
  const double z = std::max(0.0, std::abs(w_plus(sr) - mean) - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

} // namespace

Eigen::MatrixXd rank_matrix(const ScoreTable& table)
{
  require_table(table);
  Eigen::MatrixXd ranks(table.scores.rows(), table.scores.cols());
  for (Eigen::Index d = 0; d < table.scores.rows(); ++d)
  {
    std::vector<double> negated(static_cast<std::size_t>(table.scores.cols()));
    for (Eigen::Index a = 0; a < table.scores.cols(); ++a)
      negated[static_cast<std::size_t>(a)] = -table.scores(d, a);
    const auto r = ascending_ranks(negated);
    for (Eigen::Index a = 0; a < table.scores.cols(); ++a) ranks(d, a) = r[static_cast<std::size_t>(a)];
  }
  return ranks;
}

Eigen::VectorXd average_ranks(const ScoreTable& table)
{
  return rank_matrix(table).colwise().mean().transpose();
}

double wilcoxon_exact(std::span<const double> a, std::span<const double> b)
{
  return exact_p(signed_ranks(a, b));
}

double wilcoxon_normal(std::span<const double> a, std::span<const double> b)
{
  return normal_p(signed_ranks(a, b));
}

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b)
{
  const SignedRanks sr = signed_ranks(a, b);
  return sr.ranks.size() <= 20 ? exact_p(sr) : normal_p(sr);
}

std::vector<double> holm_adjust(std::span<const double> p)
{
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t i = 0; i < m; ++i)
  {
    const double scaled = std::min(1.0, static_cast<double>(m - i) * p[order[i]]);
    running = std::max(running, scaled);
    adjusted[order[i]] = running;
  }
  return adjusted;
}

CliqueReport holm_cliques(const ScoreTable& table, double alpha)
{
  require_table(table);
  const Eigen::Index k = table.scores.cols();
  if (k < 2) throw ParameterError("clique analysis needs at least two algorithms");

  CliqueReport report;
  report.p_values = Eigen::MatrixXd::Zero(k, k);
  report.adjusted = Eigen::MatrixXd::Zero(k, k);

  std::vector<double> flat;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
    {
      const Eigen::VectorXd a = table.scores.col(i), b = table.scores.col(j);
      double p = 1.0;
      try
      {
        p = wilcoxon_signed_rank({a.data(), static_cast<std::size_t>(a.size())},
                                 {b.data(), static_cast<std::size_t>(b.size())});
      }
      catch (const UndefinedTestError&)
      {
        report.warnings.push_back("Wilcoxon test undefined for " + table.algorithms[i] + " vs " +
                                  table.algorithms[j] + "; treated as not significant");
      }
      flat.push_back(p);
      pairs.emplace_back(i, j);
    }
  const std::vector<double> adjusted = holm_adjust(flat);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> significant =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(k, k, false);
  for (std::size_t t = 0; t < pairs.size(); ++t)
  {
    const auto [i, j] = pairs[t];
    report.p_values(i, j) = report.p_values(j, i) = flat[t];
    report.adjusted(i, j) = report.adjusted(j, i) = adjusted[t];
    significant(i, j) = significant(j, i) = adjusted[t] < alpha;
  }

  const Eigen::VectorXd avg = average_ranks(table);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return avg(a) < avg(b); });
  for (auto idx : order)
  {
    report.order.push_back(table.algorithms[static_cast<std::size_t>(idx)]);
    report.ranks.push_back(avg(idx));
  }

  // run starting at i extends to `end` while no pair inside it is significant
  Eigen::Index previous_end = -1;
  for (Eigen::Index i = 0; i < k; ++i)
  {
    Eigen::Index end = i;
    while (end + 1 < k)
    {
      bool clash = false;
      for (Eigen::Index t = i; t <= end && !clash; ++t)
        clash = significant(order[static_cast<std::size_t>(t)], order[static_cast<std::size_t>(end + 1)]);
      if (clash) break;
      ++end;
    }
    if (end > previous_end)
    {
      std::vector<std::string> clique;
      for (Eigen::Index t = i; t <= end; ++t) clique.push_back(report.order[static_cast<std::size_t>(t)]);
      report.cliques.push_back(std::move(clique));
      previous_end = end;
    }
  }
  return report;
}

} // namespace tscl

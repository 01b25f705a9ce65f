#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

namespace tscl {

/// Dataset x algorithm scores, higher is better, no missing entries.
struct ScoreTable
{
  std::vector<std::string> datasets;
  std::vector<std::string> algorithms;
  Eigen::MatrixXd scores;
};

/// Per-dataset ranks (1 = best, ties share the mean rank).
Eigen::MatrixXd rank_matrix(const ScoreTable& table);

/// Column means of rank_matrix.
Eigen::VectorXd average_ranks(const ScoreTable& table);

/// Two-sided Wilcoxon signed-rank p-value. Zero differences are dropped;
/// exact distribution for n <= 20, tie-corrected normal approximation with
/// continuity correction above. Throws UndefinedTestError when fewer than
/// three non-zero differences remain.
double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Exact two-sided p by enumerating the sign patterns' W+ distribution.
double wilcoxon_exact(std::span<const double> a, std::span<const double> b);

/// Normal approximation regardless of n.
double wilcoxon_normal(std::span<const double> a, std::span<const double> b);

/// Holm step-down adjusted p-values, returned in input order.
std::vector<double> holm_adjust(std::span<const double> p);

struct CliqueReport
{
  /// Algorithm names ordered by average rank, best first.
  std::vector<std::string> order;
  /// Average rank of each entry of `order`.
  std::vector<double> ranks;
  /// Unadjusted and Holm-adjusted pairwise p-values, indexed like
  /// ScoreTable::algorithms.
  Eigen::MatrixXd p_values;
  Eigen::MatrixXd adjusted;
  /// Maximal runs of consecutive algorithms (in rank order) with no
  /// significant pair, including singletons.
  std::vector<std::vector<std::string>> cliques;
  std::vector<std::string> warnings;
};

CliqueReport holm_cliques(const ScoreTable& table, double alpha = 0.05);

} // namespace tscl

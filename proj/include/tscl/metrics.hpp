#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace tscl {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Cluster (rows) by class (columns) counts.
struct ContingencyTable
{
  CountMatrix counts;
  CountVector row_sums;
  CountVector col_sums;
  std::int64_t total = 0;
};

/// counts(a, b) = #{i : pred_i = a and truth_i = b}. Labels must be >= 0;
/// the table has max(pred)+1 rows and max(truth)+1 columns.
ContingencyTable contingency(std::span<const int> truth, std::span<const int> pred);

struct LinearAssignment
{
  /// Column assigned to each row, -1 when the row is left unassigned
  /// (more rows than columns).
  std::vector<int> row_to_col;
  double total_cost = 0.0;
};

/// Minimum-cost assignment on a rectangular cost matrix. Among optimal
/// assignments the lexicographically smallest row_to_col is returned.
LinearAssignment hungarian_assign(const Eigen::MatrixXd& cost);

double cl_accuracy(std::span<const int> truth, std::span<const int> pred);
double rand_index(std::span<const int> truth, std::span<const int> pred);
double adjusted_rand_index(std::span<const int> truth, std::span<const int> pred);

struct MutualInformation
{
  double mi = 0.0;
  double nmi = 0.0;
  double ami = 0.0;
};

/// Natural-log MI; NMI and AMI normalised by the arithmetic mean of the two
/// entropies, AMI with the exact hypergeometric expected MI.
MutualInformation mutual_information_family(std::span<const int> truth,
                                            std::span<const int> pred);

/// Expected mutual information under the permutation model.
double expected_mutual_information(const ContingencyTable& table);

struct ScoreSet
{
  double clacc = 0.0;
  double ri = 0.0;
  double ari = 0.0;
  double mi = 0.0;
  double nmi = 0.0;
  double ami = 0.0;
};

ScoreSet evaluate(std::span<const int> truth, std::span<const int> pred);

} // namespace tscl

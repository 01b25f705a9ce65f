#pragma once

#include "tscl/distances.hpp"
#include "tscl/tsdata.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>

namespace tscl {

enum class AveragingKind { Mean, Dba, ShapeExtraction, KscAverage, SoftDba };

std::string to_string(AveragingKind kind);

/// Prototype update procedure. The inner iteration settings apply to the
/// iterative methods (DBA, soft-DBA); distance parameters (window, gamma,
/// max_shift) come from the paired DistanceSpec.
struct AveragingSpec
{
  AveragingKind kind = AveragingKind::Mean;
  int inner_max_iters = 30;
  double inner_tol = 1e-6;
};

void validate(const AveragingSpec& spec);

/// Coordinate-wise mean of the rows.
TimeSeries arithmetic_mean(const SeriesMatrix& cluster);

/// DTW barycentre averaging started from `init`. Returns the iterate with
/// the lowest summed DTW, never worse than `init`.
TimeSeries dba(const SeriesMatrix& cluster, const TimeSeries& init, double window = 1.0,
               int max_iters = 30, double tol = 1e-6);

/// k-Shape shape extraction: members aligned to `reference` at their
/// SBD-optimal shift, then the dominant eigenvector of the centred
/// Gram matrix, z-normalised, with the sign that minimises summed SBD.
TimeSeries shape_extraction(const SeriesMatrix& cluster, const TimeSeries& reference);

/// k-SC centroid: members aligned to `reference` at their k-SC-optimal
/// shift, then the eigenvector of sum(I - y y^T / |y|^2) with smallest
/// eigenvalue. Unit norm.
TimeSeries ksc_average(const SeriesMatrix& cluster, const TimeSeries& reference,
                       std::optional<Eigen::Index> max_shift = std::nullopt);

/// Gradient descent with backtracking on F(mu) = sum soft_dtw(mu, y_j).
TimeSeries soft_dba(const SeriesMatrix& cluster, const TimeSeries& init, double gamma = 1.0,
                    int max_iters = 30, double tol = 1e-6);

/// Objective minimised by soft_dba.
double soft_dba_objective(const SeriesMatrix& cluster, const TimeSeries& mu, double gamma);

/// Runs the averaging method named by `spec`, warm-started from
/// `warm_start` (the cluster's current prototype).
TimeSeries average(const SeriesMatrix& cluster, const TimeSeries& warm_start,
                   const AveragingSpec& spec, const DistanceSpec& distance);

} // namespace tscl

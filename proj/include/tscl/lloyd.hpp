#pragma once

#include "tscl/averaging.hpp"
#include "tscl/distances.hpp"
#include "tscl/tsdata.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tscl {

using Rng = std::mt19937_64;

enum class InitStrategy { Forgy, Random, KMeansPlusPlus, GreedyKMeansPlusPlus };

enum class StopReason { StableAssignments, Tolerance, MaxIterations };

std::string to_string(InitStrategy init);
std::string to_string(StopReason reason);
InitStrategy parse_init_strategy(const std::string& text);

/// Lloyd's configuration. Defaults: Forgy with 10 restarts, 50 iterations,
/// inertia tolerance 1e-6.
struct KMeansConfig
{
  int k = 2;
  DistanceSpec distance = SquaredEuclidean{};
  AveragingSpec averaging{};
  InitStrategy init = InitStrategy::Forgy;
  /// Runs in addition to the first one.
  int n_restarts = 10;
  int max_iters = 50;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  /// Workers for independent restarts; the result does not depend on it.
  int threads = 1;
};

struct ClusterModel
{
  SeriesMatrix centroids;
  std::vector<int> assignments;
  double inertia = 0.0;
  int iterations_run = 0;
  int restart_index = 0;
  StopReason converged_reason = StopReason::MaxIterations;
  /// Inertia after assignment and repair, one entry per iteration of the
  /// selected run.
  std::vector<double> inertia_trace;
  /// Final inertia of every run, indexed by restart.
  std::vector<double> restart_inertias;
};

struct Assignment
{
  std::vector<int> labels;
  /// Raw distance of each series to its assigned centroid.
  Eigen::VectorXd distances;
  double inertia = 0.0;
};

struct RepairResult
{
  std::vector<int> labels;
  SeriesMatrix centroids;
  double inertia = 0.0;
  /// Series moved into each repaired cluster, in repair order.
  std::vector<Eigen::Index> moved;
};

/// Seed for restart r derived from the configured seed (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// k distinct members drawn uniformly without replacement.
SeriesMatrix init_forgy(const SeriesMatrix& data, int k, Rng& rng);

/// k synthetic series drawn uniformly within each coordinate's data range.
SeriesMatrix init_random(const SeriesMatrix& data, int k, Rng& rng);

/// k-means++ seeding with the configured distance: first pick uniform, then
/// either sampled proportional to squared nearest-prototype distance or, in
/// greedy mode, the member maximising that distance (ties: lowest index).
SeriesMatrix init_kmeanspp(const SeriesMatrix& data, int k, const DistanceSpec& spec, Rng& rng,
                           bool greedy);

/// As init_kmeanspp with a fixed first pick.
SeriesMatrix init_kmeanspp_from(const SeriesMatrix& data, int k, const DistanceSpec& spec,
                                Rng& rng, bool greedy, Eigen::Index first);

/// Nearest-centroid assignment (ties: lowest centroid index) and the
/// objective sum of sse_contribution(distance).
Assignment assign(const SeriesMatrix& data, const SeriesMatrix& centroids,
                  const DistanceSpec& spec);

/// Objective of a given (centroids, labels) pair, recomputed from scratch.
double inertia_of(const SeriesMatrix& data, const SeriesMatrix& centroids,
                  const std::vector<int>& labels, const DistanceSpec& spec);

/// Per-cluster averaging warm-started from the current centroid; empty
/// clusters keep their centroid.
SeriesMatrix update_centroids(const SeriesMatrix& data, const std::vector<int>& labels,
                              const AveragingSpec& averaging, const DistanceSpec& distance,
                              const SeriesMatrix& current);

/// Fills each empty cluster (ascending index) with the series furthest from
/// its own centroid, taken from a cluster that keeps at least one member.
RepairResult repair_empty_clusters(const SeriesMatrix& data, const std::vector<int>& labels,
                                   const SeriesMatrix& centroids, const DistanceSpec& spec);

/// Full Lloyd's run with restarts; returns the run with the lowest final
/// inertia (ties: earliest restart). Throws TimeoutError past `deadline`.
ClusterModel fit(const SeriesMatrix& data, const KMeansConfig& config,
                 std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

inline ClusterModel fit(const LabeledDataset& data, const KMeansConfig& config,
                        std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt)
{
  return fit(data.series(), config, deadline);
}

/// Nearest-centroid labels for new series.
std::vector<int> predict(const ClusterModel& model, const SeriesMatrix& series,
                         const DistanceSpec& spec);

} // namespace tscl

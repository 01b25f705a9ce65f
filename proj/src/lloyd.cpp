#include "tscl/lloyd.hpp"

#include "tscl/errors.hpp"
#include "tscl/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tscl {

std::string to_string(InitStrategy init)
{
  switch (init)
  {
  case InitStrategy::Forgy: return "forgy";
  case InitStrategy::Random: return "random";
  case InitStrategy::KMeansPlusPlus: return "kmeans++";
  case InitStrategy::GreedyKMeansPlusPlus: return "greedy-kmeans++";
  }
  return "unknown";
}

std::string to_string(StopReason reason)
{
  switch (reason)
  {
  case StopReason::StableAssignments: return "stable-assignments";
  case StopReason::Tolerance: return "tol";
  case StopReason::MaxIterations: return "max-iters";
  }
  return "unknown";
}

InitStrategy parse_init_strategy(const std::string& text)
{
  if (text == "forgy") return InitStrategy::Forgy;
  if (text == "random") return InitStrategy::Random;
  if (text == "kmeans++") return InitStrategy::KMeansPlusPlus;
  if (text == "greedy-kmeans++") return InitStrategy::GreedyKMeansPlusPlus;
  throw ParameterError("unknown init strategy '" + text + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(seed ^ splitmix(stream + 0x632be59bd9b4e019ULL));
}

namespace {

void require_k(const SeriesMatrix& data, int k)
{
  if (k < 1) throw ParameterError("k must be positive");
  if (data.rows() < k)
    throw ParameterError("k = " + std::to_string(k) + " exceeds the number of series (" +
                         std::to_string(data.rows()) + ")");
}

Eigen::Index uniform_index(Rng& rng, Eigen::Index n)
{
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  return pick(rng);
}

} // namespace

SeriesMatrix init_forgy(const SeriesMatrix& data, int k, Rng& rng)
{
  require_k(data, k);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  // partial Fisher-Yates
  for (int i = 0; i < k; ++i)
  {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), order.size() - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[pick(rng)]);
  }
  order.resize(static_cast<std::size_t>(k));
  return data(order, Eigen::all);
}

SeriesMatrix init_random(const SeriesMatrix& data, int k, Rng& rng)
{
  if (data.rows() == 0) throw ParameterError("cannot initialise from an empty dataset");
  if (k < 1) throw ParameterError("k must be positive");
  const Eigen::RowVectorXd lo = data.colwise().minCoeff();
  const Eigen::RowVectorXd hi = data.colwise().maxCoeff();
  SeriesMatrix out(k, data.cols());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 0; c < k; ++c)
    for (Eigen::Index j = 0; j < data.cols(); ++j)
      out(c, j) = lo(j) + unit(rng) * (hi(j) - lo(j));
  return out;
}

SeriesMatrix init_kmeanspp_from(const SeriesMatrix& data, int k, const DistanceSpec& spec,
                                Rng& rng, bool greedy, Eigen::Index first)
{
  require_k(data, k);
  const Eigen::Index n = data.rows();
  if (first < 0 || first >= n) throw ParameterError("first prototype index out of range");

  std::vector<Eigen::Index> chosen{first};
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  taken[static_cast<std::size_t>(first)] = true;
  Eigen::VectorXd nearest(n);
  for (Eigen::Index i = 0; i < n; ++i) nearest(i) = distance(spec, data.row(i), data.row(first));

  while (static_cast<int>(chosen.size()) < k)
  {
    Eigen::Index next = -1;
    if (greedy)
    {
      for (Eigen::Index i = 0; i < n; ++i)
        if (!taken[static_cast<std::size_t>(i)] && (next < 0 || nearest(i) > nearest(next))) next = i;
    }
    else
    {
      std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (!taken[static_cast<std::size_t>(i)])
        {
          const double d = std::max(nearest(i), 0.0);
          weights[static_cast<std::size_t>(i)] = d * d;
          total += d * d;
        }
      if (total > 0.0 && std::isfinite(total))
      {
        std::discrete_distribution<Eigen::Index> pick(weights.begin(), weights.end());
        next = pick(rng);
      }
      else
      {
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < n; ++i)
          if (!taken[static_cast<std::size_t>(i)]) free.push_back(i);
        next = free[static_cast<std::size_t>(uniform_index(rng, static_cast<Eigen::Index>(free.size())))];
      }
    }
    chosen.push_back(next);
    taken[static_cast<std::size_t>(next)] = true;
    for (Eigen::Index i = 0; i < n; ++i)
      nearest(i) = std::min(nearest(i), distance(spec, data.row(i), data.row(next)));
  }
  return data(chosen, Eigen::all);
}

SeriesMatrix init_kmeanspp(const SeriesMatrix& data, int k, const DistanceSpec& spec, Rng& rng,
                           bool greedy)
{
  require_k(data, k);
  const Eigen::Index first = uniform_index(rng, data.rows());
  return init_kmeanspp_from(data, k, spec, rng, greedy, first);
}

Assignment assign(const SeriesMatrix& data, const SeriesMatrix& centroids, const DistanceSpec& spec)
{
  if (centroids.rows() == 0) throw ParameterError("no centroids to assign to");
  if (centroids.cols() != data.cols())
    throw LengthMismatchError("centroid length differs from series length");
  Assignment out;
  out.labels.resize(static_cast<std::size_t>(data.rows()));
  out.distances.resize(data.rows());
  for (Eigen::Index i = 0; i < data.rows(); ++i)
  {
    int best = 0;
    double best_d = distance(spec, data.row(i), centroids.row(0));
    for (Eigen::Index c = 1; c < centroids.rows(); ++c)
    {
      const double d = distance(spec, data.row(i), centroids.row(c));
      if (d < best_d)
      {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    out.labels[static_cast<std::size_t>(i)] = best;
    out.distances(i) = best_d;
    out.inertia += sse_contribution(spec, best_d);
  }
  return out;
}

double inertia_of(const SeriesMatrix& data, const SeriesMatrix& centroids,
                  const std::vector<int>& labels, const DistanceSpec& spec)
{
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    total += sse_contribution(
        spec, distance(spec, data.row(i), centroids.row(labels[static_cast<std::size_t>(i)])));
  return total;
}

SeriesMatrix update_centroids(const SeriesMatrix& data, const std::vector<int>& labels,
                              const AveragingSpec& averaging, const DistanceSpec& distance_spec,
                              const SeriesMatrix& current)
{
  SeriesMatrix next = current;
  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(current.rows()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    members[static_cast<std::size_t>(labels[i])].push_back(static_cast<Eigen::Index>(i));
  for (Eigen::Index c = 0; c < current.rows(); ++c)
  {
    const auto& idx = members[static_cast<std::size_t>(c)];
    if (idx.empty()) continue;
    const SeriesMatrix cluster = data(idx, Eigen::all);
    next.row(c) = average(cluster, current.row(c).transpose(), averaging, distance_spec).transpose();
  }
  return next;
}

RepairResult repair_empty_clusters(const SeriesMatrix& data, const std::vector<int>& labels,
                                   const SeriesMatrix& centroids, const DistanceSpec& spec)
{
  RepairResult out{labels, centroids, 0.0, {}};
  const Eigen::Index n = data.rows();
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(centroids.rows()), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  Eigen::VectorXd dist(n);
  for (Eigen::Index i = 0; i < n; ++i)
    dist(i) = distance(spec, data.row(i), centroids.row(labels[static_cast<std::size_t>(i)]));

  for (Eigen::Index c = 0; c < centroids.rows(); ++c)
  {
    if (counts[static_cast<std::size_t>(c)] != 0) continue;
    Eigen::Index pick = -1;
    for (Eigen::Index i = 0; i < n; ++i)
    {
      const auto owner = static_cast<std::size_t>(out.labels[static_cast<std::size_t>(i)]);
      if (counts[owner] < 2) continue;
      if (pick < 0 || dist(i) > dist(pick)) pick = i;
    }
    if (pick < 0) throw DegenerateInputError("not enough series to fill empty clusters");
    auto& label = out.labels[static_cast<std::size_t>(pick)];
    --counts[static_cast<std::size_t>(label)];
    label = static_cast<int>(c);
    counts[static_cast<std::size_t>(c)] = 1;
    out.centroids.row(c) = data.row(pick);
    dist(pick) = distance(spec, data.row(pick), out.centroids.row(c));
    out.moved.push_back(pick);
  }
  for (Eigen::Index i = 0; i < n; ++i) out.inertia += sse_contribution(spec, dist(i));
  return out;
}

namespace {

void check_deadline(const std::optional<std::chrono::steady_clock::time_point>& deadline)
{
  if (deadline && std::chrono::steady_clock::now() > *deadline)
    throw TimeoutError("fit exceeded its time budget");
}

SeriesMatrix initial_centroids(const SeriesMatrix& data, const KMeansConfig& config, Rng& rng)
{
  switch (config.init)
  {
  case InitStrategy::Forgy: return init_forgy(data, config.k, rng);
  case InitStrategy::Random: return init_random(data, config.k, rng);
  case InitStrategy::KMeansPlusPlus: return init_kmeanspp(data, config.k, config.distance, rng, false);
  case InitStrategy::GreedyKMeansPlusPlus:
    return init_kmeanspp(data, config.k, config.distance, rng, true);
  }
  throw ParameterError("unknown init strategy");
}

ClusterModel run_once(const SeriesMatrix& data, const KMeansConfig& config, int restart,
                      const std::optional<std::chrono::steady_clock::time_point>& deadline)
{
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(restart)));
  ClusterModel model;
  model.restart_index = restart;
  model.centroids = initial_centroids(data, config, rng);

  std::vector<int> previous;
  double previous_inertia = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= config.max_iters; ++it)
  {
    check_deadline(deadline);
    Assignment a = assign(data, model.centroids, config.distance);
    std::vector<int> counts(static_cast<std::size_t>(config.k), 0);
    for (int l : a.labels) ++counts[static_cast<std::size_t>(l)];
    if (std::find(counts.begin(), counts.end(), 0) != counts.end())
    {
      RepairResult fixed = repair_empty_clusters(data, a.labels, model.centroids, config.distance);
      a.labels = std::move(fixed.labels);
      a.inertia = fixed.inertia;
      model.centroids = std::move(fixed.centroids);
    }
    if (!std::isfinite(a.inertia)) throw NumericError("inertia became non-finite");

    model.assignments = a.labels;
    model.inertia = a.inertia;
    model.iterations_run = it;
    model.inertia_trace.push_back(a.inertia);

    if (!previous.empty() && a.labels == previous)
    {
      model.converged_reason = StopReason::StableAssignments;
      return model;
    }
    if (std::abs(previous_inertia - a.inertia) < config.tol)
    {
      model.converged_reason = StopReason::Tolerance;
      return model;
    }
    if (it == config.max_iters) break;

    model.centroids =
        update_centroids(data, a.labels, config.averaging, config.distance, model.centroids);
    previous = std::move(a.labels);
    previous_inertia = a.inertia;
  }
  model.converged_reason = StopReason::MaxIterations;
  return model;
}

} // namespace

ClusterModel fit(const SeriesMatrix& data, const KMeansConfig& config,
                 std::optional<std::chrono::steady_clock::time_point> deadline)
{
  require_k(data, config.k);
  validate(config.distance, data.cols());
  validate(config.averaging);
  if (config.max_iters < 1) throw ParameterError("max_iters must be >= 1");
  if (config.n_restarts < 0) throw ParameterError("n_restarts must be non-negative");
  if (!(config.tol >= 0.0)) throw ParameterError("tol must be non-negative");

  const int runs = config.n_restarts + 1;
  std::vector<ClusterModel> models(static_cast<std::size_t>(runs));
  parallel_for(static_cast<std::size_t>(runs), config.threads, [&](std::size_t r) {
    models[r] = run_once(data, config, static_cast<int>(r), deadline);
  });

  std::size_t best = 0;
  std::vector<double> inertias;
  for (std::size_t r = 0; r < models.size(); ++r)
  {
    inertias.push_back(models[r].inertia);
    if (models[r].inertia < models[best].inertia) best = r;
  }
  ClusterModel out = std::move(models[best]);
  out.restart_inertias = std::move(inertias);
  return out;
}

std::vector<int> predict(const ClusterModel& model, const SeriesMatrix& series,
                         const DistanceSpec& spec)
{
  if (series.cols() != model.centroids.cols())
    throw LengthMismatchError("series length differs from centroid length");
  return assign(series, model.centroids, spec).labels;
}

} // namespace tscl

#pragma once

#include "tscl/tsdata.hpp"

#include <random>
#include <vector>

namespace testing {

inline tscl::TimeSeries gaussian(std::mt19937_64& rng, Eigen::Index m)
{
  std::normal_distribution<double> g(0.0, 1.0);
  tscl::TimeSeries x(m);
  for (Eigen::Index i = 0; i < m; ++i) x(i) = g(rng);
  return x;
}

inline tscl::TimeSeries znormal(std::mt19937_64& rng, Eigen::Index m) { return tscl::z_normalize(gaussian(rng, m)); }

inline tscl::SeriesMatrix znormal_rows(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m)
{
  tscl::SeriesMatrix out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) out.row(r) = znormal(rng, m).transpose();
  return out;
}

inline std::vector<int> labels(std::mt19937_64& rng, int n, int k)
{
  std::uniform_int_distribution<int> u(0, k - 1);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (auto& v : out) v = u(rng);
  return out;
}

} // namespace testing

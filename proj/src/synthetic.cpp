#include "tscl/synthetic.hpp"

#include "tscl/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tscl {

TimeSeries shape_template(ShapeKind kind, Eigen::Index length)
{
  TimeSeries out(length);
  const double denom = static_cast<double>(std::max<Eigen::Index>(1, length - 1));
  for (Eigen::Index i = 0; i < length; ++i)
  {
    const double t = static_cast<double>(i) / denom;
    switch (kind)
    {
    case ShapeKind::Sine: out(i) = std::sin(2.0 * std::numbers::pi * t); break;
    case ShapeKind::Ramp: out(i) = 2.0 * t - 1.0; break;
    case ShapeKind::Bump: out(i) = std::exp(-0.5 * std::pow((t - 0.5) / 0.08, 2)); break;
    case ShapeKind::Square: out(i) = std::fmod(2.0 * t, 1.0) < 0.5 ? 1.0 : -1.0; break;
    case ShapeKind::Sawtooth: out(i) = std::fmod(3.0 * t, 1.0); break;
    }
  }
  return out;
}

LabeledDataset make_shape_dataset(const std::string& name, const std::vector<ShapeKind>& shapes,
                                  int per_class, Eigen::Index length, double noise,
                                  std::uint64_t seed)
{
  if (shapes.empty() || per_class < 1 || length < 2)
    throw ParameterError("synthetic dataset needs shapes, members and length >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  std::uniform_real_distribution<double> offset(-1.0, 1.0), scale(0.5, 2.0);

  const auto n = static_cast<Eigen::Index>(shapes.size()) * per_class;
  SeriesMatrix series(n, length);
  std::vector<int> labels;
  Eigen::Index row = 0;
  // interleave classes so any prefix is balanced
  for (int r = 0; r < per_class; ++r)
    for (std::size_t c = 0; c < shapes.size(); ++c, ++row)
    {
      const TimeSeries base = shape_template(shapes[c], length);
      const double a = scale(rng), b = offset(rng);
      for (Eigen::Index j = 0; j < length; ++j) series(row, j) = b + a * (base(j) + gauss(rng));
      labels.push_back(static_cast<int>(c));
    }
  return LabeledDataset(name, std::move(series), std::move(labels));
}

LabeledDataset make_blobs(const std::string& name, int clusters, int per_class,
                          Eigen::Index length, double gap, double spread, std::uint64_t seed)
{
  if (clusters < 1 || per_class < 1 || length < 1) throw ParameterError("invalid blob parameters");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SeriesMatrix centres(clusters, length);
  for (int c = 0; c < clusters; ++c)
  {
    Eigen::VectorXd dir(length);
    for (Eigen::Index j = 0; j < length; ++j) dir(j) = gauss(rng);
    centres.row(c) = (gap * static_cast<double>(c + 1)) * dir.normalized().transpose();
  }
  SeriesMatrix series(static_cast<Eigen::Index>(clusters) * per_class, length);
  std::vector<int> labels;
  Eigen::Index row = 0;
  for (int r = 0; r < per_class; ++r)
    for (int c = 0; c < clusters; ++c, ++row)
    {
      for (Eigen::Index j = 0; j < length; ++j) series(row, j) = centres(c, j) + spread * gauss(rng);
      labels.push_back(c);
    }
  return LabeledDataset(name, std::move(series), std::move(labels));
}

std::vector<LabeledDataset> synthetic_suite(int per_class, Eigen::Index length, std::uint64_t seed)
{
  using enum ShapeKind;
  return {
      make_shape_dataset("SyntheticShapesA", {Sine, Ramp, Bump}, per_class, length, 0.01, seed + 1),
      make_shape_dataset("SyntheticShapesB", {Bump, Square, Ramp}, per_class, length, 0.01, seed + 2),
      make_shape_dataset("SyntheticShapesC", {Sine, Square, Sawtooth}, per_class, length, 0.01,
                         seed + 3),
  };
}

void write_synthetic_archive(const std::filesystem::path& dir, int per_class, Eigen::Index length,
                             std::uint64_t seed)
{
  for (const auto& data : synthetic_suite(per_class, length, seed))
  {
    std::vector<Eigen::Index> train_rows, test_rows;
    for (Eigen::Index i = 0; i < data.size(); ++i) (i / 3 % 2 == 0 ? train_rows : test_rows).push_back(i);
    auto subset = [&](const std::vector<Eigen::Index>& rows) {
      std::vector<int> labels;
      for (auto r : rows) labels.push_back(data.labels()[static_cast<std::size_t>(r)]);
      return LabeledDataset(data.name(), data.series()(rows, Eigen::all), std::move(labels),
                            data.class_names());
    };
    const auto folder = dir / data.name();
    std::filesystem::create_directories(folder);
    write_ucr_file(subset(train_rows), folder / (data.name() + "_TRAIN.tsv"));
    write_ucr_file(subset(test_rows), folder / (data.name() + "_TEST.tsv"));
  }
}

} // namespace tscl

#pragma once

#include "tscl/tsdata.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tscl {

enum class ShapeKind { Sine, Ramp, Bump, Square, Sawtooth };

/// Noise-free template of a shape over `length` points.
TimeSeries shape_template(ShapeKind kind, Eigen::Index length);

/// One class per shape; each series is a randomly offset and rescaled copy
/// of its template plus Gaussian noise with standard deviation `noise`
/// (relative to the template's unit scale).
LabeledDataset make_shape_dataset(const std::string& name, const std::vector<ShapeKind>& shapes,
                                  int per_class, Eigen::Index length, double noise,
                                  std::uint64_t seed);

/// Isotropic Gaussian blobs: class c is centred at `gap * c` along a random
/// direction mix, with per-coordinate standard deviation `spread`.
LabeledDataset make_blobs(const std::string& name, int clusters, int per_class,
                          Eigen::Index length, double gap, double spread, std::uint64_t seed);

/// The three well-separated shape datasets used by the benchmark checks.
std::vector<LabeledDataset> synthetic_suite(int per_class, Eigen::Index length,
                                            std::uint64_t seed);

/// Writes each suite dataset as <dir>/<name>/<name>_TRAIN.tsv and _TEST.tsv
/// (rows alternate between the two files).
void write_synthetic_archive(const std::filesystem::path& dir, int per_class,
                             Eigen::Index length, std::uint64_t seed);

} // namespace tscl

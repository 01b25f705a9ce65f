#pragma once

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tscl {

/// One univariate series. Kernels accept any Eigen vector expression; this
/// is the owning type used where a series is stored.
using TimeSeries = Eigen::VectorXd;

/// n series of length m, one per row. Row-major so each series is contiguous.
using SeriesMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class SplitMode { Combined, TrainTest };

struct SplitSpec
{
  SplitMode mode = SplitMode::Combined;
};

std::string to_string(SplitMode mode);
SplitMode parse_split_mode(const std::string& text);

/// Equal-length series with optional dense integer labels 0..c-1.
///
/// `class_names` keeps the original label tokens so that datasets loaded
/// from different files can be merged on a common alphabet and written back
/// unchanged.
class LabeledDataset
{
public:
  LabeledDataset() = default;

  /// Throws FormatError on empty/non-finite input or inconsistent labels.
  LabeledDataset(std::string name, SeriesMatrix series,
                 std::optional<std::vector<int>> labels = std::nullopt,
                 std::vector<std::string> class_names = {});

  const std::string& name() const { return name_; }
  Eigen::Index size() const { return series_.rows(); }
  Eigen::Index length() const { return series_.cols(); }

  const SeriesMatrix& series() const { return series_; }
  auto row(Eigen::Index i) const { return series_.row(i); }

  bool has_labels() const { return labels_.has_value(); }
  /// Throws FormatError when the dataset is unlabelled.
  const std::vector<int>& labels() const;
  const std::vector<std::string>& class_names() const { return class_names_; }
  int num_classes() const { return static_cast<int>(class_names_.size()); }

private:
  std::string name_;
  SeriesMatrix series_;
  std::optional<std::vector<int>> labels_;
  std::vector<std::string> class_names_;
};

/// Reads either UCR dialect: delimiter-separated "label v1 ... vm" rows (tab,
/// comma or space) or the '@'-header format with "v1,...,vm:label" rows.
/// The dialect is detected from the first non-blank, non-comment line.
LabeledDataset load_ucr_file(const std::filesystem::path& path);

/// Parses file contents; `source` is only used in error messages.
LabeledDataset parse_ucr_text(const std::string& text,
                              const std::string& name,
                              const std::string& source = "<memory>");

/// Writes the tab-separated dialect with round-trippable values.
void write_ucr_file(const LabeledDataset& data,
                    const std::filesystem::path& path);

/// Zero mean, unit population standard deviation; constant input maps to
/// the all-zeros series.
template <typename Derived>
TimeSeries z_normalize(const Eigen::MatrixBase<Derived>& x)
{
  EIGEN_STATIC_ASSERT_VECTOR_ONLY(Derived)
  TimeSeries v = x;
  const double mean = v.mean();
  v.array() -= mean;
  const double sigma = std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
  if (sigma == 0.0) return TimeSeries::Zero(v.size());
  return v / sigma;
}

/// Per-series z-normalisation of every row.
LabeledDataset z_normalize(const LabeledDataset& data);

/// combined: fit = eval = train rows followed by test rows.
/// train-test: fit = train, eval = test.
/// Test labels are re-expressed over the train alphabet (new classes
/// appended) so both sets agree on class ids.
std::pair<LabeledDataset, LabeledDataset>
apply_split(const LabeledDataset& train, const LabeledDataset& test,
            SplitSpec spec);

} // namespace tscl

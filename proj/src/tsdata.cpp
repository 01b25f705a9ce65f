#include "tscl/tsdata.hpp"

#include "tscl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace tscl {

std::string to_string(SplitMode mode)
{
  return mode == SplitMode::Combined ? "combined" : "train-test";
}

SplitMode parse_split_mode(const std::string& text)
{
  if (text == "combined") return SplitMode::Combined;
  if (text == "train-test") return SplitMode::TrainTest;
  throw ParameterError("unknown split mode '" + text + "'");
}

LabeledDataset::LabeledDataset(std::string name, SeriesMatrix series,
                               std::optional<std::vector<int>> labels,
                               std::vector<std::string> class_names)
    : name_(std::move(name)), series_(std::move(series)),
      labels_(std::move(labels)), class_names_(std::move(class_names))
{
  if (series_.rows() == 0 || series_.cols() == 0)
    throw FormatError("dataset '" + name_ + "' has no series");
  if (!series_.allFinite())
    throw FormatError("dataset '" + name_ + "' contains non-finite values");
  if (!labels_) return;

  if (static_cast<Eigen::Index>(labels_->size()) != series_.rows())
    throw FormatError("dataset '" + name_ + "': label count differs from series count");
  const int max_label = *std::max_element(labels_->begin(), labels_->end());
  if (*std::min_element(labels_->begin(), labels_->end()) < 0)
    throw FormatError("dataset '" + name_ + "': negative label");
  if (class_names_.empty())
    for (int c = 0; c <= max_label; ++c) class_names_.push_back(std::to_string(c));
  if (max_label >= static_cast<int>(class_names_.size()))
    throw FormatError("dataset '" + name_ + "': label outside class alphabet");
}

const std::vector<int>& LabeledDataset::labels() const
{
  if (!labels_) throw FormatError("dataset '" + name_ + "' is unlabelled");
  return *labels_;
}

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size())
  {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ',' && line[j] != '\t' && line[j] != ' ') ++j;
    out.push_back(line.substr(i, j - i));
    // a comma (optionally surrounded by blanks) terminates the field
    while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
    if (j < line.size() && line[j] == ',') ++j;
    i = j;
  }
  return out;
}

double parse_value(std::string_view token, const std::string& source, std::size_t line_no)
{
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    throw ParseError(source + ":" + std::to_string(line_no) + ": non-numeric value '" +
                     std::string(token) + "'");
  if (!std::isfinite(value))
    throw ParseError(source + ":" + std::to_string(line_no) + ": non-finite value '" +
                     std::string(token) + "'");
  return value;
}

struct RawRows
{
  std::vector<std::vector<double>> values;
  std::vector<std::string> labels;
};

class LabelRemap
{
public:
  int operator()(const std::string& token)
  {
    const auto [it, inserted] = ids_.try_emplace(token, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(token);
    return it->second;
  }
  std::vector<std::string> names() const { return names_; }

private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
};

} // namespace

LabeledDataset parse_ucr_text(const std::string& text, const std::string& name,
                              const std::string& source)
{
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_dialect = false;
  bool dialect_known = false;
  bool in_data = false;
  RawRows rows;
  std::vector<std::size_t> row_lines;

  while (std::getline(in, line))
  {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    if (!dialect_known)
    {
      header_dialect = body.front() == '@';
      dialect_known = true;
    }

    if (header_dialect)
    {
      if (body.front() == '@')
      {
        std::string lower(body);
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (lower.rfind("@data", 0) == 0) in_data = true;
        continue;
      }
      if (!in_data)
        throw FormatError(source + ":" + std::to_string(line_no) + ": data row before @data");
      const auto colon = body.rfind(':');
      if (colon == std::string_view::npos)
        throw FormatError(source + ":" + std::to_string(line_no) + ": row has no ':label' suffix");
      std::vector<double> values;
      for (auto tok : split_fields(body.substr(0, colon)))
        values.push_back(parse_value(tok, source, line_no));
      rows.values.push_back(std::move(values));
      rows.labels.emplace_back(trim(body.substr(colon + 1)));
    }
    else
    {
      const auto fields = split_fields(body);
      if (fields.size() < 2)
        throw FormatError(source + ":" + std::to_string(line_no) + ": row has no values");
      // label stays a text token so "1" and "1.0" remain distinct classes
      std::vector<double> values;
      values.reserve(fields.size() - 1);
      for (std::size_t f = 1; f < fields.size(); ++f)
        values.push_back(parse_value(fields[f], source, line_no));
      rows.values.push_back(std::move(values));
      rows.labels.emplace_back(fields.front());
    }
    row_lines.push_back(line_no);
  }

  if (rows.values.empty()) throw FormatError(source + ": no data rows");

  const std::size_t m = rows.values.front().size();
  if (m == 0) throw FormatError(source + ":" + std::to_string(row_lines.front()) + ": empty series");
  SeriesMatrix series(static_cast<Eigen::Index>(rows.values.size()), static_cast<Eigen::Index>(m));
  LabelRemap remap;
  std::vector<int> labels;
  labels.reserve(rows.values.size());
  for (std::size_t r = 0; r < rows.values.size(); ++r)
  {
    if (rows.values[r].size() != m)
      throw FormatError(source + ":" + std::to_string(row_lines[r]) + ": ragged row (" +
                        std::to_string(rows.values[r].size()) + " values, expected " +
                        std::to_string(m) + ")");
    for (std::size_t c = 0; c < m; ++c)
      series(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows.values[r][c];
    labels.push_back(remap(rows.labels[r]));
  }
  return LabeledDataset(name, std::move(series), std::move(labels), remap.names());
}

LabeledDataset load_ucr_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_ucr_text(buffer.str(), path.stem().string(), path.string());
}

void write_ucr_file(const LabeledDataset& data, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  char buf[32];
  for (Eigen::Index i = 0; i < data.size(); ++i)
  {
    out << (data.has_labels() ? data.class_names()[data.labels()[i]] : std::string("0"));
    for (Eigen::Index j = 0; j < data.length(); ++j)
    {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), data.series()(i, j));
      out << '\t' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

LabeledDataset z_normalize(const LabeledDataset& data)
{
  SeriesMatrix out(data.size(), data.length());
  for (Eigen::Index i = 0; i < data.size(); ++i)
    out.row(i) = z_normalize(data.row(i)).transpose();
  return LabeledDataset(data.name(), std::move(out),
                        data.has_labels() ? std::optional(data.labels()) : std::nullopt,
                        data.class_names());
}

std::pair<LabeledDataset, LabeledDataset>
apply_split(const LabeledDataset& train, const LabeledDataset& test, SplitSpec spec)
{
  if (train.length() != test.length())
    throw LengthMismatchError("train series length " + std::to_string(train.length()) +
                              " differs from test length " + std::to_string(test.length()));
  if (train.has_labels() != test.has_labels())
    throw FormatError("train and test must both be labelled or both unlabelled");

  std::optional<std::vector<int>> test_labels;
  std::vector<std::string> alphabet = train.class_names();
  if (test.has_labels())
  {
    std::unordered_map<std::string, int> ids;
    for (std::size_t c = 0; c < alphabet.size(); ++c) ids.emplace(alphabet[c], static_cast<int>(c));
    std::vector<int> remapped;
    remapped.reserve(test.labels().size());
    for (int label : test.labels())
    {
      const auto& token = test.class_names()[label];
      auto [it, inserted] = ids.try_emplace(token, static_cast<int>(alphabet.size()));
      if (inserted) alphabet.push_back(token);
      remapped.push_back(it->second);
    }
    test_labels = std::move(remapped);
  }

  const std::optional<std::vector<int>> train_labels =
      train.has_labels() ? std::optional(train.labels()) : std::nullopt;

  if (spec.mode == SplitMode::TrainTest)
  {
    LabeledDataset fit(train.name(), train.series(), train_labels, alphabet);
    LabeledDataset eval(test.name(), test.series(), test_labels, alphabet);
    return {std::move(fit), std::move(eval)};
  }

  SeriesMatrix joined(train.size() + test.size(), train.length());
  joined << train.series(), test.series();
  std::optional<std::vector<int>> labels;
  if (train_labels)
  {
    labels = *train_labels;
    labels->insert(labels->end(), test_labels->begin(), test_labels->end());
  }
  LabeledDataset combined(train.name(), std::move(joined), std::move(labels), alphabet);
  return {combined, combined};
}

} // namespace tscl

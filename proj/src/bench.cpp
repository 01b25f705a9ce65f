#include "tscl/bench.hpp"

#include "tscl/errors.hpp"
#include "tscl/parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tscl {

const std::vector<AlgorithmPreset>& algorithm_presets()
{
  static const std::vector<AlgorithmPreset> presets = {
      {"k-means", SquaredEuclidean{}, {AveragingKind::Mean}},
      {"k-means-dtw", Dtw{1.0}, {AveragingKind::Mean}},
      {"k-means-msm", Msm{1.0}, {AveragingKind::Mean}},
      {"k-shape", Sbd{}, {AveragingKind::ShapeExtraction}},
      {"k-means-dba", Dtw{1.0}, {AveragingKind::Dba, 30, 1e-6}},
      {"k-sc", Ksc{}, {AveragingKind::KscAverage}},
      {"k-means-soft-dba", SoftDtw{1.0}, {AveragingKind::SoftDba, 30, 1e-6}},
  };
  return presets;
}

const AlgorithmPreset& algorithm_preset(const std::string& name)
{
  for (const auto& p : algorithm_presets())
    if (p.name == name) return p;
  throw ParameterError("unknown algorithm '" + name + "'");
}

KMeansConfig preset_config(const AlgorithmPreset& preset, int k, std::uint64_t seed)
{
  KMeansConfig config;
  config.k = k;
  config.distance = preset.distance;
  config.averaging = preset.averaging;
  config.seed = seed;
  return config;
}

std::string to_string(RunStatus status)
{
  switch (status)
  {
  case RunStatus::Ok: return "ok";
  case RunStatus::Timeout: return "timeout";
  case RunStatus::Error: return "error";
  }
  return "error";
}

RunStatus parse_run_status(const std::string& text)
{
  if (text == "ok") return RunStatus::Ok;
  if (text == "timeout") return RunStatus::Timeout;
  if (text == "error") return RunStatus::Error;
  throw FormatError("unknown run status '" + text + "'");
}

namespace {

const std::vector<std::string> kSuffixes = {".tsv", ".ts", ".txt", ".csv", ""};

std::optional<std::filesystem::path> find_split_file(const std::filesystem::path& dir,
                                                     const std::string& stem)
{
  for (const auto& suffix : kSuffixes)
  {
    const auto candidate = dir / (stem + suffix);
    if (std::filesystem::is_regular_file(candidate)) return candidate;
  }
  return std::nullopt;
}

std::uint64_t fnv1a(const std::string& text)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text)
  {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_real(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

} // namespace

std::pair<std::filesystem::path, std::filesystem::path>
locate_dataset(const std::filesystem::path& data_dir, const std::string& name)
{
  for (const auto& dir : {data_dir / name, data_dir})
  {
    auto train = find_split_file(dir, name + "_TRAIN");
    auto test = find_split_file(dir, name + "_TEST");
    if (train && test) return {*train, *test};
  }
  throw FormatError("no train/test files for dataset '" + name + "' under '" + data_dir.string() + "'");
}

std::vector<std::string> discover_datasets(const std::filesystem::path& data_dir)
{
  std::set<std::string> names;
  if (!std::filesystem::is_directory(data_dir))
    throw FormatError("data directory '" + data_dir.string() + "' does not exist");
  for (const auto& entry : std::filesystem::directory_iterator(data_dir))
  {
    if (entry.is_directory())
    {
      const auto name = entry.path().filename().string();
      if (find_split_file(entry.path(), name + "_TRAIN") && find_split_file(entry.path(), name + "_TEST"))
        names.insert(name);
    }
    else if (entry.is_regular_file())
    {
      const auto stem = entry.path().stem().string();
      const auto pos = stem.rfind("_TRAIN");
      if (pos != std::string::npos && pos + 6 == stem.size() &&
          find_split_file(data_dir, stem.substr(0, pos) + "_TEST"))
        names.insert(stem.substr(0, pos));
    }
  }
  return {names.begin(), names.end()};
}

std::uint64_t run_seed(std::uint64_t seed, const std::string& dataset, const std::string& algorithm)
{
  return derive_seed(derive_seed(seed, fnv1a(dataset)), fnv1a(algorithm));
}

RunRecord run_one(const LabeledDataset& fit_set, const LabeledDataset& eval_set,
                  const AlgorithmPreset& preset, const BenchConfig& config)
{
  RunRecord rec;
  rec.dataset = fit_set.name();
  rec.algorithm = preset.name;
  rec.seed = config.seed;
  rec.split = config.split;

  KMeansConfig kc = preset_config(preset, fit_set.num_classes(),
                                  run_seed(config.seed, rec.dataset, rec.algorithm));
  kc.n_restarts = config.restarts;
  kc.max_iters = config.max_iters;
  kc.tol = config.tol;

  std::optional<std::chrono::steady_clock::time_point> deadline;
  const auto start = std::chrono::steady_clock::now();
  if (config.timeout_s > 0.0)
    deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(config.timeout_s));
  auto elapsed = [&] {
    return config.record_timing
               ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
               : 0.0;
  };

  try
  {
    const ClusterModel model = fit(fit_set.series(), kc, deadline);
    rec.fit_time_s = elapsed();
    const std::vector<int> predicted = predict(model, eval_set.series(), kc.distance);
    rec.scores = evaluate(eval_set.labels(), predicted);
    rec.n_iters = model.iterations_run;
    rec.inertia = model.inertia;
    rec.status = RunStatus::Ok;
  }
  catch (const TimeoutError& e)
  {
    rec.fit_time_s = elapsed();
    rec.status = RunStatus::Timeout;
    rec.message = e.what();
  }
  catch (const std::exception& e)
  {
    rec.fit_time_s = elapsed();
    rec.status = RunStatus::Error;
    rec.message = e.what();
  }
  return rec;
}

std::vector<RunRecord> run_experiment(const BenchConfig& config)
{
  const std::vector<std::string> datasets =
      config.datasets.empty() ? discover_datasets(config.data_dir) : config.datasets;
  std::vector<std::string> algorithms = config.algorithms;
  if (algorithms.empty())
    for (const auto& p : algorithm_presets()) algorithms.push_back(p.name);
  for (const auto& a : algorithms) algorithm_preset(a);

  std::vector<std::pair<std::string, std::string>> jobs;
  for (const auto& d : datasets)
    for (const auto& a : algorithms) jobs.emplace_back(d, a);

  std::vector<RunRecord> records(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
    const auto& [dataset, algorithm] = jobs[j];
    try
    {
      const auto [train_path, test_path] = locate_dataset(config.data_dir, dataset);
      const LabeledDataset train = z_normalize(load_ucr_file(train_path));
      const LabeledDataset test = z_normalize(load_ucr_file(test_path));
      auto [fit_set, eval_set] = apply_split(train, test, {config.split});
      fit_set = LabeledDataset(dataset, fit_set.series(), fit_set.labels(), fit_set.class_names());
      records[j] = run_one(fit_set, eval_set, algorithm_preset(algorithm), config);
    }
    catch (const std::exception& e)
    {
      RunRecord rec;
      rec.dataset = dataset;
      rec.algorithm = algorithm;
      rec.seed = config.seed;
      rec.split = config.split;
      rec.status = RunStatus::Error;
      rec.message = e.what();
      records[j] = std::move(rec);
    }
  });

  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.dataset, a.algorithm) < std::tie(b.dataset, b.algorithm);
  });
  return records;
}

std::string format_results(std::vector<RunRecord> records)
{
  if (records.empty()) throw ParameterError("no records to write");
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.dataset, a.algorithm) < std::tie(b.dataset, b.algorithm);
  });
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& r : records)
  {
    out << r.dataset << ',' << r.algorithm << ',' << r.seed << ',' << to_string(r.split) << ',';
    const bool ok = r.status == RunStatus::Ok && r.scores;
    if (ok)
    {
      const ScoreSet& s = *r.scores;
      for (double v : {s.clacc, s.ri, s.ari, s.mi, s.nmi, s.ami}) out << format_real(v) << ',';
    }
    else
      out << ",,,,,,";
    out << format_real(r.fit_time_s) << ',';
    if (ok)
      out << r.n_iters << ',' << format_real(r.inertia) << ',';
    else
      out << ",,";
    out << to_string(r.status) << '\n';
  }
  return out.str();
}

void write_results(std::vector<RunRecord> records, const std::filesystem::path& path)
{
  const std::string text = format_results(std::move(records));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

std::vector<RunRecord> parse_results(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) throw FormatError("unexpected results header");
  std::vector<RunRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 14)
      throw FormatError("results line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                        " fields");
    try
    {
      RunRecord r;
      r.dataset = f[0];
      r.algorithm = f[1];
      r.seed = std::stoull(f[2]);
      r.split = parse_split_mode(f[3]);
      r.status = parse_run_status(f[13]);
      r.fit_time_s = f[10].empty() ? 0.0 : std::stod(f[10]);
      if (r.status == RunStatus::Ok)
      {
        r.scores = ScoreSet{std::stod(f[4]), std::stod(f[5]), std::stod(f[6]),
                            std::stod(f[7]), std::stod(f[8]), std::stod(f[9])};
        r.n_iters = std::stoi(f[11]);
        r.inertia = std::stod(f[12]);
      }
      records.push_back(std::move(r));
    }
    catch (const std::logic_error&)
    {
      throw ParseError("results line " + std::to_string(line_no) + ": malformed value");
    }
  }
  return records;
}

std::vector<RunRecord> read_results(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_results(buffer.str());
}

double metric_value(const ScoreSet& s, const std::string& metric)
{
  if (metric == "clacc") return s.clacc;
  if (metric == "ri") return s.ri;
  if (metric == "ari") return s.ari;
  if (metric == "mi") return s.mi;
  if (metric == "nmi") return s.nmi;
  if (metric == "ami") return s.ami;
  throw ParameterError("unknown metric '" + metric + "'");
}

SummaryReport summarize(const std::vector<RunRecord>& records, const std::string& metric,
                        double alpha)
{
  SummaryReport report;
  report.metric = metric;

  std::set<std::string> algorithm_set, dataset_set;
  std::map<std::pair<std::string, std::string>, std::pair<double, int>> cells;
  for (const auto& r : records)
  {
    algorithm_set.insert(r.algorithm);
    dataset_set.insert(r.dataset);
    if (r.status != RunStatus::Ok || !r.scores) continue;
    auto& cell = cells[{r.dataset, r.algorithm}];
    cell.first += metric_value(*r.scores, metric);
    cell.second += 1;
  }
  report.algorithms.assign(algorithm_set.begin(), algorithm_set.end());
  if (report.algorithms.empty()) throw ParameterError("no records to summarise");

  std::vector<std::string> kept;
  for (const auto& d : dataset_set)
  {
    const bool complete = std::all_of(report.algorithms.begin(), report.algorithms.end(),
                                      [&](const std::string& a) { return cells.count({d, a}) > 0; });
    (complete ? kept : report.excluded_datasets).push_back(d);
  }
  if (kept.empty()) throw ParameterError("no dataset has a completed run for every algorithm");

  ScoreTable& table = report.table;
  table.datasets = kept;
  table.algorithms = report.algorithms;
  table.scores.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(report.algorithms.size()));
  for (std::size_t d = 0; d < kept.size(); ++d)
    for (std::size_t a = 0; a < report.algorithms.size(); ++a)
    {
      const auto& cell = cells.at({kept[d], report.algorithms[a]});
      table.scores(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(a)) = cell.first / cell.second;
    }

  report.rank_table = rank_matrix(table);
  const Eigen::VectorXd avg = report.rank_table.colwise().mean().transpose();
  const Eigen::VectorXd means = table.scores.colwise().mean().transpose();
  for (std::size_t a = 0; a < report.algorithms.size(); ++a)
  {
    report.means[report.algorithms[a]] = means(static_cast<Eigen::Index>(a));
    report.ranks[report.algorithms[a]] = avg(static_cast<Eigen::Index>(a));
  }

  if (report.algorithms.size() == 1)
  {
    report.cliques = {report.algorithms};
    return report;
  }
  CliqueReport cliques = holm_cliques(table, alpha);
  report.cliques = std::move(cliques.cliques);
  report.warnings = std::move(cliques.warnings);
  return report;
}

std::string summary_json(const SummaryReport& report)
{
  nlohmann::ordered_json j;
  j["metric"] = report.metric;
  j["means"] = report.means;
  j["ranks"] = report.ranks;
  j["cliques"] = report.cliques;
  j["excluded_datasets"] = report.excluded_datasets;
  return j.dump(2);
}

} // namespace tscl

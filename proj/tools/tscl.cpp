#include "tscl/bench.hpp"
#include "tscl/errors.hpp"
#include "tscl/selftest.hpp"
#include "tscl/synthetic.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

std::vector<std::string> split_list(const std::string& text)
{
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Lloyd's-style time series clustering benchmark"};
  app.require_subcommand(1);

  tscl::BenchConfig bench;
  std::string datasets, algorithms, split = "combined", out_path, timing = "wall";
  auto* run = app.add_subcommand("run", "Cluster every dataset with every algorithm and write a CSV");
  run->add_option("--data-dir", bench.data_dir, "Directory of <name>/<name>_TRAIN|_TEST files")->required();
  run->add_option("--datasets", datasets, "Comma-separated dataset names (default: all found)");
  run->add_option("--algorithms", algorithms, "Comma-separated presets (default: all seven)");
  run->add_option("--split", split, "combined or train-test")
      ->check(CLI::IsMember({"combined", "train-test"}));
  run->add_option("--seed", bench.seed, "Global seed");
  run->add_option("--restarts", bench.restarts, "Extra restarts per fit")->check(CLI::NonNegativeNumber);
  run->add_option("--max-iters", bench.max_iters, "Lloyd iteration cap")->check(CLI::PositiveNumber);
  run->add_option("--tol", bench.tol, "Inertia change tolerance")->check(CLI::NonNegativeNumber);
  run->add_option("--timeout-s", bench.timeout_s, "Per-run budget in seconds, 0 disables")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--threads", bench.threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_path, "Results CSV (default: stdout)");
  run->add_option("--timing", timing, "wall records fit time, off writes 0")
      ->check(CLI::IsMember({"wall", "off"}));

  std::string metric = "ari", in_path, summary_path;
  double alpha = 0.05;
  auto* summarize = app.add_subcommand("summarize", "Means, average ranks and Holm cliques from a results CSV");
  summarize->add_option("--metric", metric, "clacc, ri, ari, mi, nmi or ami")
      ->check(CLI::IsMember({"clacc", "ri", "ari", "mi", "nmi", "ami"}));
  summarize->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  summarize->add_option("--in", in_path, "Results CSV")->required();
  summarize->add_option("--out", summary_path, "Summary JSON (default: stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the randomised property checks");

  std::string gen_dir;
  int per_class = 20;
  int length = 32;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Write the synthetic shape archive");
  generate->add_option("--out", gen_dir, "Output directory")->required();
  generate->add_option("--per-class", per_class, "Series per class")->check(CLI::PositiveNumber);
  generate->add_option("--length", length, "Series length")->check(CLI::Range(2, 100000));
  generate->add_option("--seed", gen_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (run->parsed())
    {
      bench.datasets = split_list(datasets);
      bench.algorithms = split_list(algorithms);
      bench.split = tscl::parse_split_mode(split);
      bench.record_timing = timing == "wall";
      const auto records = tscl::run_experiment(bench);
      for (const auto& r : records)
        if (r.status != tscl::RunStatus::Ok)
          std::cerr << r.dataset << '/' << r.algorithm << ": " << tscl::to_string(r.status) << ": "
                    << r.message << '\n';
      if (out_path.empty())
        std::cout << tscl::format_results(records);
      else
        tscl::write_results(records, out_path);
    }
    else if (summarize->parsed())
    {
      const auto report = tscl::summarize(tscl::read_results(in_path), metric, alpha);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
      if (!report.excluded_datasets.empty())
        std::cerr << report.excluded_datasets.size() << " dataset(s) excluded\n";
      const std::string json = tscl::summary_json(report) + "\n";
      if (summary_path.empty())
        std::cout << json;
      else
      {
        std::ofstream out(summary_path, std::ios::binary);
        if (!out) throw tscl::FormatError("cannot write '" + summary_path + "'");
        out << json;
      }
    }
    else if (selftest->parsed())
    {
      return tscl::run_selftest(std::cout) == 0 ? 0 : 1;
    }
    else if (generate->parsed())
    {
      tscl::write_synthetic_archive(gen_dir, per_class, length, gen_seed);
    }
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

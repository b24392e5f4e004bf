// Experiment runner CLI: executes the built-in benchmark setups (or a config
// file), writes records/summary/trace files, and re-summarizes saved records.

#include "rmopt/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rmopt;

bool is_setup_name(const std::string& s) {
  const auto setups = builtin_setups();
  return std::find(setups.begin(), setups.end(), s) != setups.end();
}

const ExperimentSpec* find_builtin(const std::vector<ExperimentSpec>& specs,
                                   const std::string& name) {
  for (const auto& s : specs)
    if (s.name == name) return &s;
  return nullptr;
}

int cmd_run(const std::string& target, int jobs, const std::string& out_dir,
            long long seed_override, long long runs_override, bool desk,
            const std::string& algo_filter) {
  std::vector<ExperimentSpec> specs;
  if (is_setup_name(target)) {
    specs = specs_for_setup(target, desk);
  } else if (const ExperimentSpec* s = find_builtin(builtin_specs(desk), target)) {
    specs = {*s};
  } else if (std::filesystem::exists(target)) {
    specs = {parse_config_file(target)};
  } else {
    throw ConfigError("'" + target + "' is neither a built-in spec nor a config file");
  }

  if (!algo_filter.empty()) {
    const AlgoKind kind = algo_from_string(algo_filter);
    std::erase_if(specs, [&](const ExperimentSpec& s) { return s.algorithm != kind; });
    if (specs.empty()) throw ConfigError("no spec matches --algo " + algo_filter);
  }
  for (auto& s : specs) {
    if (seed_override >= 0) s.seed_base = static_cast<std::uint64_t>(seed_override);
    if (runs_override > 0) s.runs = runs_override;
    s.validate();
  }

  std::vector<RunRecord> all;
  for (const auto& spec : specs) {
    std::cerr << "running " << spec.name << " (" << spec.runs << " runs, budget "
              << spec.budget << ")...\n";
    const auto records = run_experiment(spec, jobs);
    all.insert(all.end(), records.begin(), records.end());
  }

  const std::string records_path = emit(out_dir, specs, all);
  const SummaryTable table = summarize(specs, all);
  std::cout << format_summary(table, specs.front().objective);
  std::cout << "records: " << records_path << "\n";
  return 0;
}

int cmd_list_specs() {
  std::cout << "setups: ";
  for (const auto& s : builtin_setups()) std::cout << s << ' ';
  std::cout << "\n\nspecs:\n";
  for (const auto& spec : builtin_specs()) {
    std::cout << "  " << spec.name << "  objective=" << spec.objective
              << " algorithm=" << to_string(spec.algorithm) << " runs=" << spec.runs
              << " budget=" << spec.budget << " seed=" << spec.seed_base << "\n";
  }
  return 0;
}

int cmd_summarize(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::vector<ExperimentSpec> specs;
  const auto records = records_from_json(buffer.str(), &specs);
  const SummaryTable table = summarize(specs, records);
  std::cout << format_summary(table, specs.empty() ? "s2" : specs.front().objective);
  std::cout << records.size() << " records\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian manifold optimization benchmark harness"};
  app.require_subcommand(1);

  std::string target, out_dir = "out", algo_filter;
  int jobs = 1;
  long long seed_override = -1, runs_override = 0;
  bool desk = false;

  CLI::App* run = app.add_subcommand("run", "run a built-in spec, setup or config file");
  run->add_option("spec", target, "spec name, setup name or config path")->required();
  run->add_option("--jobs", jobs, "worker threads across runs");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed_override, "override the seed base");
  run->add_option("--runs", runs_override, "override the run count");
  run->add_flag("--desk", desk, "reduced-run presets (50 runs)");
  run->add_option("--algo", algo_filter, "only variants of this algorithm");

  CLI::App* list = app.add_subcommand("list-specs", "list built-in setups and specs");

  std::string records_path;
  CLI::App* summ = app.add_subcommand("summarize", "summarize a records.json file");
  summ->add_option("records", records_path, "path to records.json")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(target, jobs, out_dir, seed_override, runs_override,
                                      desk, algo_filter);
    if (list->parsed()) return cmd_list_specs();
    if (summ->parsed()) return cmd_summarize(records_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const rmopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

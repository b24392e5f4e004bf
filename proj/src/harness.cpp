#include "rmopt/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace rmopt {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(AlgoKind a) {
  switch (a) {
    case AlgoKind::ExtRsdfo: return "ext-rsdfo";
    case AlgoKind::Rcmaes: return "rcmaes";
    case AlgoKind::Rtr: return "rtr";
    case AlgoKind::Rpso: return "rpso";
  }
  return "unknown";
}

AlgoKind algo_from_string(const std::string& s) {
  if (s == "ext-rsdfo") return AlgoKind::ExtRsdfo;
  if (s == "rcmaes") return AlgoKind::Rcmaes;
  if (s == "rtr") return AlgoKind::Rtr;
  if (s == "rpso") return AlgoKind::Rpso;
  throw ConfigError("unknown algorithm '" + s + "'");
}

void ExperimentSpec::validate() const {
  if (name.empty()) throw ConfigError("spec has no name");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (budget < 1) throw ConfigError("budget must be >= 1");
  if (objective != "s2" && objective != "gr24" && objective != "gr25" && objective != "jl")
    throw ConfigError("unknown objective '" + objective + "'");
  if (algorithm == AlgoKind::ExtRsdfo) {
    if (ext.n_random < 1 || ext.n_cull < 1)
      throw ConfigError("n_random and n_cull must be >= 1");
    if (!(ext.epsilon_b > 0.0 && ext.epsilon_b <= 1.0))
      throw ConfigError("epsilon_b must lie in (0, 1]");
    if (ext.mc_samples < 1) throw ConfigError("mc_samples must be >= 1");
    if (initial_centroids < 1) throw ConfigError("initial_centroids must be >= 1");
    if (ext.core == CoreKind::Generic &&
        (ext.core_parents < 1 || ext.core_offspring < 1 ||
         ext.core_offspring > ext.core_parents))
      throw ConfigError("generic core needs 1 <= offspring <= parents");
    if (ext.core == CoreKind::Rcmaes && ext.cma_parents < 4)
      throw ConfigError("rcmaes core needs at least 4 parents");
  }
  if (algorithm == AlgoKind::Rcmaes && cma_m1 < 4)
    throw ConfigError("rcmaes needs m1 >= 4");
  if (algorithm == AlgoKind::Rpso && agents < 1)
    throw ConfigError("rpso needs at least one agent");
}

namespace {

constexpr std::uint64_t kTagInit = 0x1217aa;
constexpr std::uint64_t kTagState = 0xf4a3bb;
constexpr std::uint64_t kTagStep = 0xd7a1cc;

RunRecord run_ext(const ExperimentSpec& spec, const Objective& obj, std::uint64_t seed) {
  Rng init_rng(derive_seed(seed, kTagInit));
  std::vector<ManifoldPoint> initial;
  for (int i = 0; i < spec.initial_centroids; ++i)
    initial.push_back(random_initial(*obj.manifold, init_rng, obj.init_bounds));

  ExtendedRsdfo driver(*obj.manifold, spec.ext, initial, seed);
  SignalingEvaluator eval(obj.fn, spec.budget, spec.ext.sense, obj.success);
  return driver.run(eval);
}

RunRecord run_rcmaes(const ExperimentSpec& spec, const Objective& obj, std::uint64_t seed) {
  Rng init_rng(derive_seed(seed, kTagInit));
  const ManifoldPoint x0 = random_initial(*obj.manifold, init_rng, obj.init_bounds);
  Rng state_rng(derive_seed(seed, kTagState));
  RsdfoState state = make_rsdfo_state(*obj.manifold, x0, state_rng);
  const CmaParams params = CmaParams::defaults(spec.cma_m1, obj.manifold->dim());

  RunRecord record;
  record.algorithm = "rcmaes";
  SignalingEvaluator eval(obj.fn, spec.budget, OptimSense::Minimize, obj.success);
  const ObjectiveFn f = [&eval](const ManifoldPoint& p) { return eval(p); };
  try {
    const long long max_iterations = spec.budget / params.m1 + 8;
    for (long long k = 0; k < max_iterations && !state.terminated; ++k) {
      if (eval.budget_exhausted()) break;
      Rng step_rng(derive_seed(seed, kTagStep, static_cast<std::uint64_t>(k)));
      const double inj = obj.manifold->injectivity_radius(state.mean);
      state = rcmaes_step(*obj.manifold, state, f, params, inj, inj, step_rng);
      record.best_trace.push_back(eval.best_value());
    }
    record.terminated_naturally = state.terminated;
  } catch (const BudgetExhaustedSignal&) {
  } catch (const TargetHitSignal&) {
  }
  record.iterations = state.iteration;
  record.cov_repairs = state.cov_repairs;
  record.sample_fallbacks = state.sample_stats.fallbacks;
  record.best_value = eval.best_value();
  record.best_point = eval.best_point();
  record.evaluations = eval.count();
  record.target_hit = eval.target_hit();
  return record;
}

RunRecord run_rtr(const ExperimentSpec& spec, const Objective& obj, std::uint64_t seed) {
  Rng init_rng(derive_seed(seed, kTagInit));
  const ManifoldPoint x0 = random_initial(*obj.manifold, init_rng, obj.init_bounds);
  RtrState state = make_rtr_state(x0, spec.rtr);

  RunRecord record;
  record.algorithm = "rtr";
  SignalingEvaluator eval(obj.fn, spec.budget, OptimSense::Minimize, obj.success);
  const ObjectiveFn f = [&eval](const ManifoldPoint& p) { return eval(p); };
  try {
    // Each iteration costs at least 1 + 2 dim + 2 dim^2 evaluations, so the
    // budget bounds the loop.
    while (!state.converged) {
      if (eval.budget_exhausted()) break;
      Rng step_rng(derive_seed(seed, kTagStep, static_cast<std::uint64_t>(state.iteration)));
      state = rtr_step(*obj.manifold, state, f, spec.rtr, step_rng);
      record.best_trace.push_back(eval.best_value());
    }
    record.terminated_naturally = state.converged;
  } catch (const BudgetExhaustedSignal&) {
  } catch (const TargetHitSignal&) {
  }
  record.iterations = state.iteration;
  record.best_value = eval.best_value();
  record.best_point = eval.best_point();
  record.evaluations = eval.count();
  record.target_hit = eval.target_hit();
  return record;
}

RunRecord run_rpso(const ExperimentSpec& spec, const Objective& obj, std::uint64_t seed) {
  Rng init_rng(derive_seed(seed, kTagInit));
  std::vector<ManifoldPoint> positions;
  for (int i = 0; i < spec.agents; ++i)
    positions.push_back(random_initial(*obj.manifold, init_rng, obj.init_bounds));

  PsoConfig config;
  config.planned_iterations = std::max<long long>(1, spec.budget / spec.agents - 1);

  RunRecord record;
  record.algorithm = "rpso";
  SignalingEvaluator eval(obj.fn, spec.budget, OptimSense::Minimize, obj.success);
  const ObjectiveFn f = [&eval](const ManifoldPoint& p) { return eval(p); };
  try {
    PsoSwarm swarm = make_swarm(*obj.manifold, positions, f);
    while (!eval.budget_exhausted()) {
      Rng step_rng(derive_seed(seed, kTagStep, static_cast<std::uint64_t>(swarm.iteration)));
      pso_step(*obj.manifold, swarm, f, config, step_rng);
      record.best_trace.push_back(eval.best_value());
      record.iterations = swarm.iteration;
      record.log_failures = swarm.log_failures;
    }
  } catch (const BudgetExhaustedSignal&) {
  } catch (const TargetHitSignal&) {
  }
  record.best_value = eval.best_value();
  record.best_point = eval.best_point();
  record.evaluations = eval.count();
  record.target_hit = eval.target_hit();
  return record;
}

}  // namespace

std::string classify(const Objective& objective, const RunRecord& record) {
  if (objective.id == "jl") {
    if (record.best_point.coords.size() != 3) return "ll";
    const auto& jl = dynamic_cast<const JacobsLadderManifold&>(*objective.manifold);
    const LadderPoint p = jl.decode(record.best_point);
    const bool torus = ladder_torus_optimal(p.torus);
    const bool angles = ladder_angles_optimal(p.theta, p.phi);
    if (torus && angles) return "gg";
    if (torus) return "gl";
    if (angles) return "lg";
    return "ll";
  }
  return objective.success.met(record.best_value) ? "global" : "local";
}

std::vector<std::string> class_labels(const std::string& objective_id) {
  if (objective_id == "jl") return {"ll", "lg", "gl", "gg"};
  return {"local", "global"};
}

RunRecord execute_run(const ExperimentSpec& spec, std::uint64_t seed) {
  const Objective obj = make_objective(spec.objective);
  RunRecord record;
  switch (spec.algorithm) {
    case AlgoKind::ExtRsdfo: record = run_ext(spec, obj, seed); break;
    case AlgoKind::Rcmaes: record = run_rcmaes(spec, obj, seed); break;
    case AlgoKind::Rtr: record = run_rtr(spec, obj, seed); break;
    case AlgoKind::Rpso: record = run_rpso(spec, obj, seed); break;
  }
  record.seed = seed;
  record.spec = spec.name;
  record.objective = spec.objective;
  record.convergence_class = classify(obj, record);
  return record;
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, int jobs) {
  spec.validate();
  std::vector<RunRecord> records(static_cast<std::size_t>(spec.runs));
  const int workers = std::max(1, jobs);
  if (workers == 1) {
    for (long long i = 0; i < spec.runs; ++i)
      records[static_cast<std::size_t>(i)] =
          execute_run(spec, spec.seed_base + static_cast<std::uint64_t>(i));
    return records;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const long long i = next.fetch_add(1);
        if (i >= spec.runs || failed.load()) return;
        try {
          records[static_cast<std::size_t>(i)] =
              execute_run(spec, spec.seed_base + static_cast<std::uint64_t>(i));
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mutex);
          error = e.what();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("run_experiment: " + error);
  return records;
}

SummaryTable summarize(const std::vector<ExperimentSpec>& specs,
                       const std::vector<RunRecord>& records) {
  SummaryTable table;
  for (const auto& spec : specs) {
    SummaryRow row;
    row.spec = spec.name;
    for (const auto& label : class_labels(spec.objective)) row.class_counts[label] = 0;
    double eval_sum = 0.0;
    for (const auto& rec : records) {
      if (rec.spec != spec.name) continue;
      ++row.runs;
      ++row.class_counts[rec.convergence_class];
      eval_sum += static_cast<double>(rec.evaluations);
    }
    row.avg_evaluations = row.runs > 0 ? eval_sum / static_cast<double>(row.runs) : 0.0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_summary(const SummaryTable& table, const std::string& objective_id) {
  const std::vector<std::string> labels = class_labels(objective_id);
  std::ostringstream out;
  out << std::left << std::setw(24) << "spec";
  for (const auto& l : labels) out << std::right << std::setw(9) << l;
  out << std::right << std::setw(14) << "avg evals" << std::setw(7) << "runs" << "\n";
  for (const auto& row : table.rows) {
    out << std::left << std::setw(24) << row.spec;
    for (const auto& l : labels) {
      const auto it = row.class_counts.find(l);
      out << std::right << std::setw(9) << (it == row.class_counts.end() ? 0 : it->second);
    }
    out << std::right << std::setw(14) << std::fixed << std::setprecision(1)
        << row.avg_evaluations << std::setw(7) << row.runs << "\n";
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

namespace {

json point_to_json(const ManifoldPoint& p) {
  json j;
  j["manifold"] = to_string(p.manifold);
  j["coords"] = std::vector<double>(p.coords.data(), p.coords.data() + p.coords.size());
  return j;
}

json spec_to_json(const ExperimentSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["objective"] = spec.objective;
  j["algorithm"] = to_string(spec.algorithm);
  j["runs"] = spec.runs;
  j["budget"] = spec.budget;
  j["seed_base"] = spec.seed_base;
  if (spec.algorithm == AlgoKind::ExtRsdfo) {
    j["n_random"] = spec.ext.n_random;
    j["n_cull"] = spec.ext.n_cull;
    j["epsilon_b"] = spec.ext.epsilon_b;
    j["epsilon0"] = spec.ext.epsilon0;
    j["mc_samples"] = spec.ext.mc_samples;
    j["core"] = spec.ext.core == CoreKind::Generic ? "generic" : "rcmaes";
    j["core_parents"] = spec.ext.core_parents;
    j["core_offspring"] = spec.ext.core_offspring;
    j["cma_parents"] = spec.ext.cma_parents;
    j["initial_centroids"] = spec.initial_centroids;
  } else if (spec.algorithm == AlgoKind::Rcmaes) {
    j["m1"] = spec.cma_m1;
  } else if (spec.algorithm == AlgoKind::Rpso) {
    j["agents"] = spec.agents;
  }
  return j;
}

json record_to_json(const RunRecord& r) {
  json j;
  j["seed"] = r.seed;
  j["spec"] = r.spec;
  j["algorithm"] = r.algorithm;
  j["objective"] = r.objective;
  j["best_value"] = r.best_value;
  j["best_point"] = point_to_json(r.best_point);
  j["evaluations"] = r.evaluations;
  j["iterations"] = r.iterations;
  j["class"] = r.convergence_class;
  j["target_hit"] = r.target_hit;
  j["terminated_naturally"] = r.terminated_naturally;
  j["best_trace"] = r.best_trace;
  j["mixture_fitness_trace"] = r.mixture_fitness_trace;
  j["sample_fallbacks"] = r.sample_fallbacks;
  j["cov_repairs"] = r.cov_repairs;
  j["log_failures"] = r.log_failures;
  j["objective_shift"] = r.objective_shift;
  return j;
}

ManifoldId manifold_id_from_string(const std::string& s) {
  if (s == "sphere") return ManifoldId::Sphere;
  if (s == "grassmann") return ManifoldId::Grassmann;
  if (s == "jacobs-ladder") return ManifoldId::JacobsLadder;
  throw ConfigError("unknown manifold '" + s + "'");
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.spec = j.at("spec").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.objective = j.at("objective").get<std::string>();
  r.best_value = j.at("best_value").get<double>();
  const auto& bp = j.at("best_point");
  r.best_point.manifold = manifold_id_from_string(bp.at("manifold").get<std::string>());
  const auto coords = bp.at("coords").get<std::vector<double>>();
  r.best_point.coords =
      Eigen::Map<const Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()));
  r.evaluations = j.at("evaluations").get<long long>();
  r.iterations = j.at("iterations").get<long long>();
  r.convergence_class = j.at("class").get<std::string>();
  r.target_hit = j.at("target_hit").get<bool>();
  r.terminated_naturally = j.at("terminated_naturally").get<bool>();
  r.best_trace = j.at("best_trace").get<std::vector<double>>();
  r.mixture_fitness_trace = j.at("mixture_fitness_trace").get<std::vector<double>>();
  r.sample_fallbacks = j.at("sample_fallbacks").get<long long>();
  r.cov_repairs = j.at("cov_repairs").get<long long>();
  r.log_failures = j.at("log_failures").get<long long>();
  r.objective_shift = j.at("objective_shift").get<double>();
  return r;
}

}  // namespace

std::string records_to_json(const std::vector<ExperimentSpec>& specs,
                            const std::vector<RunRecord>& records,
                            const std::string& timestamp) {
  json j;
  j["timestamp"] = timestamp;
  j["specs"] = json::array();
  for (const auto& s : specs) j["specs"].push_back(spec_to_json(s));
  j["records"] = json::array();
  for (const auto& r : records) j["records"].push_back(record_to_json(r));
  return j.dump(1);
}

std::vector<RunRecord> records_from_json(const std::string& json_text,
                                         std::vector<ExperimentSpec>* specs) {
  const json j = json::parse(json_text);
  if (specs) {
    specs->clear();
    for (const auto& js : j.at("specs")) {
      ExperimentSpec s;
      s.name = js.at("name").get<std::string>();
      s.objective = js.at("objective").get<std::string>();
      s.algorithm = algo_from_string(js.at("algorithm").get<std::string>());
      s.runs = js.at("runs").get<long long>();
      s.budget = js.at("budget").get<long long>();
      s.seed_base = js.at("seed_base").get<std::uint64_t>();
      specs->push_back(std::move(s));
    }
  }
  std::vector<RunRecord> records;
  for (const auto& jr : j.at("records")) records.push_back(record_from_json(jr));
  return records;
}

std::string emit(const std::string& out_dir, const std::vector<ExperimentSpec>& specs,
                 const std::vector<RunRecord>& records, bool write_traces) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));

  const std::string records_path = (fs::path(out_dir) / "records.json").string();
  {
    std::ofstream out(records_path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot write " + records_path);
    out << records_to_json(specs, records, stamp);
  }

  {
    std::ofstream out((fs::path(out_dir) / "summary.csv").string(), std::ios::binary);
    out << "spec,seed,class,best_value,evaluations,iterations\n";
    for (const auto& r : records) {
      out << r.spec << ',' << r.seed << ',' << r.convergence_class << ','
          << format_double(r.best_value) << ',' << r.evaluations << ',' << r.iterations
          << "\n";
    }
  }

  if (write_traces) {
    for (const auto& r : records) {
      const fs::path dir = fs::path(out_dir) / r.spec;
      fs::create_directories(dir);
      std::ofstream out((dir / ("trace_" + std::to_string(r.seed) + ".csv")).string(),
                        std::ios::binary);
      out << "iteration,best_value\n";
      for (std::size_t i = 0; i < r.best_trace.size(); ++i)
        out << i << ',' << format_double(r.best_trace[i]) << "\n";
    }
  }
  return records_path;
}

namespace {

ExperimentSpec base_spec(const std::string& name, const std::string& objective,
                         AlgoKind algo, long long runs, long long budget) {
  ExperimentSpec s;
  s.name = name;
  s.objective = objective;
  s.algorithm = algo;
  s.runs = runs;
  s.budget = budget;
  s.seed_base = fnv1a(name) % 1000000000ULL;
  return s;
}

void add_setup_specs(std::vector<ExperimentSpec>& out, const std::string& setup,
                     bool desk) {
  const auto desk_runs = [desk](long long paper_runs) {
    return desk ? std::min<long long>(50, paper_runs) : paper_runs;
  };
  if (setup == "s2") {
    const long long runs = desk_runs(200);
    const long long budget = 10000;
    for (const double eb : {1.0, 0.4}) {
      ExperimentSpec s = base_spec(
          eb == 1.0 ? "s2.ext-eb1" : "s2.ext-eb04", "s2", AlgoKind::ExtRsdfo, runs, budget);
      s.ext.n_random = 2;
      s.ext.n_cull = 2;
      s.ext.epsilon_b = eb;
      s.ext.mc_samples = 10;
      s.ext.core_parents = 50;
      s.ext.core_offspring = 10;
      s.initial_centroids = 2;
      out.push_back(std::move(s));
    }
    {
      ExperimentSpec s = base_spec("s2.rcmaes", "s2", AlgoKind::Rcmaes, runs, budget);
      s.cma_m1 = 40;
      out.push_back(std::move(s));
    }
    out.push_back(base_spec("s2.rtr", "s2", AlgoKind::Rtr, runs, budget));
    {
      ExperimentSpec s = base_spec("s2.rpso", "s2", AlgoKind::Rpso, runs, budget);
      s.agents = 20;
      out.push_back(std::move(s));
    }
    return;
  }
  if (setup == "gr24" || setup == "gr25") {
    const bool is24 = setup == "gr24";
    const long long runs = desk_runs(100);
    const long long budget = is24 ? 24000 : 40000;
    for (const double eb : {1.0, 0.5}) {
      ExperimentSpec s =
          base_spec(setup + (eb == 1.0 ? ".ext-eb1" : ".ext-eb05"), setup,
                    AlgoKind::ExtRsdfo, runs, budget);
      s.ext.n_random = 2;
      s.ext.n_cull = 2;
      s.ext.epsilon_b = eb;
      s.ext.mc_samples = is24 ? 40 : 50;
      s.ext.core_parents = is24 ? 120 : 200;
      s.ext.core_offspring = is24 ? 40 : 50;
      s.initial_centroids = 2;
      out.push_back(std::move(s));
    }
    {
      ExperimentSpec s = base_spec(setup + ".rcmaes", setup, AlgoKind::Rcmaes, runs, budget);
      s.cma_m1 = 80;
      out.push_back(std::move(s));
    }
    out.push_back(base_spec(setup + ".rtr", setup, AlgoKind::Rtr, runs, budget));
    {
      ExperimentSpec s = base_spec(setup + ".rpso", setup, AlgoKind::Rpso, runs, budget);
      s.agents = 40;
      out.push_back(std::move(s));
    }
    return;
  }
  if (setup == "jl") {
    const long long runs = desk_runs(100);
    const long long budget = 20000;
    {
      ExperimentSpec s = base_spec("jl.ext-rsdfo", "jl", AlgoKind::ExtRsdfo, runs, budget);
      s.ext.n_random = 6;
      s.ext.n_cull = 3;
      s.ext.epsilon_b = 1.0;
      s.ext.mc_samples = 10;
      s.ext.core_parents = 40;
      s.ext.core_offspring = 10;
      s.initial_centroids = 5;
      out.push_back(std::move(s));
    }
    {
      ExperimentSpec s = base_spec("jl.rcmaes", "jl", AlgoKind::Rcmaes, runs, budget);
      s.cma_m1 = 40;
      out.push_back(std::move(s));
    }
    out.push_back(base_spec("jl.rtr", "jl", AlgoKind::Rtr, runs, budget));
    {
      ExperimentSpec s = base_spec("jl.rpso", "jl", AlgoKind::Rpso, runs, budget);
      s.agents = 40;
      out.push_back(std::move(s));
    }
    return;
  }
  throw ConfigError("unknown setup '" + setup + "'");
}

}  // namespace

std::vector<std::string> builtin_setups() { return {"s2", "gr24", "gr25", "jl"}; }

std::vector<ExperimentSpec> specs_for_setup(const std::string& setup, bool desk) {
  std::vector<ExperimentSpec> out;
  add_setup_specs(out, setup, desk);
  return out;
}

std::vector<ExperimentSpec> builtin_specs(bool desk) {
  std::vector<ExperimentSpec> out;
  for (const auto& setup : builtin_setups()) add_setup_specs(out, setup, desk);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": '" + value + "'");
  }
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text) {
  ExperimentSpec spec;
  spec.name = "custom";
  std::string section = "experiment";
  std::istringstream in(text);
  std::string line;
  bool saw_objective = false;
  while (std::getline(in, line)) {
    const std::string::size_type comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header: " + line);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "experiment" && section != "ext-rsdfo" && section != "rcmaes" &&
          section != "rpso" && section != "rtr")
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    const std::string::size_type eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "experiment") {
      if (key == "name") spec.name = value;
      else if (key == "objective") { spec.objective = value; saw_objective = true; }
      else if (key == "algorithm") spec.algorithm = algo_from_string(value);
      else if (key == "runs") spec.runs = parse_int(key, value);
      else if (key == "budget") spec.budget = parse_int(key, value);
      else if (key == "seed") spec.seed_base = static_cast<std::uint64_t>(parse_int(key, value));
      else throw ConfigError("unknown key '" + key + "' in [experiment]");
    } else if (section == "ext-rsdfo") {
      if (key == "n_random") spec.ext.n_random = static_cast<int>(parse_int(key, value));
      else if (key == "n_cull") spec.ext.n_cull = static_cast<int>(parse_int(key, value));
      else if (key == "epsilon_b") spec.ext.epsilon_b = parse_real(key, value);
      else if (key == "epsilon0") spec.ext.epsilon0 = parse_real(key, value);
      else if (key == "mc_samples") spec.ext.mc_samples = parse_int(key, value);
      else if (key == "core") {
        if (value == "generic") spec.ext.core = CoreKind::Generic;
        else if (value == "rcmaes") spec.ext.core = CoreKind::Rcmaes;
        else throw ConfigError("core must be 'generic' or 'rcmaes'");
      } else if (key == "core_parents") spec.ext.core_parents = static_cast<int>(parse_int(key, value));
      else if (key == "core_offspring") spec.ext.core_offspring = static_cast<int>(parse_int(key, value));
      else if (key == "cma_parents") spec.ext.cma_parents = static_cast<int>(parse_int(key, value));
      else if (key == "initial_centroids") spec.initial_centroids = static_cast<int>(parse_int(key, value));
      else if (key == "tau_a") spec.ext.tau_a = parse_real(key, value);
      else if (key == "tau_b") spec.ext.tau_b = parse_real(key, value);
      else if (key == "tau_floor") spec.ext.tau_floor = parse_real(key, value);
      else throw ConfigError("unknown key '" + key + "' in [ext-rsdfo]");
    } else if (section == "rcmaes") {
      if (key == "m1") spec.cma_m1 = static_cast<int>(parse_int(key, value));
      else throw ConfigError("unknown key '" + key + "' in [rcmaes]");
    } else if (section == "rpso") {
      if (key == "agents") spec.agents = static_cast<int>(parse_int(key, value));
      else throw ConfigError("unknown key '" + key + "' in [rpso]");
    } else if (section == "rtr") {
      if (key == "delta_bar") spec.rtr.delta_bar = parse_real(key, value);
      else if (key == "delta0") spec.rtr.delta0 = parse_real(key, value);
      else if (key == "rho_prime") spec.rtr.rho_prime = parse_real(key, value);
      else throw ConfigError("unknown key '" + key + "' in [rtr]");
    }
  }
  if (!saw_objective) throw ConfigError("config is missing 'objective'");
  spec.validate();
  return spec;
}

ExperimentSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace rmopt

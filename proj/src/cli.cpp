#include "lscsp/cli.hpp"

#include <glob.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <thread>

#include <CLI11.hpp>

#include "lscsp/analysis.hpp"
#include "lscsp/csv.hpp"
#include "lscsp/errors.hpp"
#include "lscsp/generator.hpp"
#include "lscsp/scalarize.hpp"

namespace fs = std::filesystem;

namespace lscsp::cli {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_json(const nlohmann::json &doc, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << doc.dump(2) << '\n';
}

std::uint64_t seed_from_filename(const std::string &path) {
  static const std::regex pattern(R"(seed(\d+))");
  std::smatch match;
  const std::string name = fs::path(path).filename().string();
  if (std::regex_search(name, match, pattern)) return std::stoull(match[1].str());
  return 0;
}

nlohmann::json plan_json(const PlanSolution &plan) {
  return {{"x", plan.x}, {"w", plan.w}, {"z", plan.z}, {"y", plan.y}, {"e", plan.e}};
}

nlohmann::json objectives_json(const Objectives &o) {
  return {{"F1", o.F1}, {"F2", o.F2}, {"g1", o.g1}, {"g2", o.g2}, {"g3", o.g3}, {"g4", o.g4}, {"g5", o.g5}};
}

std::vector<std::string> expand_glob(const std::string &pattern) {
  glob_t matches{};
  std::vector<std::string> out;
  if (::glob(pattern.c_str(), 0, nullptr, &matches) == 0)
    for (std::size_t i = 0; i < matches.gl_pathc; ++i) out.emplace_back(matches.gl_pathv[i]);
  ::globfree(&matches);
  return out;
}

std::vector<Objectives> filtered_front(const std::vector<FrontRecord> &records) {
  std::vector<ObjectivePoint> pts;
  std::vector<Objectives> objs;
  for (const auto &r : records)
    if (r.obj) {
      objs.push_back(*r.obj);
      pts.push_back({r.obj->F1, r.obj->F2});
    }
  std::vector<Objectives> out;
  for (std::size_t i : nondominated_indices(pts)) out.push_back(objs[i]);
  return out;
}

} // namespace

std::string manifest_path(const std::string &output) {
  fs::path p(output);
  p.replace_extension(".manifest.json");
  return p.string();
}

int class_from_filename(const std::string &path) {
  static const std::regex pattern(R"(class(\d+))");
  std::smatch match;
  const std::string name = fs::path(path).filename().string();
  if (std::regex_search(name, match, pattern)) return std::stoi(match[1].str());
  return 0;
}

CommandResult cmd_generate(const GenerateOptions &options) {
  const auto start = std::chrono::steady_clock::now();
  (void)class_shape(options.class_id);
  if (options.count < 1) throw UsageError("--count must be at least 1");
  fs::create_directories(options.out);
  CommandResult result;
  nlohmann::json seeds = nlohmann::json::array();
  for (int n = 0; n < options.count; ++n) {
    GeneratorConfig cfg;
    cfg.class_id = options.class_id;
    cfg.seed = options.seed + static_cast<std::uint64_t>(n);
    const Instance inst = generate(cfg);
    const std::string path =
        (fs::path(options.out) / ("class" + std::to_string(cfg.class_id) + "_seed" + std::to_string(cfg.seed) + ".json")).string();
    save_instance(inst, path);
    result.written.push_back(path);
    seeds.push_back(cfg.seed);
  }
  result.manifest = {{"command", "generate"},
                     {"config", {{"class", options.class_id}, {"seed", options.seed}, {"count", options.count}, {"out", options.out}}},
                     {"class", options.class_id},
                     {"seeds", seeds},
                     {"outputs", result.written},
                     {"wall_time_s", seconds_since(start)}};
  const std::string mpath = (fs::path(options.out) / ("class" + std::to_string(options.class_id) + "_seed" +
                                                      std::to_string(options.seed) + "_count" +
                                                      std::to_string(options.count) + ".manifest.json"))
                                .string();
  write_json(result.manifest, mpath);
  result.written.push_back(mpath);
  return result;
}

CommandResult cmd_solve(const SolveCommandOptions &options) {
  const auto start = std::chrono::steady_clock::now();
  if (options.group < 1 || options.group > 3) throw UsageError("--group must be 1, 2 or 3");
  const Method method = method_from_string(options.method);
  if (options.points < 1) throw UsageError("--points must be at least 1");
  if (options.group == 1 && options.n_patterns < 1) throw UsageError("--n-patterns must be at least 1");
  if (options.time_limit_s <= 0.0) throw UsageError("--time-limit must be positive");

  const Instance inst = load_instance(options.instance);
  const PatternSet patterns = build_pattern_set(inst, options.group == 1 ? options.n_patterns : 0);
  const RelaxMode relax = options.group == 3 ? RelaxMode::RelaxedExceptZ : RelaxMode::Integer;
  const ScalarizedModel model(inst, patterns, relax);

  SolveOptions solve;
  solve.limits.time_limit_s = options.time_limit_s;
  solve.limits.node_limit = options.node_limit;
  solve.threads = options.threads > 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());

  std::string out = options.out;
  if (out.empty())
    out = fs::path(options.instance).stem().string() + "_g" + std::to_string(options.group) + "_" + options.method + ".csv";
  if (auto parent = fs::path(out).parent_path(); !parent.empty()) fs::create_directories(parent);

  CommandResult result;
  if (!options.lp_out.empty()) {
    std::ofstream lp(options.lp_out);
    write_lp_text(lp, model.base);
    result.written.push_back(options.lp_out);
  }

  const PayoffTable payoff = compute_payoff(model, solve);
  const ParetoFront front = method == Method::Weighting ? weighting_sweep(model, payoff, options.points, solve)
                                                        : epsilon_sweep(model, payoff, options.points, solve);
  {
    std::ofstream csv(out);
    if (!csv) throw UsageError("cannot write " + out);
    write_front_csv(csv, front);
  }
  result.written.push_back(out);

  if (!options.solutions_out.empty()) {
    nlohmann::json dump = nlohmann::json::array();
    for (const auto &p : front.points) {
      nlohmann::json item = {{"control", p.control}, {"status", to_string(p.status)}};
      if (p.plan) {
        item["objectives"] = objectives_json(p.obj);
        item["plan"] = plan_json(*p.plan);
      }
      dump.push_back(std::move(item));
    }
    write_json(dump, options.solutions_out);
    result.written.push_back(options.solutions_out);
  }

  std::vector<Objectives> filtered;
  for (const auto &p : front.nondominated()) filtered.push_back(p.obj);
  std::int64_t nodes = 0;
  std::map<std::string, int> statuses;
  for (const auto &p : front.points) {
    nodes += p.nodes;
    ++statuses[to_string(p.status)];
  }
  const bool all_optimal = front.all_optimal() && payoff.optimal;
  result.exit_code = all_optimal ? 0 : 1;
  result.manifest = {
      {"command", "solve"},
      {"config",
       {{"instance", options.instance},
        {"group", options.group},
        {"method", options.method},
        {"points", options.points},
        {"n_patterns", options.n_patterns},
        {"time_limit_s", options.time_limit_s},
        {"node_limit", options.node_limit},
        {"threads", solve.threads},
        {"out", out},
        {"solutions_out", options.solutions_out},
        {"lp_out", options.lp_out}}},
      {"class", class_from_filename(options.instance)},
      {"seeds", {seed_from_filename(options.instance)}},
      {"group", options.group},
      {"method", options.method},
      {"points", options.points},
      {"outputs", result.written},
      {"wall_time_s", seconds_since(start)},
      {"payoff",
       {{"f1_star", payoff.f1_star},
        {"f2_star", payoff.f2_star},
        {"f1_nadir", payoff.f1_nadir},
        {"f2_nadir", payoff.f2_nadir},
        {"optimal", payoff.optimal}}},
      {"solver",
       {{"nv", front.num_variables},
        {"nc", front.num_rows},
        {"patterns", patterns.total()},
        {"nodes", nodes},
        {"statuses", statuses},
        {"sweep_time_s", front.time_s},
        {"nd", count_distinct(filtered)},
        {"all_optimal", all_optimal}}},
  };
  const std::string mpath = manifest_path(out);
  write_json(result.manifest, mpath);
  result.written.push_back(mpath);
  return result;
}

CommandResult cmd_analyze(const AnalyzeOptions &options) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> files;
  for (auto &path : expand_glob(options.fronts))
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") files.push_back(path);
  if (files.empty()) throw UsageError("no front files match '" + options.fronts + "'");
  std::sort(files.begin(), files.end());

  std::vector<FrontSummary> summaries;
  std::vector<RunRecord> runs;
  for (const auto &file : files) {
    const auto records = parse_front(read_csv_file(file));
    FrontSummary summary;
    summary.label = fs::path(file).stem().string();
    summary.points = filtered_front(records);
    summary.class_id = class_from_filename(file);

    RunRecord run;
    run.nd = count_distinct(summary.points);
    run.method = records.empty() ? "" : records.front().method;
    const std::string mpath = manifest_path(file);
    if (fs::exists(mpath)) {
      std::ifstream in(mpath);
      const auto manifest = nlohmann::json::parse(in);
      summary.class_id = manifest.value("class", summary.class_id);
      run.group = manifest.value("group", 0);
      run.method = manifest.value("method", run.method);
      run.time_s = manifest.value("wall_time_s", 0.0);
      if (manifest.contains("solver")) {
        run.nv = manifest["solver"].value("nv", 0);
        run.nc = manifest["solver"].value("nc", 0);
      }
    }
    run.class_id = summary.class_id;
    runs.push_back(run);
    summaries.push_back(std::move(summary));
  }

  CorrelationReport report = build_report(summaries);
  std::map<int, int> fronts_per_class;
  for (const auto &s : summaries) ++fronts_per_class[s.class_id];
  std::erase_if(report.classes, [&](const ClassCorrelation &c) { return fronts_per_class[c.class_id] < 2; });

  fs::create_directories(options.out);
  CommandResult result;
  const std::string corr = (fs::path(options.out) / "correlations.csv").string();
  const std::string stats = (fs::path(options.out) / "statistics.csv").string();
  {
    std::ofstream out(corr);
    write_correlation_csv(out, report);
  }
  {
    std::ofstream out(stats);
    write_statistics_csv(out, aggregate_runs(runs));
  }
  result.written = {corr, stats};
  nlohmann::json strong = nlohmann::json::array();
  for (const auto &c : report.classes)
    for (std::size_t p = 0; p < kReportPairs.size(); ++p)
      if (c.strong[p]) strong.push_back({{"class", c.class_id}, {"pair", kReportPairs[p].label}});
  result.manifest = {{"command", "analyze"},
                     {"config", {{"fronts", options.fronts}, {"out", options.out}}},
                     {"inputs", files},
                     {"outputs", result.written},
                     {"strong_pairs", strong},
                     {"wall_time_s", seconds_since(start)}};
  const std::string mpath = (fs::path(options.out) / "analyze.manifest.json").string();
  write_json(result.manifest, mpath);
  result.written.push_back(mpath);
  return result;
}

int run(int argc, char **argv) {
  CLI::App app{"Bi-objective lot sizing and cutting stock toolkit"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto *generate_cmd = app.add_subcommand("generate", "Draw benchmark instances");
  generate_cmd->add_option("--class", gen.class_id, "Instance class 1-12")->required();
  generate_cmd->add_option("--seed", gen.seed, "First seed")->required();
  generate_cmd->add_option("--count", gen.count, "Number of instances (seeds seed..seed+count-1)");
  generate_cmd->add_option("--out", gen.out, "Output directory");

  SolveCommandOptions solve;
  auto *solve_cmd = app.add_subcommand("solve", "Sweep a scalarization over one instance");
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON")->required();
  solve_cmd->add_option("--group", solve.group, "1 heuristic patterns, 2 integer, 3 relaxed except setups");
  solve_cmd->add_option("--method", solve.method, "weighting or epsilon");
  solve_cmd->add_option("--points", solve.points, "Sweep size");
  solve_cmd->add_option("--n-patterns", solve.n_patterns, "Patterns kept per machine in group 1");
  solve_cmd->add_option("--time-limit", solve.time_limit_s, "Seconds per scalarized solve");
  solve_cmd->add_option("--node-limit", solve.node_limit, "Branch-and-bound nodes per solve");
  solve_cmd->add_option("--threads", solve.threads, "Worker threads (0 = hardware)");
  solve_cmd->add_option("--out", solve.out, "Front CSV path");
  solve_cmd->add_option("--solutions", solve.solutions_out, "Optional per-point plan dump (JSON)");
  solve_cmd->add_option("--lp", solve.lp_out, "Optional LP text dump of the constraint model");

  AnalyzeOptions analyze;
  auto *analyze_cmd = app.add_subcommand("analyze", "Correlation and run statistics over front CSVs");
  analyze_cmd->add_option("--fronts", analyze.fronts, "Glob of front CSV files")->required();
  analyze_cmd->add_option("--out", analyze.out, "Output directory");

  std::string pattern_instance, pattern_out;
  int pattern_limit = 0;
  auto *patterns_cmd = app.add_subcommand("patterns", "Export the maximal cutting patterns of an instance");
  patterns_cmd->add_option("--instance", pattern_instance, "Instance JSON")->required();
  patterns_cmd->add_option("--n-patterns", pattern_limit, "Keep only the n lowest-waste patterns (0 = all)");
  patterns_cmd->add_option("--out", pattern_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    return app.exit(err);
  }

  try {
    CommandResult result;
    if (*generate_cmd) result = cmd_generate(gen);
    else if (*solve_cmd) result = cmd_solve(solve);
    else if (*analyze_cmd) result = cmd_analyze(analyze);
    else if (*patterns_cmd) {
      const Instance inst = load_instance(pattern_instance);
      const PatternSet set = build_pattern_set(inst, pattern_limit);
      if (pattern_out.empty()) {
        write_patterns_csv(std::cout, inst, set);
      } else {
        std::ofstream out(pattern_out);
        write_patterns_csv(out, inst, set);
        result.written.push_back(pattern_out);
      }
    }
    for (const auto &path : result.written) std::cout << path << '\n';
    if (result.exit_code != 0) std::cerr << "warning: some solves did not reach optimality\n";
    return result.exit_code;
  } catch (const UsageError &err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << '\n';
    return 3;
  }
}

} // namespace lscsp::cli

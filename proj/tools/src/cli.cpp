#include "iorobust_cli/cli.hpp"

#include <iorobust/classical_io.hpp>
#include <iorobust/dataset_io.hpp>
#include <iorobust/error.hpp>
#include <iorobust/experiments.hpp>
#include <iorobust/robust.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace iorobust::cli {

namespace {

using json = nlohmann::json;
using Index = Eigen::Index;

std::size_t parse_count(const std::string& text) {
  std::size_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw UsageError("not a nonnegative integer: '" + text + "'");
  return value;
}

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("iorobust", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* level = std::getenv("IOROBUST_LOG")) logger->set_level(spdlog::level::from_str(level));
  return logger;
}

Dataset load(const std::string& path) {
  try {
    return read_dataset(path);
  } catch (const UsageError&) {
    throw;
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what(), e.row());
  }
}

void write_json(const std::string& path, const json& doc, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << doc.dump(1) << '\n';
    return;
  }
  write_text_file(path, doc.dump(1) + "\n");
}

struct GenArgs {
  Index m = 0, n = 0;
  std::size_t K = 0, L = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.m = a.m;
  cfg.n = a.n;
  cfg.L = a.L;
  cfg.seed = a.seed;
  cfg.K_values = {a.K};
  if (a.L == 0) throw UsageError("gen: --L must be at least 1");
  cfg.validate();
  const Dataset data = generate_dataset(cfg);
  write_dataset(a.out, data);
  out << "wrote " << a.out << ": m=" << a.m << " n=" << a.n << " K=" << data.train.size()
      << " L=" << data.validation.size() << " seed=" << a.seed << '\n';
  return kOk;
}

struct SolveRloArgs {
  std::string data;
  std::optional<std::size_t> b_index;
  std::string b_file;
  std::optional<std::size_t> K;
  bool certify = false;
  bool full = false;
  std::string out;
};

int cmd_solve_rlo(const SolveRloArgs& a, std::ostream& out) {
  const Dataset data = load(a.data);
  Vector b;
  if (a.b_index) {
    const std::size_t l = *a.b_index;
    if (l < 1 || l > data.validation.size()) {
      throw UsageError("solve-rlo: --b-index " + std::to_string(l) + " is outside 1.." +
                       std::to_string(data.validation.size()) + " (validation pairs)");
    }
    b = data.validation[l - 1].b;
  } else {
    b = read_vector(a.b_file, "b");
  }
  if (b.size() != data.problem.num_rows()) {
    throw UsageError("solve-rlo: b has length " + std::to_string(b.size()) + ", expected " +
                     std::to_string(data.problem.num_rows()));
  }
  const std::size_t K = a.K.value_or(data.train.size());
  if (K > data.train.size()) throw UsageError("solve-rlo: --K exceeds the number of training observations");

  RobustOptions options;
  options.certify = a.certify;
  options.formulation = a.full ? RobustFormulation::Full : RobustFormulation::Reduced;
  const RobustSolution sol = solve_rlo(data.training_set(K), b, options);

  json doc;
  doc["zeta"] = sol.zeta;
  doc["x"] = to_json(sol.x);
  doc["K"] = K;
  doc["iterations"] = sol.iterations;
  if (a.certify) {
    doc["worst_case_c"] = to_json(sol.worst_case_c);
    doc["gap"] = sol.certification_gap;
  }
  if (data.truth && a.b_index) {
    doc["relative_gap"] = relative_gap(sol.x, data.validation[*a.b_index - 1].x_star, data.truth->c_true);
  }
  if (!a.out.empty()) write_json(a.out, doc, out);
  char line[160];
  std::snprintf(line, sizeof line, "zeta=%.12g", sol.zeta);
  out << line;
  if (a.certify) {
    std::snprintf(line, sizeof line, " gap=%.3g", sol.certification_gap);
    out << line;
  }
  out << '\n';
  if (a.out.empty()) write_json("-", doc, out);
  return kOk;
}

struct SolveIoArgs {
  std::string data;
  std::string norm = "l2";
  std::string ref;
  std::optional<std::size_t> K;
  std::size_t fw_max_iters = 5000;
  double fw_tol = 1e-6;
  bool open_loop = false;
  std::string out;
};

int cmd_solve_io(const SolveIoArgs& a, std::ostream& out) {
  const Dataset data = load(a.data);
  const Index n = data.problem.num_cols();
  IOConfig cfg;
  cfg.norm = parse_norm(a.norm);
  cfg.c_hat = a.ref == "uniform" ? Vector::Constant(n, 1.0 / static_cast<double>(n)) : read_vector(a.ref, "c");
  cfg.fw_max_iters = a.fw_max_iters;
  cfg.fw_tol = a.fw_tol;
  cfg.fw_variant = a.open_loop ? FrankWolfeVariant::OpenLoop : FrankWolfeVariant::FullyCorrective;
  const std::size_t K = a.K.value_or(data.train.size());
  if (K > data.train.size()) throw UsageError("solve-io: --K exceeds the number of training observations");

  const IOResult r = solve_io(data.training_set(K), cfg);
  json doc;
  doc["c"] = to_json(r.c);
  doc["norm"] = std::string(to_string(cfg.norm));
  doc["objective"] = r.objective;
  doc["certificate_kind"] = std::string(to_string(r.certificate_kind));
  doc["certificate"] = r.certificate;
  doc["iterations"] = r.iterations;
  doc["K"] = K;
  char line[200];
  std::snprintf(line, sizeof line, "objective=%.12g %s=%.3g iterations=%zu\n", r.objective,
                std::string(to_string(r.certificate_kind)).c_str(), r.certificate, r.iterations);
  out << line;
  write_json(a.out, doc, out);
  return kOk;
}

struct EvalArgs {
  std::string data;
  std::optional<std::size_t> K;
  std::vector<std::string> methods{"IO_RO", "ClassicalIO_c1", "ClassicalIO_c2"};
  std::string norm = "l2";
  std::size_t jobs = 1;
  std::string out;
};

void print_summary(const std::vector<ResultRow>& rows, std::ostream& out) {
  std::map<std::pair<std::size_t, std::string>, std::vector<double>> groups;
  for (const ResultRow& r : rows) groups[{r.K, std::string(to_string(r.method))}].push_back(r.gap);
  char line[200];
  for (const auto& [key, gaps] : groups) {
    const GapSummary s = summarize(gaps);
    std::snprintf(line, sizeof line, "K=%-4zu %-15s median=%.4g q1=%.4g q3=%.4g worst=%.4g\n", key.first,
                  key.second.c_str(), s.median, s.q1, s.q3, s.worst);
    out << line;
  }
}

int cmd_eval(const EvalArgs& a, std::ostream& out, spdlog::logger& log) {
  const Dataset data = load(a.data);
  if (!data.truth) throw UsageError("eval: dataset has no c_true");
  if (data.validation.empty()) throw UsageError("eval: dataset has no validation pairs");
  ExperimentConfig cfg;
  cfg.m = data.problem.num_rows();
  cfg.n = data.problem.num_cols();
  cfg.K_values = {a.K.value_or(data.train.size())};
  cfg.L = data.validation.size();
  cfg.seed = data.seed.value_or(0);
  cfg.io_norm = parse_norm(a.norm);
  cfg.jobs = a.jobs;
  cfg.methods.clear();
  for (const std::string& m : a.methods) cfg.methods.push_back(parse_method(m));

  const ExperimentResult result = run_sweep(cfg, data);
  for (const std::string& f : result.failures) log.warn("{}", f);
  if (!a.out.empty()) {
    std::ostringstream csv;
    write_results_csv(csv, result.rows);
    write_text_file(a.out, csv.str());
  }
  print_summary(result.rows, out);
  return result.rows.empty() ? kSolverError : kOk;
}

struct Fig1Args {
  Index m = 10, n = 150;
  std::size_t L = 20;
  std::string K = "10..130:10";
  std::size_t seeds = 10;
  std::uint64_t first_seed = 1;
  std::vector<std::string> methods{"IO_RO", "ClassicalIO_c1", "ClassicalIO_c2"};
  std::string norm = "l2";
  std::size_t jobs = 1;
  std::string out = "results.csv";
};

int cmd_fig1(const Fig1Args& a, std::ostream& out, spdlog::logger& log) {
  if (a.seeds == 0) throw UsageError("reproduce-fig1: --seeds must be at least 1");
  ExperimentConfig cfg;
  cfg.m = a.m;
  cfg.n = a.n;
  cfg.L = a.L;
  cfg.K_values = parse_range(a.K);
  cfg.io_norm = parse_norm(a.norm);
  cfg.jobs = a.jobs;
  cfg.methods.clear();
  for (const std::string& m : a.methods) cfg.methods.push_back(parse_method(m));
  cfg.validate();

  std::ofstream csv(a.out);
  if (!csv) throw UsageError("cannot open '" + a.out + "' for writing");
  write_results_csv(csv, {}, true);
  std::vector<ResultRow> all;
  std::size_t failures = 0;
  for (std::size_t s = 0; s < a.seeds; ++s) {
    cfg.seed = a.first_seed + s;
    log.info("seed {} ({} of {})", cfg.seed, s + 1, a.seeds);
    ExperimentResult result;
    try {
      result = run_sweep(cfg);
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      log.warn("seed {}: {}", cfg.seed, e.what());
      ++failures;
      continue;
    }
    for (const std::string& f : result.failures) log.warn("seed {} {}", cfg.seed, f);
    failures += result.failures.size();
    write_results_csv(csv, result.rows, false);
    csv.flush();
    all.insert(all.end(), result.rows.begin(), result.rows.end());
  }
  if (!csv) throw UsageError("write to '" + a.out + "' failed");
  print_summary(all, out);
  out << "wrote " << all.size() << " rows to " << a.out;
  if (failures > 0) out << " (" << failures << " failures logged)";
  out << '\n';
  return all.empty() ? kSolverError : kOk;
}

}  // namespace

std::vector<std::size_t> parse_range(const std::string& text) {
  std::vector<std::size_t> values;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_count(item));
    if (values.empty()) throw UsageError("empty K list");
    return values;
  }
  const auto colon = text.find(':', dots);
  const std::size_t lo = parse_count(text.substr(0, dots));
  const std::size_t hi = parse_count(text.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2));
  const std::size_t step = colon == std::string::npos ? 1 : parse_count(text.substr(colon + 1));
  if (step == 0) throw UsageError("range step must be positive: '" + text + "'");
  if (hi < lo) throw UsageError("range end below start: '" + text + "'");
  for (std::size_t k = lo; k <= hi; k += step) values.push_back(k);
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);
  CLI::App app{"Inverse-optimization-based robust linear optimization"};
  app.name("iorobust");
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen_cmd->add_option("--m", gen.m, "Constraint rows")->required();
  gen_cmd->add_option("--n", gen.n, "Variables")->required();
  gen_cmd->add_option("--K", gen.K, "Training observations")->required();
  gen_cmd->add_option("--L", gen.L, "Validation pairs")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Dataset JSON")->required();

  SolveRloArgs rlo;
  CLI::App* rlo_cmd = app.add_subcommand("solve-rlo", "Solve the robust counterpart for one right-hand side");
  rlo_cmd->add_option("--data", rlo.data, "Dataset JSON")->required();
  auto* b_index = rlo_cmd->add_option("--b-index", rlo.b_index, "1-based validation pair supplying b");
  auto* b_file = rlo_cmd->add_option("--b-file", rlo.b_file, "JSON vector (or {\"b\": [...]})");
  b_index->excludes(b_file);
  rlo_cmd->add_option("--K", rlo.K, "Use only the first K training observations");
  rlo_cmd->add_flag("--certify", rlo.certify, "Check zeta against the inner maximization");
  rlo_cmd->add_flag("--full", rlo.full, "Solve the unreduced counterpart");
  rlo_cmd->add_option("--out", rlo.out, "Solution JSON");

  SolveIoArgs io;
  CLI::App* io_cmd = app.add_subcommand("solve-io", "Classical inverse optimization");
  io_cmd->add_option("--data", io.data, "Dataset JSON")->required();
  io_cmd->add_option("--norm", io.norm, "l1 | l2 | linf")->capture_default_str();
  io_cmd->add_option("--ref", io.ref, "'uniform' or a JSON vector file")->required();
  io_cmd->add_option("--K", io.K, "Use only the first K training observations");
  io_cmd->add_option("--fw-max-iters", io.fw_max_iters)->capture_default_str();
  io_cmd->add_option("--fw-tol", io.fw_tol)->capture_default_str();
  io_cmd->add_flag("--open-loop", io.open_loop, "Plain 2/(t+2) Frank-Wolfe steps");
  io_cmd->add_option("--out", io.out, "Output JSON (stdout when omitted)");

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Relative gaps on a dataset's validation pairs");
  eval_cmd->add_option("--data", ev.data, "Dataset JSON with c_true")->required();
  eval_cmd->add_option("--K", ev.K, "Training observations to use");
  eval_cmd->add_option("--methods", ev.methods)->capture_default_str();
  eval_cmd->add_option("--norm", ev.norm)->capture_default_str();
  eval_cmd->add_option("--jobs", ev.jobs)->capture_default_str();
  eval_cmd->add_option("--out", ev.out, "Results CSV");

  Fig1Args fig;
  CLI::App* fig_cmd = app.add_subcommand("reproduce-fig1", "Run the full K sweep over several seeds");
  fig_cmd->add_option("--m", fig.m)->capture_default_str();
  fig_cmd->add_option("--n", fig.n)->capture_default_str();
  fig_cmd->add_option("--L", fig.L)->capture_default_str();
  fig_cmd->add_option("--K", fig.K, "a..b:step, a..b or a,b,c")->capture_default_str();
  fig_cmd->add_option("--seeds", fig.seeds, "Number of seeds")->capture_default_str();
  fig_cmd->add_option("--first-seed", fig.first_seed)->capture_default_str();
  fig_cmd->add_option("--methods", fig.methods)->capture_default_str();
  fig_cmd->add_option("--norm", fig.norm)->capture_default_str();
  fig_cmd->add_option("--jobs", fig.jobs)->capture_default_str();
  fig_cmd->add_option("--out", fig.out, "Results CSV")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (rlo_cmd->parsed()) {
      if (!rlo.b_index && rlo.b_file.empty()) throw UsageError("solve-rlo: one of --b-index or --b-file is required");
      return cmd_solve_rlo(rlo, out);
    }
    if (io_cmd->parsed()) return cmd_solve_io(io, out);
    if (eval_cmd->parsed()) return cmd_eval(ev, out, *log);
    if (fig_cmd->parsed()) return cmd_fig1(fig, out, *log);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverError;
  }
  return kUsageError;
}

}  // namespace iorobust::cli

// Command-line front end: analyze | simulate | sweep | fingerprint |
// gen-input over flat key = value configs.
//
// Exit codes: 0 success (or fingerprint verdict equal), 1 fingerprint
// verdict different, 2 usage or configuration error, 3 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qfp/bitstring.hpp"
#include "qfp/config.hpp"
#include "qfp/csv.hpp"
#include "qfp/decision.hpp"
#include "qfp/info.hpp"
#include "qfp/optics.hpp"
#include "qfp/simulator.hpp"
#include "qfp/toeplitz.hpp"

namespace {

using namespace qfp;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::size_t end = comma == std::string::npos ? csv.size() : comma;
    std::string item = csv.substr(start, end - start);
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) {
      item.clear();
    } else {
      const auto last = item.find_last_not_of(" \t");
      item = item.substr(first, last - first + 1);
    }
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t parse_u64_strict(const std::string& value, const char* what) {
  try {
    if (value.empty() || value[0] == '-')
      throw std::invalid_argument("negative");
    std::size_t pos = 0;
    const std::uint64_t parsed = std::stoull(value, &pos, 10);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": '" + value +
                                "' is not a nonnegative integer");
  }
}

double parse_double_strict(const std::string& value, const char* what) {
  try {
    std::size_t pos = 0;
    const double parsed = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": '" + value +
                                "' is not a number");
  }
}

std::vector<CaseKind> parse_cases(const std::string& list) {
  std::vector<CaseKind> cases;
  for (const std::string& label : split_list(list))
    cases.push_back(parse_case_kind(label));
  if (cases.empty())
    throw std::invalid_argument("--cases: expected at least one case label");
  return cases;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + out_path + "'");
}

void print_kv(const char* key, const std::string& value) {
  std::printf("%s = %s\n", key, value.c_str());
}

void warn_epsilon_domain(const ExperimentConfig& cfg) {
  if (cfg.epsilon_target >= 0.25)
    std::fprintf(stderr,
                 "warning: epsilon_target %s >= 0.25 zeroes the classical "
                 "limit prefactor\n",
                 format_double(cfg.epsilon_target).c_str());
}

int run_analyze(const ExperimentConfig& cfg) {
  warn_epsilon_domain(cfg);
  const std::uint64_t m = codeword_length(cfg.n, cfg.rate);
  const InfoReport info =
      advantage_report(cfg.n, cfg.params.mu_total, cfg.mu_rel_uncertainty,
                       cfg.rate, cfg.epsilon_target);
  const DetectionMeans equal = expected_counts(cfg.params, m, 0.0);
  const DetectionMeans diff = expected_counts(cfg.params, m, cfg.delta);
  const DecisionRule rule = choose_threshold(equal.lambda_d1, diff.lambda_d1);

  print_kv("n", std::to_string(cfg.n));
  print_kv("m", std::to_string(m));
  print_kv("mu", format_double(cfg.params.mu_total));
  print_kv("q_bits", format_double(info.q_bits));
  print_kv("q_bits_low", format_double(info.q_bits_low));
  print_kv("q_bits_high", format_double(info.q_bits_high));
  print_kv("c_limit_bits", format_double(info.c_limit_bits));
  print_kv("c_best_known_bits", format_double(info.c_best_known_bits));
  print_kv("gamma", format_double(info.gamma));
  print_kv("lambda_equal", format_double(equal.lambda_d1));
  print_kv("lambda_diff", format_double(diff.lambda_d1));
  print_kv("threshold", std::to_string(rule.threshold));
  print_kv("err_equal", format_double(rule.err_equal));
  print_kv("err_diff", format_double(rule.err_diff));
  print_kv("epsilon", format_double(rule.epsilon));
  return 0;
}

int run_simulate(const ExperimentConfig& cfg, const std::string& case_list,
                 const std::string& out_path) {
  std::vector<SimulateBlock> blocks;
  for (CaseKind kind : parse_cases(case_list)) {
    ExperimentConfig cell = cfg;
    cell.case_kind = kind;
    blocks.push_back({kind, run_trials(cell)});
  }
  emit(simulate_csv(blocks), out_path);
  return 0;
}

int run_sweep(const ExperimentConfig& cfg, const std::string& n_list,
              const std::string& loss_list, const std::string& case_list,
              unsigned threads, const std::string& out_path) {
  std::vector<std::uint64_t> ns;
  for (const std::string& v : split_list(n_list))
    ns.push_back(parse_u64_strict(v, "--n-list"));
  if (ns.empty()) ns.push_back(cfg.n);

  std::vector<double> losses;
  for (const std::string& v : split_list(loss_list))
    losses.push_back(parse_double_strict(v, "--arm-loss-db-list"));
  if (losses.empty()) losses.push_back(cfg.params.arm_loss_db_a);

  const std::vector<SweepCell> cells =
      sweep(cfg, ns, losses, parse_cases(case_list), threads);
  emit(sweep_csv(cells), out_path);
  return 0;
}

int run_fingerprint(const ExperimentConfig& cfg, const std::string& path_a,
                    const std::string& path_b) {
  for (const std::string& path : {path_a, path_b}) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
      std::fprintf(stderr, "error: cannot read '%s'\n", path.c_str());
      return 2;
    }
  }
  warn_epsilon_domain(cfg);
  const FileCompareResult r = compare_files(path_a, path_b, cfg);
  print_kv("verdict", to_string(r.verdict));
  print_kv("distance_fraction", format_double(r.distance_fraction));
  print_kv("mean_d1", format_double(r.summary.mean_d1));
  print_kv("threshold", std::to_string(r.summary.threshold));
  print_kv("epsilon", format_double(r.summary.rule.epsilon));
  print_kv("q_bits", format_double(r.summary.info.q_bits));
  print_kv("c_limit_bits", format_double(r.summary.info.c_limit_bits));
  print_kv("gamma", format_double(r.summary.info.gamma));
  return r.verdict == Verdict::Different ? 1 : 0;
}

int run_gen_input(std::uint64_t seed, std::uint64_t bits,
                  const std::string& out_path) {
  if (bits == 0) throw std::invalid_argument("--bits must be >= 1");
  BitString::random(seed, bits).to_file(out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state fingerprinting: analysis and simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string cases_simulate = "equal,worst_case";
  std::string cases_sweep = "worst_case";
  std::string n_list;
  std::string loss_list;
  std::string out_path;
  unsigned threads = 1;
  std::string path_a;
  std::string path_b;
  std::uint64_t gen_seed = 0;
  std::uint64_t gen_bits = 0;
  std::string gen_out;

  const auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file")
        ->required();
    cmd->add_option("--set", sets, "override a config key (key=value)");
  };

  CLI::App* analyze =
      app.add_subcommand("analyze", "analytic bounds, no sampling");
  add_config(analyze);

  CLI::App* simulate =
      app.add_subcommand("simulate", "per-trial counts as CSV");
  add_config(simulate);
  simulate->add_option("--cases", cases_simulate,
                       "comma-separated case list (default equal,worst_case)");
  simulate->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "grid of runs as a CSV table");
  add_config(sweep_cmd);
  sweep_cmd->add_option("--n-list", n_list,
                        "comma-separated input sizes (default: config n)");
  sweep_cmd->add_option(
      "--arm-loss-db-list", loss_list,
      "comma-separated per-arm losses in dB (default: config value)");
  sweep_cmd->add_option("--cases", cases_sweep,
                        "comma-separated case list (default worst_case)");
  sweep_cmd->add_option("--threads", threads, "parallel sweep workers");
  sweep_cmd->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* fingerprint = app.add_subcommand(
      "fingerprint", "compare two files; exit 0 equal, 1 different");
  add_config(fingerprint);
  fingerprint->add_option("path_a", path_a, "first input file")->required();
  fingerprint->add_option("path_b", path_b, "second input file")->required();

  CLI::App* gen_input = app.add_subcommand(
      "gen-input", "write a seeded random input file for testing");
  gen_input->add_option("--seed", gen_seed, "stream seed")->required();
  gen_input->add_option("--bits", gen_bits, "file length in bits")->required();
  gen_input->add_option("path", gen_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_input->parsed()) return run_gen_input(gen_seed, gen_bits, gen_out);
    const ExperimentConfig cfg = load_config(config_path, sets);
    if (analyze->parsed()) return run_analyze(cfg);
    if (simulate->parsed()) return run_simulate(cfg, cases_simulate, out_path);
    if (sweep_cmd->parsed())
      return run_sweep(cfg, n_list, loss_list, cases_sweep, threads, out_path);
    if (fingerprint->parsed()) return run_fingerprint(cfg, path_a, path_b);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

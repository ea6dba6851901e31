#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "qfp/config.hpp"
#include "qfp/csv.hpp"
#include "qfp/simulator.hpp"

using namespace qfp;

namespace {

std::vector<std::pair<std::string, std::string>> base_pairs() {
  return {{"n", "2400"},
          {"rate", "0.24"},
          {"delta", "0.22"},
          {"mu_total", "650"},
          {"mu_rel_uncertainty", "0.037"},
          {"rep_rate_hz", "25000000"},
          {"dark_rate_hz", "0.11"},
          {"window_s", "2.5e-9"},
          {"det_efficiency", "0.456"},
          {"visibility", "0.96"},
          {"arm_loss_db_a", "1.96"},
          {"arm_loss_db_b", "1.96"},
          {"bs_transmittance_a", "0.8016"},
          {"bs_transmittance_b", "0.785"},
          {"epsilon_target", "2.6e-5"},
          {"repetitions", "10"},
          {"master_seed", "20240817"},
          {"sampling_mode", "aggregate"},
          {"case_kind", "worst_case"}};
}

std::string render(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string text = "# experiment description\n\n";
  for (const auto& [k, v] : kv) text += k + " = " + v + "\n";
  return text;
}

std::string without(const std::string& key) {
  auto kv = base_pairs();
  std::erase_if(kv, [&](const auto& p) { return p.first == key; });
  return render(kv);
}

std::string with(const std::string& key, const std::string& value) {
  auto kv = base_pairs();
  for (auto& p : kv)
    if (p.first == key) p.second = value;
  return render(kv);
}

// The diagnostic must name the offending key.
template <typename Fn>
void expect_mention(Fn fn, const std::string& needle) {
  try {
    fn();
    FAIL_CHECK("expected an exception mentioning '" << needle << "'");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  for (const std::string& l : split(text, '\n'))
    if (!l.empty()) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("config text round-trips every field") {
  const ExperimentConfig cfg = parse_config(render(base_pairs()));
  CHECK(cfg.n == 2400);
  CHECK(cfg.rate == 0.24);
  CHECK(cfg.delta == 0.22);
  CHECK(cfg.params.mu_total == 650.0);
  CHECK(cfg.mu_rel_uncertainty == 0.037);
  CHECK(cfg.params.rep_rate_hz == 25e6);
  CHECK(cfg.params.dark_rate_hz == 0.11);
  CHECK(cfg.params.window_s == 2.5e-9);
  CHECK(cfg.params.det_efficiency == 0.456);
  CHECK(cfg.params.visibility == 0.96);
  CHECK(cfg.params.arm_loss_db_a == 1.96);
  CHECK(cfg.params.arm_loss_db_b == 1.96);
  CHECK(cfg.params.bs_transmittance_a == 0.8016);
  CHECK(cfg.params.bs_transmittance_b == 0.785);
  CHECK(cfg.epsilon_target == 2.6e-5);
  CHECK(cfg.repetitions == 10);
  CHECK(cfg.master_seed == 20240817);
  CHECK(cfg.sampling_mode == SamplingMode::Aggregate);
  CHECK(cfg.case_kind == CaseKind::WorstCase);
}

TEST_CASE("config tolerates comments and loose spacing") {
  std::string text = render(base_pairs());
  text += "\n# trailing comment only\n   \n";
  CHECK(parse_config(text).n == 2400);

  // Inline comments and tight spacing.
  std::string tight = without("n") + "n=64 # overridden input size\n";
  CHECK(parse_config(tight).n == 64);
}

TEST_CASE("config errors name the offending key") {
  expect_mention([] { parse_config(without("mu_total")); }, "mu_total");
  expect_mention([] { parse_config(without("case_kind")); }, "case_kind");
  expect_mention(
      [] { parse_config(render(base_pairs()) + "bogus = 3\n"); }, "bogus");
  expect_mention(
      [] { parse_config(render(base_pairs()) + "rate = 0.3\n"); }, "rate");
  expect_mention([] { parse_config(with("rate", "0.2x4")); }, "rate");
  expect_mention([] { parse_config(with("n", "-5")); }, "n");
  expect_mention([] { parse_config(with("n", "")); }, "n");
  expect_mention([] { parse_config(with("repetitions", "ten")); },
                 "repetitions");
  expect_mention([] { parse_config(with("sampling_mode", "both")); },
                 "sampling_mode");
  expect_mention([] { parse_config(with("case_kind", "file_pair")); },
                 "case_kind");
  expect_mention([] { parse_config(with("case_kind", "equal ish")); },
                 "case_kind");
  // Domain violations surface through validation with the field name.
  expect_mention([] { parse_config(with("delta", "0.7")); }, "delta");
  expect_mention([] { parse_config(with("visibility", "1.5")); },
                 "visibility");
  // A line with no separator is malformed.
  CHECK_THROWS_AS(parse_config(render(base_pairs()) + "stray line\n"),
                  std::invalid_argument);
}

TEST_CASE("config accepts the other case and mode labels") {
  CHECK(parse_config(with("case_kind", "equal")).case_kind ==
        CaseKind::Equal);
  CHECK(parse_config(with("case_kind", "random_pair")).case_kind ==
        CaseKind::RandomPair);
  CHECK(parse_config(with("sampling_mode", "per_pulse")).sampling_mode ==
        SamplingMode::PerPulse);
}

TEST_CASE("config overrides replace file values") {
  const ExperimentConfig cfg =
      parse_config(render(base_pairs()), {"n=64", "case_kind=equal"});
  CHECK(cfg.n == 64);
  CHECK(cfg.case_kind == CaseKind::Equal);
  CHECK(cfg.rate == 0.24);  // untouched keys survive

  expect_mention(
      [] { parse_config(render(base_pairs()), {"bogus=1"}); }, "bogus");
  CHECK_THROWS_AS(parse_config(render(base_pairs()), {"n64"}),
                  std::invalid_argument);
  expect_mention([] { parse_config(render(base_pairs()), {"n=zz"}); }, "n");
}

TEST_CASE("config loads from a file path") {
  const std::string path = "/tmp/qfp_cfg_test.cfg";
  {
    std::ofstream out(path);
    out << render(base_pairs());
  }
  CHECK(load_config(path).n == 2400);
  CHECK(load_config(path, {"n=99"}).n == 99);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("/tmp/qfp_cfg_missing.cfg"),
                  std::invalid_argument);
}

TEST_CASE("doubles format as shortest round-trip decimal") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(0.0) == "0");
  for (double v : {1.0 / 3.0, 2.6e-5, 37594.474308460115, -1.5e-300, 1e300,
                   0.1, 8.288826367364484}) {
    CAPTURE(v);
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
    CHECK(s.find(',') == std::string::npos);
  }
}

TEST_CASE("simulate CSV carries one row per trial with stable schema") {
  ExperimentConfig cfg;
  cfg.n = 24;
  cfg.rate = 0.24;
  cfg.delta = 0.22;
  cfg.params.mu_total = 650;
  cfg.params.rep_rate_hz = 25e6;
  cfg.params.dark_rate_hz = 0.11;
  cfg.params.window_s = 2.5e-9;
  cfg.params.det_efficiency = 0.456;
  cfg.params.visibility = 0.96;
  cfg.params.bs_transmittance_a = 0.8016;
  cfg.params.bs_transmittance_b = 0.785;
  cfg.repetitions = 3;
  cfg.master_seed = 12;
  cfg.mu_rel_uncertainty = 0.037;
  cfg.epsilon_target = 2.6e-5;

  std::vector<SimulateBlock> blocks;
  cfg.case_kind = CaseKind::Equal;
  blocks.push_back({CaseKind::Equal, run_trials(cfg)});
  cfg.case_kind = CaseKind::WorstCase;
  blocks.push_back({CaseKind::WorstCase, run_trials(cfg)});

  const std::string csv = simulate_csv(blocks);
  const auto rows = lines_of(csv);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "trial,case,counts_d1,counts_d0,threshold,verdict,truth");

  const auto f = split(rows[1], ',');
  REQUIRE(f.size() == 7);
  CHECK(f[0] == "0");
  CHECK(f[1] == "equal");
  CHECK(f[2] == std::to_string(blocks[0].trials[0].counts_d1));
  CHECK(f[4] == std::to_string(blocks[0].trials[0].rule.threshold));
  CHECK(f[6] == "equal");

  // Trial numbering restarts with each case block.
  CHECK(split(rows[4], ',')[0] == "0");
  CHECK(split(rows[4], ',')[1] == "worst_case");

  // Deterministic bytes on re-emission.
  CHECK(simulate_csv(blocks) == csv);
}

TEST_CASE("sweep CSV records failed cells in line") {
  ExperimentConfig base;
  base.rate = 0.24;
  base.delta = 0.22;
  base.params.mu_total = 650;
  base.params.rep_rate_hz = 25e6;
  base.params.dark_rate_hz = 0.11;
  base.params.window_s = 2.5e-9;
  base.params.det_efficiency = 0.456;
  base.params.visibility = 0.96;
  base.params.bs_transmittance_a = 0.8016;
  base.params.bs_transmittance_b = 0.785;
  base.repetitions = 4;
  base.master_seed = 5;
  base.mu_rel_uncertainty = 0.037;
  base.epsilon_target = 2.6e-5;

  const std::vector<SweepCell> cells =
      sweep(base, {24, 0}, {0.93}, {CaseKind::WorstCase}, 1);
  REQUIRE(cells.size() == 2);
  REQUIRE(cells[0].error.empty());
  REQUIRE(!cells[1].error.empty());

  const std::string csv = sweep_csv(cells);
  const auto rows = lines_of(csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "n,m,mu,arm_loss_db,case,mean_d1,std_d1,threshold,epsilon,q_bits,"
        "c_limit_bits,c_best_bits,gamma,error");

  const auto ok = split(rows[1], ',');
  REQUIRE(ok.size() == 14);
  CHECK(ok[0] == "24");
  CHECK(ok[1] == std::to_string(cells[0].summary.info.m));
  CHECK(ok[3] == "0.93");
  CHECK(ok[4] == "worst_case");
  CHECK(std::stod(ok[5]) == cells[0].summary.mean_d1);
  CHECK(ok[7] == std::to_string(cells[0].summary.threshold));
  CHECK(std::stod(ok[8]) == cells[0].summary.rule.epsilon);
  CHECK(std::stod(ok[9]) == cells[0].summary.info.q_bits);
  CHECK(std::stod(ok[12]) == cells[0].summary.info.gamma);
  CHECK(ok[13].empty());

  const auto bad = split(rows[2], ',');
  REQUIRE(bad.size() == 14);
  CHECK(bad[0] == "0");
  CHECK(bad[1].empty());
  CHECK(bad[5].empty());
  CHECK(!bad[13].empty());
  // Error text must not smuggle extra separators into the row.
  CHECK(bad[13].find(',') == std::string::npos);

  CHECK(sweep_csv(cells) == csv);
}

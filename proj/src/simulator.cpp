#include "qfp/simulator.hpp"

#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>

#include "qfp/bitstring.hpp"
#include "qfp/sampling.hpp"
#include "qfp/toeplitz.hpp"

namespace qfp {

namespace {

constexpr std::uint64_t kPerPulseMaxSlots = 1ull << 24;
constexpr std::uint64_t kCodeSeedIndex = ~0ull;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("ExperimentConfig: ") + what);
}

CountsPair per_pulse_counts(const SystemParams& params, std::uint64_t m,
                            double d, CounterRng& rng) {
  const double a = params.detected_mu_a() / static_cast<double>(m);
  const double b = params.detected_mu_b() / static_cast<double>(m);
  const double p_dark = params.dark_rate_hz * params.window_s;
  const double slot_d1_eq = per_pulse_lambda_d1(a, b, params.visibility, true);
  const double slot_d1_df = per_pulse_lambda_d1(a, b, params.visibility, false);
  // The sum port gets whatever the difference port does not.
  const double click_d1_eq = -std::expm1(-slot_d1_eq);
  const double click_d1_df = -std::expm1(-slot_d1_df);
  const double click_d0_eq = -std::expm1(-(a + b - slot_d1_eq));
  const double click_d0_df = -std::expm1(-(a + b - slot_d1_df));

  const std::uint64_t k_diff =
      static_cast<std::uint64_t>(std::llround(d * static_cast<double>(m)));
  CountsPair counts;
  for (std::uint64_t slot = 0; slot < m; ++slot) {
    const bool diff = slot < k_diff;
    counts.d1 += bernoulli_sample(diff ? click_d1_df : click_d1_eq, rng);
    counts.d1 += bernoulli_sample(p_dark, rng);
    counts.d0 += bernoulli_sample(diff ? click_d0_df : click_d0_eq, rng);
    counts.d0 += bernoulli_sample(p_dark, rng);
  }
  return counts;
}

// Everything the trials of one run share: codeword length, referee rule, the
// case's fixed distance (when it has one), and the lazily built code.
class TrialRunner {
 public:
  explicit TrialRunner(const ExperimentConfig& config) : cfg_(config) {
    cfg_.validate();
    m_ = codeword_length(cfg_.n, cfg_.rate);
    rule_ = protocol_error_bound(cfg_.params, m_, cfg_.delta);
    switch (cfg_.case_kind) {
      case CaseKind::Equal:
        break;
      case CaseKind::WorstCase: {
        const auto flips = std::llround(cfg_.delta * static_cast<double>(m_));
        fixed_d_ = static_cast<double>(flips) / static_cast<double>(m_);
        fixed_truth_ = flips > 0 ? Verdict::Different : Verdict::Equal;
        break;
      }
      case CaseKind::RandomPair:
        build_code();
        break;
      case CaseKind::FilePair: {
        build_code();
        BitString a = read_padded(cfg_.path_a);
        const BitString delta_bits = a ^ read_padded(cfg_.path_b);
        if (delta_bits.weight() != 0) {
          fixed_d_ = static_cast<double>(code_->encode_weight(delta_bits)) /
                     static_cast<double>(m_);
          fixed_truth_ = Verdict::Different;
        }
        break;
      }
    }
  }

  TrialOutcome run(std::uint64_t trial_index) const {
    const std::uint64_t seed_t = derive_seed(cfg_.master_seed, trial_index);
    double d = fixed_d_;
    Verdict truth = fixed_truth_;
    if (cfg_.case_kind == CaseKind::RandomPair) {
      const BitString xa = BitString::random(derive_seed(seed_t, 1), cfg_.n);
      const BitString xb = BitString::random(derive_seed(seed_t, 2), cfg_.n);
      truth = xa == xb ? Verdict::Equal : Verdict::Different;
      const BitString delta_bits = xa ^ xb;
      d = delta_bits.weight() == 0
              ? 0.0
              : static_cast<double>(code_->encode_weight(delta_bits)) /
                    static_cast<double>(m_);
    }
    const CountsPair counts = sample_counts(cfg_.params, m_, d,
                                            cfg_.sampling_mode,
                                            derive_seed(seed_t, 0));
    TrialOutcome outcome;
    outcome.counts_d1 = counts.d1;
    outcome.counts_d0 = counts.d0;
    outcome.verdict = decide(counts.d1, rule_);
    outcome.truth = truth;
    outcome.rule = rule_;
    outcome.distance_fraction = d;
    return outcome;
  }

  const ExperimentConfig& config() const { return cfg_; }
  const DecisionRule& rule() const { return rule_; }
  double fixed_distance() const { return fixed_d_; }

 private:
  void build_code() {
    code_.emplace(ToeplitzCode::new_code(
        cfg_.n, cfg_.rate, cfg_.delta, derive_seed(cfg_.master_seed,
                                                   kCodeSeedIndex)));
  }

  BitString read_padded(const std::string& path) const {
    BitString bits = BitString::from_file(path, cfg_.n);
    if (bits.size() < cfg_.n) bits.append(BitString(cfg_.n - bits.size()));
    return bits;
  }

  ExperimentConfig cfg_;
  std::uint64_t m_ = 0;
  DecisionRule rule_;
  double fixed_d_ = 0;
  Verdict fixed_truth_ = Verdict::Equal;
  std::optional<ToeplitzCode> code_;
};

RunSummary summarize(const TrialRunner& runner,
                     const std::vector<TrialOutcome>& trials) {
  const ExperimentConfig& cfg = runner.config();
  RunSummary s;
  double sum = 0;
  std::uint64_t errors = 0;
  for (const TrialOutcome& t : trials) {
    sum += static_cast<double>(t.counts_d1);
    errors += t.verdict != t.truth;
  }
  const double count = static_cast<double>(trials.size());
  s.mean_d1 = sum / count;
  if (trials.size() > 1) {
    double ss = 0;
    for (const TrialOutcome& t : trials) {
      const double dev = static_cast<double>(t.counts_d1) - s.mean_d1;
      ss += dev * dev;
    }
    s.std_d1 = std::sqrt(ss / (count - 1.0));
  }
  s.error_rate = static_cast<double>(errors) / count;
  s.rule = runner.rule();
  s.threshold = s.rule.threshold;
  s.info = advantage_report(cfg.n, cfg.params.mu_total,
                            cfg.mu_rel_uncertainty, cfg.rate,
                            cfg.epsilon_target);
  return s;
}

}  // namespace

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Equal: return "equal";
    case CaseKind::WorstCase: return "worst_case";
    case CaseKind::RandomPair: return "random_pair";
    case CaseKind::FilePair: return "file_pair";
  }
  return "unknown";
}

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::Aggregate ? "aggregate" : "per_pulse";
}

void ExperimentConfig::validate() const {
  require(n >= 1, "n must be >= 1");
  require(rate > 0 && rate <= 1, "rate must be in (0, 1]");
  require(delta > 0 && delta < 0.5, "delta must be in (0, 0.5)");
  params.validate();
  require(repetitions >= 1, "repetitions must be >= 1");
  require(mu_rel_uncertainty >= 0 && mu_rel_uncertainty <= 1,
          "mu_rel_uncertainty must be in [0, 1]");
  require(epsilon_target >= 0 && epsilon_target < 1,
          "epsilon_target must be in [0, 1)");
  if (sampling_mode == SamplingMode::PerPulse)
    require(codeword_length(n, rate) <= kPerPulseMaxSlots,
            "sampling_mode per_pulse is limited to 2^24 codeword slots");
  if (case_kind == CaseKind::FilePair)
    require(!path_a.empty() && !path_b.empty(),
            "case_kind file_pair needs both input paths");
}

CountsPair sample_counts(const SystemParams& params, std::uint64_t m, double d,
                         SamplingMode mode, std::uint64_t seed) {
  // Validates params, m, and d, and supplies the aggregate means.
  const DetectionMeans means = expected_counts(params, m, d);
  CounterRng rng(seed);
  if (mode == SamplingMode::Aggregate) {
    CountsPair counts;
    counts.d1 = poisson_sample(means.lambda_d1, rng);
    counts.d0 = poisson_sample(means.lambda_d0, rng);
    return counts;
  }
  if (m > kPerPulseMaxSlots)
    throw std::invalid_argument(
        "sample_counts: per_pulse sampling is limited to 2^24 slots");
  return per_pulse_counts(params, m, d, rng);
}

TrialOutcome run_trial(const ExperimentConfig& config,
                       std::uint64_t trial_index) {
  return TrialRunner(config).run(trial_index);
}

std::vector<TrialOutcome> run_trials(const ExperimentConfig& config) {
  const TrialRunner runner(config);
  std::vector<TrialOutcome> trials;
  trials.reserve(config.repetitions);
  for (std::uint64_t t = 0; t < config.repetitions; ++t)
    trials.push_back(runner.run(t));
  return trials;
}

RunSummary run_experiment(const ExperimentConfig& config) {
  const TrialRunner runner(config);
  std::vector<TrialOutcome> trials;
  trials.reserve(config.repetitions);
  for (std::uint64_t t = 0; t < config.repetitions; ++t)
    trials.push_back(runner.run(t));
  return summarize(runner, trials);
}

FileCompareResult compare_files(const std::string& path_a,
                                const std::string& path_b,
                                ExperimentConfig config) {
  config.case_kind = CaseKind::FilePair;
  config.path_a = path_a;
  config.path_b = path_b;
  const TrialRunner runner(config);
  std::vector<TrialOutcome> trials;
  trials.reserve(config.repetitions);
  for (std::uint64_t t = 0; t < config.repetitions; ++t)
    trials.push_back(runner.run(t));
  FileCompareResult result;
  result.verdict = trials.front().verdict;
  result.summary = summarize(runner, trials);
  result.distance_fraction = runner.fixed_distance();
  return result;
}

std::vector<SweepCell> sweep(const ExperimentConfig& base,
                             const std::vector<std::uint64_t>& n_values,
                             const std::vector<double>& arm_loss_db_values,
                             const std::vector<CaseKind>& cases,
                             unsigned threads) {
  if (n_values.empty() || arm_loss_db_values.empty() || cases.empty())
    throw std::invalid_argument("sweep: every grid axis needs a value");
  for (CaseKind kind : cases)
    if (kind == CaseKind::FilePair)
      throw std::invalid_argument("sweep: file_pair cells are not sweepable");

  std::vector<SweepCell> cells(n_values.size() * arm_loss_db_values.size() *
                               cases.size());
  std::size_t index = 0;
  for (std::uint64_t n : n_values)
    for (double loss : arm_loss_db_values)
      for (CaseKind kind : cases) {
        cells[index].n = n;
        cells[index].arm_loss_db = loss;
        cells[index].case_kind = kind;
        ++index;
      }

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepCell& cell = cells[i];
      ExperimentConfig cfg = base;
      cfg.n = cell.n;
      cfg.params.arm_loss_db_a = cell.arm_loss_db;
      cfg.params.arm_loss_db_b = cell.arm_loss_db;
      cfg.case_kind = cell.case_kind;
      cfg.master_seed = derive_seed(base.master_seed, i);
      try {
        cell.summary = run_experiment(cfg);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };

  const unsigned pool = threads == 0 ? 1 : threads;
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(pool);
    for (unsigned w = 0; w < pool; ++w) workers.emplace_back(worker);
    for (std::thread& w : workers) w.join();
  }
  return cells;
}

}  // namespace qfp

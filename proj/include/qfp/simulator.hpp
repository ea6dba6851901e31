#ifndef QFP_SIMULATOR_HPP
#define QFP_SIMULATOR_HPP

// End-to-end protocol runs: realize each comparison case's codeword
// distance, sample detector counts, apply the referee rule, and aggregate
// repeated trials into summaries and sweep tables.
//
// Seed schedule (the determinism contract): trial t of a run works under
// seed_t = derive_seed(master_seed, t), with substream 0 feeding the detector
// samples and substreams 1 and 2 the two random inputs.  The input code's
// band lives on the reserved substream derive_seed(master_seed, ~0).  Sweep
// cell i (row-major: n outer, loss middle, case inner) runs a copy of the
// base config under master_seed = derive_seed(base.master_seed, i), so any
// worker count produces the same table.

#include <cstdint>
#include <string>
#include <vector>

#include "qfp/decision.hpp"
#include "qfp/info.hpp"
#include "qfp/optics.hpp"

namespace qfp {

enum class CaseKind { Equal, WorstCase, RandomPair, FilePair };
enum class SamplingMode { Aggregate, PerPulse };

// "equal", "worst_case", "random_pair", "file_pair".
std::string to_string(CaseKind kind);
// "aggregate", "per_pulse".
std::string to_string(SamplingMode mode);

struct ExperimentConfig {
  std::uint64_t n = 0;  // input length in bits
  double rate = 0;      // code rate, m = ceil(n / rate)
  double delta = 0;     // design distance and worst-case flip fraction
  SystemParams params;
  CaseKind case_kind = CaseKind::Equal;
  std::string path_a;  // FilePair inputs
  std::string path_b;
  std::uint64_t repetitions = 1;
  std::uint64_t master_seed = 0;
  SamplingMode sampling_mode = SamplingMode::Aggregate;
  double mu_rel_uncertainty = 0;  // width of the reported Q band
  double epsilon_target = 0;      // error budget the classical limit is held to

  // Throws std::invalid_argument naming the offending field.  The per-pulse
  // sampler is refused beyond 2^24 codeword slots.
  void validate() const;
};

struct TrialOutcome {
  std::int64_t counts_d1 = 0;
  std::int64_t counts_d0 = 0;
  Verdict verdict = Verdict::Equal;
  Verdict truth = Verdict::Equal;
  DecisionRule rule;
  // Realized codeword distance fraction behind the sampled counts.
  double distance_fraction = 0;
};

struct RunSummary {
  double mean_d1 = 0;
  double std_d1 = 0;  // sample standard deviation (n - 1), the error bar
  double error_rate = 0;
  std::int64_t threshold = 0;
  DecisionRule rule;  // analytic rule shared by every trial
  InfoReport info;
};

struct CountsPair {
  std::int64_t d1 = 0;
  std::int64_t d0 = 0;
};

struct FileCompareResult {
  Verdict verdict = Verdict::Equal;
  RunSummary summary;
  // Measured codeword distance between the two encoded inputs.
  double distance_fraction = 0;
};

struct SweepCell {
  std::uint64_t n = 0;
  double arm_loss_db = 0;  // per-arm fibre loss applied to both arms
  CaseKind case_kind = CaseKind::Equal;
  RunSummary summary;
  std::string error;  // nonempty if this cell failed; the sweep continues
};

// One stochastic readout of both detectors at codeword distance fraction d.
// Aggregate mode draws the two Poisson totals directly from expected_counts;
// PerPulse walks every slot (round(d * m) of them in the different-phase
// state) with signal and dark Bernoulli draws per detector, and matches the
// aggregate means exactly whenever d * m is an integer.
CountsPair sample_counts(const SystemParams& params, std::uint64_t m, double d,
                         SamplingMode mode, std::uint64_t seed);

// One full protocol round under the documented seed schedule.  Equal runs at
// d = 0, WorstCase at round(delta * m) flipped positions, RandomPair encodes
// two fresh random inputs through the code and measures their distance,
// FilePair does the same for file contents truncated or zero-padded to n.
TrialOutcome run_trial(const ExperimentConfig& config,
                       std::uint64_t trial_index);

// All repetitions, in trial order.  Shares the code and the file distance
// across trials instead of rebuilding them per call.
std::vector<TrialOutcome> run_trials(const ExperimentConfig& config);

// Mean/spread/error aggregation over run_trials plus the information report.
RunSummary run_experiment(const ExperimentConfig& config);

// Fingerprint comparison of two files; the verdict is trial 0's.
FileCompareResult compare_files(const std::string& path_a,
                                const std::string& path_b,
                                ExperimentConfig config);

// Cross product of input sizes, per-arm losses, and cases, one summary per
// cell in row-major order.  Cells run independently (up to `threads` at a
// time) on derived seeds; a failing cell records its error and the sweep
// carries on.
std::vector<SweepCell> sweep(const ExperimentConfig& base,
                             const std::vector<std::uint64_t>& n_values,
                             const std::vector<double>& arm_loss_db_values,
                             const std::vector<CaseKind>& cases,
                             unsigned threads);

}  // namespace qfp

#endif  // QFP_SIMULATOR_HPP

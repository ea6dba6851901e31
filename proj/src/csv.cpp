#include "qfp/csv.hpp"

#include <array>
#include <charconv>

namespace qfp {

namespace {

// Keep error text inside one CSV field.
std::string squash_separators(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf;
  const std::to_chars_result res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string simulate_csv(const std::vector<SimulateBlock>& blocks) {
  std::string out = "trial,case,counts_d1,counts_d0,threshold,verdict,truth\n";
  for (const SimulateBlock& block : blocks) {
    std::uint64_t trial = 0;
    for (const TrialOutcome& t : block.trials) {
      out += std::to_string(trial++);
      out += ',';
      out += to_string(block.kind);
      out += ',';
      out += std::to_string(t.counts_d1);
      out += ',';
      out += std::to_string(t.counts_d0);
      out += ',';
      out += std::to_string(t.rule.threshold);
      out += ',';
      out += to_string(t.verdict);
      out += ',';
      out += to_string(t.truth);
      out += '\n';
    }
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::string out =
      "n,m,mu,arm_loss_db,case,mean_d1,std_d1,threshold,epsilon,q_bits,"
      "c_limit_bits,c_best_bits,gamma,error\n";
  for (const SweepCell& cell : cells) {
    out += std::to_string(cell.n);
    out += ',';
    const bool ok = cell.error.empty();
    const RunSummary& s = cell.summary;
    if (ok) out += std::to_string(s.info.m);
    out += ',';
    if (ok) out += format_double(s.info.mu);
    out += ',';
    out += format_double(cell.arm_loss_db);
    out += ',';
    out += to_string(cell.case_kind);
    out += ',';
    if (ok) out += format_double(s.mean_d1);
    out += ',';
    if (ok) out += format_double(s.std_d1);
    out += ',';
    if (ok) out += std::to_string(s.threshold);
    out += ',';
    if (ok) out += format_double(s.rule.epsilon);
    out += ',';
    if (ok) out += format_double(s.info.q_bits);
    out += ',';
    if (ok) out += format_double(s.info.c_limit_bits);
    out += ',';
    if (ok) out += format_double(s.info.c_best_known_bits);
    out += ',';
    if (ok) out += format_double(s.info.gamma);
    out += ',';
    out += squash_separators(cell.error);
    out += '\n';
  }
  return out;
}

}  // namespace qfp

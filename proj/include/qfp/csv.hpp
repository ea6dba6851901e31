#ifndef QFP_CSV_HPP
#define QFP_CSV_HPP

// CSV emission for the two experiment table schemas, with locale-independent
// shortest round-trip number formatting.

#include <string>
#include <vector>

#include "qfp/simulator.hpp"

namespace qfp {

// Shortest decimal string that parses back to exactly `value`; always uses
// '.' regardless of locale.
std::string format_double(double value);

struct SimulateBlock {
  CaseKind kind = CaseKind::Equal;
  std::vector<TrialOutcome> trials;
};

// Header: trial,case,counts_d1,counts_d0,threshold,verdict,truth
// One row per trial; trial numbering restarts with each case block.
std::string simulate_csv(const std::vector<SimulateBlock>& blocks);

// Header: n,m,mu,arm_loss_db,case,mean_d1,std_d1,threshold,epsilon,q_bits,
// c_limit_bits,c_best_bits,gamma,error
// Failed cells leave the summary columns empty and carry the error text
// (with separators squashed) in the final column.
std::string sweep_csv(const std::vector<SweepCell>& cells);

}  // namespace qfp

#endif  // QFP_CSV_HPP

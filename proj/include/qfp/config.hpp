#ifndef QFP_CONFIG_HPP
#define QFP_CONFIG_HPP

// Flat `key = value` experiment configs with # comments: nineteen keys
// mirroring ExperimentConfig and SystemParams, each validated before any
// work starts.

#include <string>
#include <vector>

#include "qfp/simulator.hpp"

namespace qfp {

// Parses config text, then applies `overrides` ("key=value" entries from
// --set flags) on top, replacing file values.  Every key must be known,
// appear at most once in the text, and all nineteen must be present in the
// end; violations throw std::invalid_argument naming the key.  The result is
// validated before it is returned.
ExperimentConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides = {});

// parse_config over a file's contents; unreadable paths throw
// std::invalid_argument.
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// Config vocabulary: equal | worst_case | random_pair.  file_pair is
// deliberately not accepted here; file comparisons enter through the
// fingerprint command's positional paths.
CaseKind parse_case_kind(const std::string& label);

// aggregate | per_pulse.
SamplingMode parse_sampling_mode(const std::string& label);

}  // namespace qfp

#endif  // QFP_CONFIG_HPP

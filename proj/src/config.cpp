#include "qfp/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qfp {

namespace {

const char* const kKeys[] = {
    "n",           "rate",          "delta",
    "mu_total",    "mu_rel_uncertainty", "rep_rate_hz",
    "dark_rate_hz", "window_s",     "det_efficiency",
    "visibility",  "arm_loss_db_a", "arm_loss_db_b",
    "bs_transmittance_a", "bs_transmittance_b", "epsilon_target",
    "repetitions", "master_seed",   "sampling_mode",
    "case_kind"};

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

bool known_key(const std::string& key) {
  for (const char* k : kKeys)
    if (key == k) return true;
  return false;
}

std::string trim(const std::string& s) {
  std::size_t first = 0;
  std::size_t last = s.size();
  while (first < last && std::isspace(static_cast<unsigned char>(s[first])))
    ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(s[last - 1])))
    --last;
  return s.substr(first, last - first);
}

using KeyValues = std::map<std::string, std::string>;

void add_entry(KeyValues& kv, const std::string& key, const std::string& value,
               bool allow_replace) {
  if (key.empty()) fail("empty key");
  if (!known_key(key)) fail("unknown key '" + key + "'");
  if (!allow_replace && kv.count(key)) fail("duplicate key '" + key + "'");
  kv[key] = value;
}

KeyValues parse_pairs(const std::string& text,
                      const std::vector<std::string>& overrides) {
  KeyValues kv;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail("line " + std::to_string(lineno) + ": expected key = value, got '" +
           line + "'");
    add_entry(kv, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
              /*allow_replace=*/false);
  }
  for (const std::string& entry : overrides) {
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
      fail("override '" + entry + "': expected key=value");
    add_entry(kv, trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)),
              /*allow_replace=*/true);
  }
  for (const char* key : kKeys)
    if (!kv.count(key)) fail(std::string("missing key '") + key + "'");
  return kv;
}

double get_double(const KeyValues& kv, const char* key) {
  const std::string& value = kv.at(key);
  try {
    std::size_t pos = 0;
    const double parsed = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return parsed;
  } catch (const std::exception&) {
    fail(std::string("key '") + key + "': '" + value + "' is not a number");
  }
}

std::uint64_t get_u64(const KeyValues& kv, const char* key) {
  const std::string& value = kv.at(key);
  try {
    if (value.empty() || value[0] == '-')
      throw std::invalid_argument("negative");
    std::size_t pos = 0;
    const std::uint64_t parsed = std::stoull(value, &pos, 10);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return parsed;
  } catch (const std::exception&) {
    fail(std::string("key '") + key + "': '" + value +
         "' is not a nonnegative integer");
  }
}

}  // namespace

CaseKind parse_case_kind(const std::string& label) {
  if (label == "equal") return CaseKind::Equal;
  if (label == "worst_case") return CaseKind::WorstCase;
  if (label == "random_pair") return CaseKind::RandomPair;
  fail("key 'case_kind': '" + label +
       "' is not one of equal | worst_case | random_pair");
}

SamplingMode parse_sampling_mode(const std::string& label) {
  if (label == "aggregate") return SamplingMode::Aggregate;
  if (label == "per_pulse") return SamplingMode::PerPulse;
  fail("key 'sampling_mode': '" + label +
       "' is not one of aggregate | per_pulse");
}

ExperimentConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides) {
  const KeyValues kv = parse_pairs(text, overrides);
  ExperimentConfig cfg;
  cfg.n = get_u64(kv, "n");
  cfg.rate = get_double(kv, "rate");
  cfg.delta = get_double(kv, "delta");
  cfg.params.mu_total = get_double(kv, "mu_total");
  cfg.mu_rel_uncertainty = get_double(kv, "mu_rel_uncertainty");
  cfg.params.rep_rate_hz = get_double(kv, "rep_rate_hz");
  cfg.params.dark_rate_hz = get_double(kv, "dark_rate_hz");
  cfg.params.window_s = get_double(kv, "window_s");
  cfg.params.det_efficiency = get_double(kv, "det_efficiency");
  cfg.params.visibility = get_double(kv, "visibility");
  cfg.params.arm_loss_db_a = get_double(kv, "arm_loss_db_a");
  cfg.params.arm_loss_db_b = get_double(kv, "arm_loss_db_b");
  cfg.params.bs_transmittance_a = get_double(kv, "bs_transmittance_a");
  cfg.params.bs_transmittance_b = get_double(kv, "bs_transmittance_b");
  cfg.epsilon_target = get_double(kv, "epsilon_target");
  cfg.repetitions = get_u64(kv, "repetitions");
  cfg.master_seed = get_u64(kv, "master_seed");
  cfg.sampling_mode = parse_sampling_mode(kv.at("sampling_mode"));
  cfg.case_kind = parse_case_kind(kv.at("case_kind"));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

}  // namespace qfp

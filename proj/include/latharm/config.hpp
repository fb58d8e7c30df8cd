#pragma once

#include "latharm/symbol.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace latharm {

/// Invalid experiment configuration: malformed JSON, unknown key, bad value,
/// or an unparseable symbol spec. The CLI maps this to its config exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse a symbol spec like "riesz:j=1", "interval:a=0.2,b=0.7",
// "wavecos:t=2", or "sum(exp:k=1,exp:k=-1)" into a Symbol of dimension d.
Symbol parse_symbol_spec(const std::string& spec, int dim);

/// One experiment, fully described: command plus every parameter it needs.
/// Unused fields keep their defaults and are omitted from the normalized
/// serialization.
struct ExperimentConfig {
  std::string command;
  std::string symbol;
  int dim = 1;
  double tol = 1e-8;
  std::string out = ".";

  int box = 0;      // centered support / kernel radius
  int window = 0;   // centered output radius
  long grid = 0;    // torus quadrature size N
  long cap = 0;     // doubling cap override (0 = dimension default)
  bool accept_at_cap = false;

  double alpha = 0.0;           // verify-weak exponent
  int order = 2;                // verify-mikhlin top derivative order
  std::string scheme = "analytic";  // verify-mikhlin: analytic | fd
  int shift_cap = 2;            // verify-hormander shift range
  int radius = 0;               // verify-hormander outer radius R

  std::string p, q;             // norm / strichartz exponents
  int trials = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;

  std::vector<double> times;    // wave output times
  std::string f = "delta";      // wave initial displacement spec
  std::string g = "zero";       // wave initial velocity spec
  int support = 4;              // built-in data radius

  std::string input;            // apply: path of the input grid CSV
};

// Strict parse: unknown keys are rejected by name, values are type- and
// range-checked, defaults are filled. parse(serialize(c)) == c.
ExperimentConfig parse_config(const std::string& text);
nlohmann::json serialize_config(const ExperimentConfig& config);

struct RunOptions {
  std::filesystem::path out_dir;  // empty = the config's `out`
  bool quiet = false;
};

// Execute the configured command, writing report files into the output
// directory. Returns the process exit code: 0 success, 2 config error,
// 3 numerical non-convergence, 4 I/O error (1 = failed selftest criteria).
int run_experiment(const ExperimentConfig& config, const RunOptions& run);

}  // namespace latharm

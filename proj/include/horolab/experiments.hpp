#pragma once

// Experiment configuration, dispatch to the modules and report writers used
// by the command-line front end.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "horolab/arith.hpp"
#include "horolab/parallel.hpp"

namespace horolab {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Subcommand { weyl, weylmodel, lattice, horocycle, continuous, kloosterman, sieve, satotate, quadforms, cmaudit };

const std::vector<std::pair<std::string, Subcommand>>& subcommand_names();
std::string to_string(Subcommand s);
Subcommand parse_subcommand(const std::string& name);  // throws UsageError

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::weyl;

  // lattice, Weyl sums and models
  i64 q = 1009;
  i64 b = 0;                // 0: draw `samples` random b
  std::vector<i64> bvec;    // tuple sets
  i64 samples = 1;
  std::string test = "eisenstein";  // delta | eisenstein | constant | maass:<file>
  double x0 = 0.0, y0 = 1.0;
  i64 r0_num = 0, r0_den = 1;
  std::string kernel = "holomorphic";  // holomorphic | gaussian
  int sign = -1;
  double C = 10.0;

  // continuous horocycle
  double T = 200.0;
  double y = 1.6180339887498949;
  double q_exponent = 0.99;

  // discrepancy
  int levels = 4;
  double ymax = 10.0;

  // Kloosterman
  i64 ka = 1, kb = 1;
  i64 H = 0, S = 0, Q = 0;  // H > 0 switches to the averaged sum

  // sieve
  double R1 = 50.0, R2 = 400.0;
  i64 instances = 20;
  double z = 1000.0;
  i64 scan_limit = 100000;
  double gamma = 0.25;

  // Sato-Tate
  std::string form = "tau";  // tau | cm
  i64 disc = -23;
  i64 char_index = 1;
  i64 N = 100000;
  std::vector<i64> zs = {1000, 10000, 100000};

  // quadratic forms: disc != 0 classifies forms, otherwise Heegner count for q

  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out_path;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
};

/// Throws UsageError describing the first invalid parameter.
void validate(const ExperimentConfig& cfg);

/// (key, value) pairs describing the configuration, as written to JSON.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);

using Cell = std::variant<i64, double, std::string, bool>;

struct ExperimentReport {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> failures;  // falsified claims with witnesses
  double runtime_seconds = 0.0;

  bool falsified() const { return !failures.empty(); }
};

ExperimentReport run_experiment(const ExperimentConfig& cfg, const WorkerPool& pool);

/// Doubles are printed with 15 significant digits.
std::string format_cell(const Cell& c);

void write_csv(const ExperimentReport& report, std::ostream& os);
void write_json(const ExperimentConfig& cfg, const ExperimentReport& report, std::ostream& os);

/// Validate, run and write the report. Returns 0 on success, 1 when a
/// mathematical claim was falsified and 2 on usage or domain errors.
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace horolab

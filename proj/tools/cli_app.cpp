#include "cli_app.hpp"

#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "horolab/experiments.hpp"

namespace horolab {

namespace {

struct RawOptions {
  std::string r0 = "0/1";
  std::string out;
  std::string format;
};

void parse_rational(const std::string& s, i64& num, i64& den) {
  const auto slash = s.find('/');
  try {
    num = std::stoll(s.substr(0, slash));
    den = slash == std::string::npos ? 1 : std::stoll(s.substr(slash + 1));
  } catch (const std::exception&) {
    throw UsageError("--r0 expects p/q, got '" + s + "'");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  RawOptions raw;

  CLI::App app{"horolab: horocycle equidistribution experiments"};
  app.set_config("--config", "", "flat key = value file; flags take precedence");
  app.require_subcommand(1);

  app.add_option("--q", cfg.q, "modulus");
  app.add_option("--b", cfg.b, "shift; 0 draws --samples random units");
  app.add_option("--bvec", cfg.bvec, "comma-separated shifts for tuple sets")->delimiter(',');
  app.add_option("--samples", cfg.samples, "number of random shifts");
  app.add_option("--test", cfg.test, "delta | eisenstein | constant | maass:<file>");
  app.add_option("--x0", cfg.x0);
  app.add_option("--y0", cfg.y0);
  app.add_option("--r0", raw.r0, "rational shift p/q");
  app.add_option("--kernel", cfg.kernel, "holomorphic | gaussian");
  app.add_option("--sign", cfg.sign, "lattice sign, +1 or -1");
  app.add_option("--C", cfg.C, "coordinate cutoff n_i <= C q");
  app.add_option("--T", cfg.T, "horocycle height 1/T");
  app.add_option("--y", cfg.y, "continuous horocycle multiplier");
  app.add_option("--q-exponent", cfg.q_exponent, "Q = T^exponent");
  app.add_option("--levels", cfg.levels, "dyadic box levels");
  app.add_option("--ymax", cfg.ymax, "box family height cap");
  app.add_option("--ka", cfg.ka, "Kloosterman a");
  app.add_option("--kb", cfg.kb, "Kloosterman b");
  app.add_option("--H", cfg.H, "averaged Kloosterman: h range");
  app.add_option("--S", cfg.S, "averaged Kloosterman: s range");
  app.add_option("--Q", cfg.Q, "averaged Kloosterman: q range");
  app.add_option("--R1", cfg.R1, "inner annulus radius");
  app.add_option("--R2", cfg.R2, "outer annulus radius");
  app.add_option("--instances", cfg.instances, "random sieve instances");
  app.add_option("--z", cfg.z, "case split parameter");
  app.add_option("--scan-limit", cfg.scan_limit, "classify 1..limit");
  app.add_option("--gamma", cfg.gamma, "z = X^gamma");
  app.add_option("--form", cfg.form, "tau | cm");
  app.add_option("--disc", cfg.disc, "discriminant");
  app.add_option("--char", cfg.char_index, "class group character index");
  app.add_option("--N", cfg.N, "coefficient table length");
  app.add_option("--zs", cfg.zs, "comma-separated z values")->delimiter(',');
  app.add_option("--seed", cfg.seed);
  app.add_option("--threads", cfg.threads, "worker threads")->envname("HOROLAB_THREADS");
  app.add_option("--out", raw.out, "csv | json | output path");
  app.add_option("--format", raw.format, "csv | json");

  const std::map<std::string, std::string> blurb = {
      {"weyl", "Weyl sums over horocycle pair/tuple sets"},
      {"weylmodel", "lattice model of the pair sum for tau"},
      {"lattice", "shortest vectors of shift lattices"},
      {"horocycle", "box discrepancy of horocycle points"},
      {"continuous", "continuous horocycle pair integral"},
      {"kloosterman", "Kloosterman sums and averages"},
      {"sieve", "Selberg bound, case split and main sum"},
      {"satotate", "Sato-Tate partial sums"},
      {"quadforms", "class groups, cycles and Heegner forms"},
      {"cmaudit", "checks on the CM counterexample"},
  };
  for (const auto& [name, sub] : subcommand_names()) {
    auto* s = app.add_subcommand(name, blurb.at(name));
    s->fallthrough();
    s->callback([&cfg, sub = sub] { cfg.subcommand = sub; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    app.exit(e, msg, msg);
    err << msg.str();
    return 2;
  }

  try {
    parse_rational(raw.r0, cfg.r0_num, cfg.r0_den);
    auto set_format = [&](const std::string& f) {
      if (f == "csv")
        cfg.format = OutputFormat::csv;
      else if (f == "json")
        cfg.format = OutputFormat::json;
      else
        throw UsageError("unknown format '" + f + "'");
    };
    if (raw.out == "csv" || raw.out == "json") {
      set_format(raw.out);
    } else {
      cfg.out_path = raw.out;
      if (raw.format.empty() && raw.out.ends_with(".json")) set_format("json");
    }
    if (!raw.format.empty()) set_format(raw.format);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  return run(cfg, out, err);
}

}  // namespace horolab

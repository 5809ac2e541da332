// Acceptance run: one PASS/FAIL line per criterion.
//
//   horolab_acceptance [--threads N] [--known-failure K]...
//
// Exit status is 0 when every criterion passes except those listed with
// --known-failure (which are still reported as FAIL).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli_app.hpp"
#include "horolab/experiments.hpp"
#include "horolab/expsums.hpp"
#include "horolab/heckeforms.hpp"
#include "horolab/horocycle.hpp"
#include "horolab/lattice.hpp"
#include "horolab/quadforms_cm.hpp"
#include "horolab/sieve_st.hpp"

using namespace horolab;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  i64 uniform(i64 lo, i64 hi) { return lo + static_cast<i64>(gen_() % static_cast<u64>(hi - lo + 1)); }
  double real(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// shortest nonzero vector of {n1 + b n2 = 0 mod q} by enumeration; a
// shortest vector has |n2| <= s <= sqrt(2q) and |n1| < q/2 for q >= 5
i64 brute_min(i64 q, i64 b) {
  i64 best = q * q;
  const i64 lim = static_cast<i64>(std::sqrt(2.0 * static_cast<double>(q))) + 2;
  for (i64 n2 = -lim; n2 <= lim; ++n2) {
    const i64 r = floor_mod(-b * n2, q);
    for (i64 n1 : {r, r - q}) {
      if (n1 == 0 && n2 == 0) continue;
      best = std::min(best, n1 * n1 + n2 * n2);
    }
  }
  return best;
}

// shared data
struct Shared {
  WorkerPool pool{1};
  CoeffTable tau;
  std::vector<std::pair<i64, i64>> tested_pairs;  // (q, s^2) for the Minkowski check
};

Outcome crit1(Shared& sh) {
  const auto t0 = Clock::now();
  Rng rng(1);
  i64 pairs = 0, mismatches = 0;
  for (i64 q : prime_sieve(2000)) {
    if (q < 5) continue;
    for (int i = 0; i < 20; ++i) {
      const i64 b = rng.uniform(1, q - 1);
      const i64 s2 = s_min_squared(q, b);
      ++pairs;
      if (s2 != brute_min(q, b)) ++mismatches;
      sh.tested_pairs.emplace_back(q, s2);
    }
  }
  const double secs = since(t0);
  return {mismatches == 0 && secs < 60.0,
          fmt("%lld pairs, %lld mismatches, %.2f s (limit 60 s, exact equality)", (long long)pairs,
              (long long)mismatches, secs)};
}

Outcome crit2(Shared& sh) {
  Rng rng(2);
  i64 done = 0, failures = 0, skipped = 0;
  std::string witness;
  while (done < 10000) {
    const i64 q = rng.uniform(5, 100000);
    const i64 b = rng.uniform(1, q - 1);
    const i64 d = rng.uniform(1, 100);
    if (gcd(b, q) != 1 || gcd(d, q) != 1) continue;
    const MinLemmaReport r = check_min_lemma(q, b, d);
    ++done;
    if (r.skipped) {
      ++skipped;
      continue;
    }
    sh.tested_pairs.emplace_back(q, r.s_b);
    sh.tested_pairs.emplace_back(q, r.s_bd);
    if (!r.all_pass()) {
      ++failures;
      if (witness.empty()) witness = "; first failure " + r.describe();
    }
  }
  return {failures == 0, fmt("%lld triples, %lld failures, %lld skipped", (long long)done, (long long)failures,
                             (long long)skipped) + witness};
}

Outcome crit3(Shared& sh) {
  i64 bad = 0;
  double worst = 0.0;
  for (const auto& [q, s2] : sh.tested_pairs) {
    if (!minkowski_bound_holds(q, s2)) ++bad;
    worst = std::max(worst, static_cast<double>(s2) / (2.0 / std::sqrt(3.0) * static_cast<double>(q)));
  }
  return {bad == 0, fmt("%zu pairs, %lld violations, max s^2 / ((2/sqrt 3) q) = %.6f", sh.tested_pairs.size(),
                        (long long)bad, worst)};
}

// 20 random b per q with s(q;b) >= q^{1/4}
std::vector<i64> sample_shifts(i64 q, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<i64> out;
  while (out.size() < 20) {
    const i64 b = rng.uniform(2, q - 2);
    if (s_min(q, b) < std::pow(static_cast<double>(q), 0.25)) continue;
    out.push_back(b);
  }
  return out;
}

Outcome crit4(Shared& sh) {
  const auto t0 = Clock::now();
  const TestFunction e = TestFunction::eisenstein(Bump{});
  const WorkerPool pool8(8);
  std::vector<double> med;
  double target = 0;
  for (i64 q : {1009, 10007, 100003}) {
    std::vector<double> err;
    for (i64 b : sample_shifts(q, 7)) {
      const WeylReport w = weyl_sum(pair_points(q, b), e, e, pool8);
      err.push_back(w.abs_error);
      target = w.target;
    }
    med.push_back(median(err));
  }
  (void)sh;
  const double secs = since(t0);
  const bool mono = med[0] > med[1] && med[1] > med[2];
  return {mono && med[2] < 0.05 * target && secs < 600,
          fmt("medians %.4g, %.4g, %.4g; target %.5f; last/target = %.4f (limit 0.05); %.1f s", med[0], med[1],
              med[2], target, med[2] / target, secs)};
}

Outcome crit5(Shared& sh) {
  const KernelG G = KernelG::holomorphic(12, 12);
  std::vector<double> diag, med;
  std::string detail;
  for (i64 q : {1009, 10007, 100003}) {
    const DiagonalReport d = diagonal_term(q, (q + 1) / 2, sh.tau, sh.tau, G);
    diag.push_back(std::abs(d.value));
    std::vector<double> v;
    for (i64 b : sample_shifts(q, 3)) {
      const LatticeModelConfig c{q, b, -1, 10.0, 1};
      v.push_back(std::abs(weyl_lattice_model(c, sh.tau, sh.tau, nullptr, G, sh.pool).value));
    }
    med.push_back(median(v));
    detail += fmt("q=%lld |diag|=%.4g median=%.4g ratio=%.2f; ", (long long)q, diag.back(), med.back(),
                  diag.back() / med.back());
  }
  const double spread = *std::max_element(diag.begin(), diag.end()) / *std::min_element(diag.begin(), diag.end());
  bool above = true;
  for (std::size_t i = 0; i < diag.size(); ++i) above = above && diag[i] > 10.0 * med[i];
  return {spread < 2.0 && above, detail + fmt("spread %.4f (limit 2), ratio limit 10", spread)};
}

Outcome crit6(Shared& sh) {
  const auto t0 = Clock::now();
  const KernelG G = KernelG::holomorphic(12, 12, 0.25, 1.0);
  const double C = 4.0;
  Rng rng(6);
  i64 cases = 0, bad = 0;
  double worst = 0.0;
  for (i64 q : prime_sieve(500)) {
    if (q < 3) continue;
    const i64 B = static_cast<i64>(std::floor(C * static_cast<double>(q)));
    std::vector<double> w1(B + 1), w2(B + 1);
    for (i64 n = 1; n <= B; ++n) {
      w1[n] = sh.tau.lam[n] * G.first(static_cast<double>(n) / q);
    }
    std::vector<std::complex<double>> g2(B + 1);
    for (i64 n = 1; n <= B; ++n) g2[n] = sh.tau.lam[n] * G.second(static_cast<double>(n) / q);
    for (int i = 0; i < 5; ++i) {
      const i64 b = rng.uniform(1, q - 1);
      for (int sign : {1, -1}) {
        // O(q^2) double loop; r tracks n1 + sign b n2 mod q incrementally
        const i64 step2 = floor_mod(sign * b, q);
        std::complex<double> direct = 0;
        i64 r2 = 0;
        for (i64 n2 = 1; n2 <= B; ++n2) {
          r2 = (r2 + step2) % q;
          std::complex<double> inner = 0;
          i64 r = r2;
          for (i64 n1 = 1; n1 <= B; ++n1) {
            r = r + 1 == q ? 0 : r + 1;
            if (r == 0) inner += w1[n1];
          }
          direct += inner * g2[n2];
        }
        direct /= static_cast<double>(q);
        const LatticeModelConfig c{q, b, sign, C, 1};
        const auto m = weyl_lattice_model(c, sh.tau, sh.tau, nullptr, G, sh.pool);
        const double rel = std::abs(m.value - direct) / std::abs(direct);
        worst = std::max(worst, rel);
        ++cases;
        if (!(rel <= 1e-9)) ++bad;
      }
    }
  }
  return {bad == 0, fmt("%lld cases, %lld above tolerance, worst relative error %.3g (limit 1e-9), %.1f s",
                        (long long)cases, (long long)bad, worst, since(t0))};
}

Outcome crit7(Shared& sh) {
  const i64 q = 10007;
  const KernelG G = KernelG::holomorphic(12, 12);
  const std::vector<std::pair<i64, i64>> vecs = {{1, 1}, {1, 2}, {1, 3}, {2, 3}, {1, 4}};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::string detail;
  bool shapes = true;
  for (const auto& [x1, x2] : vecs) {
    const i64 b = mulmod(x1, mod_inv(Residue(x2, q)).value(), q);  // (x1, x2) in {n1 = b n2}
    const DiagonalReport d = diagonal_term(q, b, sh.tau, sh.tau, G);
    shapes = shapes && d.s == std::sqrt(static_cast<double>(x1 * x1 + x2 * x2));
    const double ls = std::log(d.s), ld = std::log(std::abs(d.value));
    sx += ls;
    sy += ld;
    sxx += ls * ls;
    sxy += ls * ld;
    detail += fmt("s^2=%lld ", (long long)(x1 * x1 + x2 * x2));
  }
  const double n = static_cast<double>(vecs.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {shapes && slope <= -0.8, detail + fmt("slope %.4f (limit -0.8)", slope)};
}

Outcome crit8(Shared&) {
  Rng rng(8);
  i64 sums = 0, bad = 0;
  double worst = 0.0;
  for (i64 p : prime_sieve(10000)) {
    const KloostermanTable t(p);
    const double bound = 2.0 * std::sqrt(static_cast<double>(p));
    for (int i = 0; i < 20; ++i) {
      i64 a, b;
      if (p == 2) {
        a = b = 1;
      } else {
        a = rng.uniform(1, p - 1);
        b = rng.uniform(1, p - 1);
      }
      const double v = t(a, b);
      worst = std::max(worst, std::abs(v) / bound);
      ++sums;
      if (std::abs(v) > bound) ++bad;
    }
  }
  const double s113 = kloosterman(1, 1, 3);
  return {bad == 0 && std::abs(s113 + 1.0) <= 1e-12,
          fmt("%lld sums, %lld above 2 sqrt p, max |S|/(2 sqrt p) = %.6f; S(1,1;3) = %.15g (tolerance 1e-12)",
              (long long)sums, (long long)bad, worst, s113)};
}

Outcome crit9(Shared& sh) {
  Rng rng(9);
  const auto primes = prime_sieve(600);
  i64 fails = 0;
  double worst = 0.0;
  std::string witness;
  for (int i = 0; i < 200; ++i) {
    i64 q;
    do q = primes[static_cast<std::size_t>(rng.uniform(0, static_cast<i64>(primes.size()) - 1))];
    while (q < 50);
    const i64 b = rng.uniform(1, q - 1);
    const double R1 = rng.real(20.0, 100.0);
    const double R2 = R1 + rng.real(100.0, 500.0);
    const i64 a1 = rng.uniform(1, 6), a2 = rng.uniform(1, 6);
    const double y1 = rng.real(1.0, 6.0), y2 = rng.real(1.0, 6.0);
    const SieveSet S = lattice_sieve_set(q, b, R1, R2);
    const SelbergCheck c = selberg_bound_check(S, a1, a2, y1, y2, kSelbergConstant);
    worst = std::max(worst, c.ratio);
    if (!c.pass) {
      ++fails;
      if (witness.empty())
        witness = fmt("; witness q=%lld b=%lld R=[%.2f,%.2f] a=(%lld,%lld) y=(%.3f,%.3f) lhs=%lld rhs=%.4g",
                      (long long)q, (long long)b, R1, R2, (long long)a1, (long long)a2, y1, y2, (long long)c.lhs,
                      c.rhs);
    }
  }
  const SelbergCalibration cal = calibrate_selberg_constant({40, 80, 160});
  bool cases_ok = true;
  std::string scans;
  for (double z : {100.0, 1000.0, 10000.0}) {
    const CaseScan s = classify_scan(1000000, z, 1, sh.pool);
    cases_ok = cases_ok && s.ok();
    scans += fmt(" z=%g:%s", z, s.ok() ? "ok" : "FAILED");
  }
  return {fails == 0 && cal.max_ratio <= kSelbergConstant && cases_ok,
          fmt("200 instances, %lld failures, C = %.0f, max lhs/bound = %.3f, box calibration max = %.3f; case split "
              "on 1..10^6:",
              (long long)fails, kSelbergConstant, worst, cal.max_ratio) +
              scans + witness};
}

Outcome crit10(Shared& sh) {
  const double ll3 = std::log(std::log(1e3)), ll6 = std::log(std::log(1e6));
  const double dt = st_partial_sum(sh.tau, 1000000) - st_partial_sum(sh.tau, 1000);
  const double allow_t = 17.0 / 18.0 * (ll6 - ll3) + 0.2;
  const CoeffTable cm = cm_theta_table(-23, 1, 1000000);
  const double dc = st_partial_sum(cm, 1000000) - st_partial_sum(cm, 1000);
  const double allow_c = 0.75 * (ll6 - ll3) + 0.2;
  const ChebyshevReport ch = chebyshev_identity_check(100000);
  return {dt <= allow_t && dc <= allow_c && ch.pass && ch.min_margin >= -1e-12,
          fmt("tau: %.4f <= %.4f; CM(-23, order 3): %.4f <= %.4f; Chebyshev 10^5 grid min margin %.3g (limit -1e-12), "
              "identity error %.3g",
              dt, allow_t, dc, allow_c, ch.min_margin, ch.max_identity_error)};
}

Outcome crit11(Shared&) {
  i64 count_bad = 0, crit_bad = 0, imp_bad = 0, exceptions = 0, checked = 0;
  for (i64 q : prime_sieve(200)) {
    if (q < 3) continue;
    const HeegnerReport r = heegner_point_count(q, q <= 50);
    if (q % 4 == 3 && r.distinct_classes != (q + 1) / 2) ++count_bad;
    if (q % 4 == 1 && r.imprimitive_indices.size() != 2) ++imp_bad;
    if (q <= 50) {
      ++checked;
      crit_bad += r.criterion_failures;
      exceptions += r.imprimitive_exceptions;
    }
  }
  return {count_bad == 0 && crit_bad == 0 && imp_bad == 0,
          fmt("count mismatches %lld; criterion failures %lld over %lld primes q <= 50 (imprimitive coincidences "
              "reported separately: %lld); q = 1 mod 4 with != 2 imprimitive indices: %lld",
              (long long)count_bad, (long long)crit_bad, (long long)checked, (long long)exceptions, (long long)imp_bad)};
}

Outcome crit12(Shared&) {
  std::ostringstream out, err;
  const int code = run_cli({"cmaudit", "--out", "json"}, out, err);
  const auto j = nlohmann::json::parse(out.str());
  int green = 0;
  for (const auto& it : j["results"]) green += it["result"].get<bool>();
  return {code == 0 && green == 6 && j["results"].size() == 6,
          fmt("%d/6 items pass, exit code %d", green, code)};
}

Outcome crit13(Shared& sh) {
  const TestFunction phi = TestFunction::delta_density().centered();
  const AutomorphicFn f = [phi](HalfPlanePoint z) { return std::complex<double>(phi(z), 0.0); };
  std::vector<double> Ts = {200, 500, 1000, 2000};
  std::vector<i64> dens;
  bool within = true;
  double i200 = 0, i2000 = 0;
  for (double T : Ts) {
    ContinuousConfig c;
    c.T = T;
    c.y = std::numbers::phi;
    if (T == 200 || T == 2000) {
      const ContinuousReport r = continuous_pair_integral(c, f, f, sh.pool);
      (T == 200 ? i200 : i2000) = std::abs(r.value);
      dens.push_back(r.approx.denominator);
      within = within && r.approx.denominator <= r.Q;
    } else {
      const i64 Q = static_cast<i64>(std::floor(std::pow(T, c.q_exponent)));
      const RationalApprox a = best_rational(c.y, Q);
      dens.push_back(a.denominator);
      within = within && a.denominator <= Q;
    }
  }
  bool growing = true;
  for (std::size_t i = 1; i < dens.size(); ++i) growing = growing && dens[i] > dens[i - 1];
  return {i2000 < i200 && growing && within,
          fmt("|I(200)| = %.4g, |I(2000)| = %.4g; q at T = 200, 500, 1000, 2000: %lld, %lld, %lld, %lld (all <= T^0.99)",
              i200, i2000, (long long)dens[0], (long long)dens[1], (long long)dens[2], (long long)dens[3])};
}

// numeric comparison of two JSON reports, ignoring timings and the thread count
bool same_report(const nlohmann::json& a, const nlohmann::json& b, double& worst, std::string& where) {
  std::function<bool(const nlohmann::json&, const nlohmann::json&, const std::string&)> cmp =
      [&](const nlohmann::json& x, const nlohmann::json& y, const std::string& path) -> bool {
    if (x.is_number() && y.is_number()) {
      const double u = x.get<double>(), v = y.get<double>();
      const double d = std::abs(u - v) / std::max(1.0, std::abs(u));
      if (d > worst) {
        worst = d;
        where = path;
      }
      return d <= 1e-12;
    }
    if (x.type() != y.type()) return false;
    if (x.is_object()) {
      if (x.size() != y.size()) return false;
      bool ok = true;
      for (auto it = x.begin(); it != x.end(); ++it) {
        if (it.key() == "runtime_seconds" || it.key() == "seconds" || it.key() == "threads") continue;
        if (!y.contains(it.key())) return false;
        ok = cmp(it.value(), y[it.key()], path + "/" + it.key()) && ok;
      }
      return ok;
    }
    if (x.is_array()) {
      if (x.size() != y.size()) return false;
      bool ok = true;
      for (std::size_t i = 0; i < x.size(); ++i) ok = cmp(x[i], y[i], path + "/" + std::to_string(i)) && ok;
      return ok;
    }
    return x == y;
  };
  return cmp(a, b, "");
}

Outcome crit14(Shared&) {
  const std::vector<std::vector<std::string>> runs = {
      {"weyl", "--q", "10007", "--samples", "5", "--seed", "4", "--test", "eisenstein"},
      {"weyl", "--q", "1009", "--bvec", "1,2,5", "--test", "delta"},
      {"weylmodel", "--q", "1009", "--samples", "3", "--seed", "2"},
      {"lattice", "--q", "100003", "--samples", "50"},
      {"horocycle", "--q", "10007", "--b", "17"},
      {"continuous", "--T", "300", "--test", "delta"},
      {"kloosterman", "--q", "10007", "--samples", "20"},
      {"kloosterman", "--H", "10", "--S", "10", "--Q", "300"},
      {"sieve", "--q", "211", "--R1", "40", "--R2", "400", "--instances", "30", "--scan-limit", "300000"},
      {"satotate", "--N", "200000", "--zs", "1000,10000,200000"},
      {"satotate", "--form", "cm", "--N", "200000", "--zs", "1000,200000"},
      {"quadforms", "--disc", "-3299"},
      {"quadforms", "--disc", "229"},
      {"quadforms", "--q", "101", "--disc", "0"},
      {"cmaudit"},
  };
  std::set<std::string> covered;
  double worst = 0.0;
  std::string bad;
  for (const auto& base : runs) {
    covered.insert(base[0]);
    nlohmann::json rep[2];
    int codes[2];
    int k = 0;
    for (const char* th : {"1", "8"}) {
      auto args = base;
      args.insert(args.end(), {"--threads", th, "--out", "json"});
      std::ostringstream out, err;
      codes[k] = run_cli(args, out, err);
      rep[k] = nlohmann::json::parse(out.str(), nullptr, false);
      ++k;
    }
    std::string where;
    double w = 0.0;
    const bool same = codes[0] == codes[1] && !rep[0].is_discarded() && !rep[1].is_discarded() &&
                      same_report(rep[0], rep[1], w, where);
    worst = std::max(worst, w);
    if (!same) bad += " " + base[0] + (where.empty() ? "" : " at " + where);
  }
  return {bad.empty() && covered.size() == subcommand_names().size(),
          fmt("%zu runs over %zu/%zu subcommands, worst relative difference %.3g (limit 1e-12)", runs.size(),
              covered.size(), subcommand_names().size(), worst) +
              (bad.empty() ? "" : "; differing:" + bad)};
}

}  // namespace

int main(int argc, char** argv) {
  unsigned threads = 1;
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--threads") && i + 1 < argc)
      threads = static_cast<unsigned>(std::stoul(argv[++i]));
    else if (!std::strcmp(argv[i], "--known-failure") && i + 1 < argc)
      known.insert(std::stoi(argv[++i]));
    else {
      std::fprintf(stderr, "usage: %s [--threads N] [--known-failure K]...\n", argv[0]);
      return 2;
    }
  }

  Shared sh;
  sh.pool = WorkerPool(threads);
  const auto t0 = Clock::now();
  sh.tau = tau_table(1000040, sh.pool);
  std::printf("tau(1..1000040) computed in %.1f s\n", since(t0));
  std::fflush(stdout);

  const std::vector<std::pair<const char*, Outcome (*)(Shared&)>> criteria = {
      {"lattice minimum oracle", crit1},
      {"minima lemma", crit2},
      {"Minkowski-form bound", crit3},
      {"Weyl-sum decay trend", crit4},
      {"diagonal obstruction", crit5},
      {"lattice-model oracle", crit6},
      {"diagonal scaling", crit7},
      {"Kloosterman / Weil", crit8},
      {"sieve", crit9},
      {"Sato-Tate", crit10},
      {"Heegner counts", crit11},
      {"CM audit", crit12},
      {"continuous horocycle", crit13},
      {"determinism", crit14},
  };
  int failed = 0, gated = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second(sh);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2d %s: %s [%.1f s]%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(),
                since(start), !o.pass && known.count(id) ? " (known failure)" : "");
    std::fflush(stdout);
    if (!o.pass) {
      ++failed;
      if (!known.count(id)) ++gated;
    } else if (known.count(id)) {
      std::printf("note: criterion %d is listed as a known failure but passed\n", id);
    }
  }
  std::printf("%d/%zu criteria pass; %.1f s total\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
              since(t0));
  return gated == 0 ? 0 : 1;
}

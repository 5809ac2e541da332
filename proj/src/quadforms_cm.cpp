#include "horolab/quadforms_cm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace horolab {

std::string QuadForm::str() const {
  std::ostringstream os;
  os << "(" << a << "," << b << "," << c << ")";
  return os.str();
}

namespace {

i64 isqrt(i64 n) {
  if (n < 0) throw DomainError("isqrt of a negative number");
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(i64 n) { return n >= 0 && isqrt(n) * isqrt(n) == n; }

bool squarefree(i64 n) {
  n = std::abs(n);
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

// extended gcd: returns (g, u, v) with u*a + v*b = g >= 0
std::tuple<i64, i64, i64> ext_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_u = 1, u = 0, old_v = 0, v = 1;
  while (r != 0) {
    const i64 q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_u, u) = std::pair{u, old_u - q * u};
    std::tie(old_v, v) = std::pair{v, old_v - q * v};
  }
  if (old_r < 0) return {-old_r, -old_u, -old_v};
  return {old_r, old_u, old_v};
}

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

QuadForm normalize_definite(QuadForm f) {
  // bring b into (-a, a]
  const i64 D = f.disc();
  const i64 r = floor_div(f.a - f.b, 2 * f.a);
  f.b += 2 * f.a * r;
  f.c = static_cast<i64>((static_cast<i128>(f.b) * f.b - D) / (4 * static_cast<i128>(f.a)));
  return f;
}

QuadForm reduce_any(const QuadForm& f) {
  return f.disc() < 0 ? reduce_definite(f) : reduce_indefinite(f);
}

// order of each class and, if one has order h, a generator
void fill_group_structure(ClassGroupData& g,
                          const std::function<std::size_t(const QuadForm&)>& class_index) {
  const std::size_t h = g.representatives.size();
  const std::size_t identity = class_index(principal_form(g.disc));
  g.character_orders.clear();
  for (const auto& rep : g.representatives) {
    QuadForm acc = rep;
    i64 order = 1;
    while (class_index(acc) != identity) {
      acc = reduce_any(compose(acc, rep));
      ++order;
      if (order > static_cast<i64>(h)) throw std::logic_error("class group order overflow");
    }
    g.character_orders.push_back(order);
    if (order == static_cast<i64>(h) && !g.generator) g.generator = rep;
  }
  std::sort(g.character_orders.begin(), g.character_orders.end());
}

}  // namespace

bool is_fundamental_discriminant(i64 D) {
  if (D == 0 || D == 1) return false;
  const i64 m4 = floor_mod(D, 4);
  if (m4 == 1) return squarefree(D);
  if (m4 != 0) return false;
  const i64 m = D / 4;
  const i64 r = floor_mod(m, 4);
  return (r == 2 || r == 3) && squarefree(m);
}

QuadForm principal_form(i64 D) {
  const i64 m4 = floor_mod(D, 4);
  if (m4 == 0) return {1, 0, -D / 4};
  if (m4 == 1) return {1, 1, (1 - D) / 4};
  throw DomainError("discriminant must be 0 or 1 mod 4");
}

QuadForm reduce_definite(QuadForm f) {
  if (f.disc() >= 0 || f.a <= 0) throw DomainError("reduce_definite needs a positive definite form");
  for (;;) {
    if (!(-f.a < f.b && f.b <= f.a)) f = normalize_definite(f);
    if (f.a > f.c) {
      f = {f.c, -f.b, f.a};
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

ClassGroupData class_number_definite(i64 disc) {
  if (disc >= 0 || (floor_mod(disc, 4) != 0 && floor_mod(disc, 4) != 1))
    throw DomainError("definite discriminant must be negative and 0 or 1 mod 4");
  ClassGroupData g;
  g.disc = disc;
  const i64 amax = isqrt(-disc / 3);
  for (i64 a = 1; a <= amax; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (floor_mod(b - disc, 2) != 0) continue;
      const i64 num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && (a == c)) continue;
      const QuadForm f{a, b, c};
      (f.primitive() ? g.representatives : g.imprimitive).push_back(f);
    }
  }
  g.class_number = static_cast<i64>(g.representatives.size());
  std::map<QuadForm, std::size_t> index;
  for (std::size_t i = 0; i < g.representatives.size(); ++i) index[g.representatives[i]] = i;
  fill_group_structure(g, [&](const QuadForm& f) { return index.at(reduce_definite(f)); });
  return g;
}

QuadForm compose(const QuadForm& f1_in, const QuadForm& f2_in) {
  if (f1_in.disc() != f2_in.disc()) throw DomainError("composition needs equal discriminants");
  QuadForm f1 = f1_in, f2 = f2_in;
  if (std::abs(f1.a) > std::abs(f2.a)) std::swap(f1, f2);
  const i64 D = f1.disc();
  const i64 a1 = f1.a, b1 = f1.b;
  const i64 a2 = f2.a, b2 = f2.b, c2 = f2.c;
  const i64 s = (b1 + b2) / 2;
  const i64 n = b2 - s;
  i64 d, y1;
  if (a2 % a1 == 0) {
    y1 = 0;
    d = a1;
  } else {
    i64 u, v;
    std::tie(d, u, v) = ext_gcd(a2, a1);
    y1 = u;
  }
  i64 d1, x2, y2;
  if (s % d == 0) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    i64 u, v;
    std::tie(d1, u, v) = ext_gcd(s, d);
    x2 = u;
    y2 = -v;
  }
  const i64 v1 = a1 / d1;
  const i64 v2 = a2 / d1;
  const i128 rr = (static_cast<i128>(y1) * y2 * n - static_cast<i128>(x2) * c2) % v1;
  i64 r = static_cast<i64>(rr);
  if (r < 0) r += std::abs(v1);
  const i64 b3 = b2 + 2 * v2 * r;
  const i64 a3 = v1 * v2;
  const i64 c3 = static_cast<i64>((static_cast<i128>(b3) * b3 - D) / (4 * static_cast<i128>(a3)));
  return {a3, b3, c3};
}

HeegnerReport heegner_point_count(i64 q, bool check_pairs) {
  if (q < 3 || q % 2 == 0 || !is_prime(static_cast<u64>(q)))
    throw DomainError("heegner_point_count needs an odd prime");
  HeegnerReport rep;
  rep.q = q;
  std::vector<QuadForm> reduced(static_cast<std::size_t>(q));
  std::set<QuadForm> all, primitive;
  for (i64 a = 0; a < q; ++a) {
    const QuadForm f{q * q, 2 * q * a, a * a + 1};
    reduced[a] = reduce_definite(f);
    all.insert(reduced[a]);
    if (f.primitive())
      primitive.insert(reduced[a]);
    else
      rep.imprimitive_indices.push_back(a);
  }
  rep.distinct_classes = static_cast<i64>(all.size());
  rep.distinct_primitive_classes = static_cast<i64>(primitive.size());
  rep.primitive_class_number = class_number_definite(-4 * q * q).class_number;
  rep.expected = q % 4 == 3 ? (q + 1) / 2 : (q - 1) / 2;
  if (check_pairs) {
    rep.criterion_checked = true;
    for (i64 a1 = 0; a1 < q; ++a1) {
      for (i64 a2 = 0; a2 < q; ++a2) {
        const bool equivalent = reduced[a1] == reduced[a2];
        const bool predicted = a1 == a2 || floor_mod(a1 * a2 + 1, q) == 0;
        if (equivalent == predicted) continue;
        const bool both_primitive = floor_mod(a1 * a1 + 1, q) != 0 && floor_mod(a2 * a2 + 1, q) != 0;
        if (both_primitive)
          ++rep.criterion_failures;
        else
          ++rep.imprimitive_exceptions;
      }
    }
  }
  return rep;
}

bool is_reduced_indefinite(const QuadForm& f) {
  const i64 D = f.disc();
  if (D <= 0 || is_square(D)) return false;
  const i64 sD = isqrt(D);
  const i64 two_a = 2 * std::abs(f.a);
  // sqrt D irrational: x < sqrt D  <=>  x <= sD for integers x
  return f.b >= 1 && f.b <= sD && two_a + f.b >= sD + 1 && two_a - f.b <= sD;
}

QuadForm rho(const QuadForm& f) {
  const i64 D = f.disc();
  if (D <= 0 || is_square(D)) throw DomainError("rho needs a non-square positive discriminant");
  const i64 sD = isqrt(D);
  const i64 c = f.c;
  const i64 m = 2 * std::abs(c);
  i64 b;
  if (std::abs(c) <= sD) {
    // largest b = -f.b mod m with b <= sD; it automatically exceeds sD - m
    b = sD - floor_mod(sD + f.b, m);
  } else {
    // b = -f.b mod m in (-|c|, |c|]
    b = floor_mod(-f.b + std::abs(c) - 1, m) - (std::abs(c) - 1);
  }
  const i64 cn = static_cast<i64>((static_cast<i128>(b) * b - D) / (4 * static_cast<i128>(c)));
  return {c, b, cn};
}

QuadForm reduce_indefinite(QuadForm f) {
  for (int guard = 0; !is_reduced_indefinite(f); ++guard) {
    if (guard > 100000) throw std::logic_error("indefinite reduction did not terminate");
    f = rho(f);
  }
  return f;
}

IndefiniteClassData indefinite_class_number(i64 D) {
  if (D <= 0 || (floor_mod(D, 4) != 0 && floor_mod(D, 4) != 1))
    throw DomainError("indefinite discriminant must be positive and 0 or 1 mod 4");
  if (is_square(D)) throw DomainError("indefinite discriminant must not be a square");
  const i64 sD = isqrt(D);
  std::vector<QuadForm> reduced;
  for (i64 b = 1; b <= sD; ++b) {
    if (floor_mod(b - D, 2) != 0) continue;
    const i64 num = b * b - D;  // negative
    const i64 amin = std::max<i64>(1, (sD + 1 - b + 1) / 2);
    const i64 amax = (sD + b) / 2;
    for (i64 aa = amin; aa <= amax; ++aa) {
      for (i64 a : {aa, -aa}) {
        if (num % (4 * a) != 0) continue;
        const QuadForm f{a, b, num / (4 * a)};
        if (is_reduced_indefinite(f)) reduced.push_back(f);
      }
    }
  }

  IndefiniteClassData out;
  out.group.disc = D;
  std::map<QuadForm, std::size_t> cycle_of;
  for (const auto& f : reduced) {
    if (cycle_of.count(f)) continue;
    std::vector<QuadForm> cycle;
    QuadForm g = f;
    do {
      cycle.push_back(g);
      g = rho(g);
    } while (g != f && cycle.size() <= reduced.size());
    const std::size_t id = out.cycles.size();
    for (const auto& h : cycle) cycle_of[h] = id;
    out.cycles.push_back(std::move(cycle));
  }

  std::map<std::size_t, std::size_t> primitive_cycle_index;
  for (std::size_t id = 0; id < out.cycles.size(); ++id) {
    const QuadForm& head = out.cycles[id].front();
    if (head.primitive()) {
      primitive_cycle_index[id] = out.group.representatives.size();
      out.group.representatives.push_back(head);
    } else {
      out.group.imprimitive.push_back(head);
    }
  }
  out.group.class_number = static_cast<i64>(out.group.representatives.size());
  fill_group_structure(out.group, [&](const QuadForm& f) {
    return primitive_cycle_index.at(cycle_of.at(reduce_indefinite(f)));
  });

  const std::size_t principal = cycle_of.at(reduce_indefinite(principal_form(D)));
  for (const auto& f : out.cycles[principal])
    if (f.a == -1) out.unit_of_norm_minus_one = true;
  out.wide_class_number =
      out.unit_of_norm_minus_one ? out.group.class_number : out.group.class_number / 2;

  for (i64 y = 1; y <= 1000000; ++y) {
    const i128 t = static_cast<i128>(D) * y * y - 4;
    if (t > static_cast<i128>(1) << 62) break;
    if (is_square(static_cast<i64>(t))) {
      out.pell_witness = std::pair{isqrt(static_cast<i64>(t)), y};
      break;
    }
  }
  return out;
}

Representation represents(const QuadForm& f, i64 n, i64 bound) {
  Representation r;
  r.bound = bound;
  // scan by increasing max(|x|,|y|) so the witness is a small one
  for (i64 m = 0; m <= bound; ++m) {
    for (i64 x = -m; x <= m; ++x) {
      for (i64 y = -m; y <= m; ++y) {
        if (std::max(std::abs(x), std::abs(y)) != m) continue;
        if (f.eval(x, y) == n) {
          r.found = true;
          r.x = x;
          r.y = y;
          return r;
        }
      }
    }
  }
  return r;
}

bool AuditReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.result; });
}

AuditReport cm_construction_audit() {
  constexpr i64 D = 229;
  constexpr i64 q1 = 37, q2 = 53;
  AuditReport rep;
  auto add = [&](std::string claim, std::string loc, bool ok, std::string witness) {
    rep.items.push_back({std::move(claim), std::move(loc), ok, std::move(witness)});
  };

  {
    const bool ok = is_prime(D) && D % 4 == 1 && is_fundamental_discriminant(D);
    add("229 is a prime fundamental discriminant, 229 = 1 mod 4", "cm-construction/base-field", ok,
        "is_prime=" + std::to_string(is_prime(D)) + ", 229 mod 4 = " + std::to_string(D % 4));
  }
  {
    const auto data = indefinite_class_number(D);
    const bool order3 = std::count(data.group.character_orders.begin(),
                                   data.group.character_orders.end(), 3) > 0;
    const bool ok = data.group.class_number == 3 && data.wide_class_number == 3 &&
                    data.unit_of_norm_minus_one && data.pell_witness.has_value() && order3;
    std::string w = "narrow h=" + std::to_string(data.group.class_number) +
                    ", wide h=" + std::to_string(data.wide_class_number) + ", cycles=" +
                    std::to_string(data.cycles.size());
    if (data.pell_witness)
      w += ", x^2-229y^2=-4 at (" + std::to_string(data.pell_witness->first) + "," +
           std::to_string(data.pell_witness->second) + ")";
    add("Q(sqrt 229) has class number 3, so an order-3 class group character exists",
        "cm-construction/class-number", ok, w);
  }
  {
    const i64 g = primitive_root(D);
    // psi(g^k) = i^k
    std::vector<int> log_mod4(D, -1);
    i64 x = 1;
    for (i64 k = 0; k < D - 1; ++k) {
      log_mod4[x] = static_cast<int>(k % 4);
      x = mulmod(x, g, D);
    }
    bool square_is_legendre = true;
    for (i64 n = 1; n < D; ++n) {
      const int psi_sq = (2 * log_mod4[n]) % 4 == 0 ? 1 : -1;
      if (psi_sq != kronecker(n, D)) square_is_legendre = false;
    }
    const bool ok = (D - 1) % 4 == 0 && square_is_legendre && kronecker(g, D) == -1;
    add("an order-4 character psi mod 229 exists and psi^2 is the Legendre symbol",
        "cm-construction/quartic-character", ok,
        "generator g=" + std::to_string(g) + ", psi(g)=i, psi^2=(.|229) on all residues: " +
            (square_is_legendre ? "yes" : "no"));
  }
  {
    const int k1 = kronecker(D, q1), k2 = kronecker(D, q2);
    add("37 and 53 split in Q(sqrt 229)", "cm-construction/auxiliary-primes", k1 == 1 && k2 == 1,
        "(229|37)=" + std::to_string(k1) + ", (229|53)=" + std::to_string(k2));
  }
  {
    const QuadForm principal = principal_form(D);
    std::string w = "principal form " + principal.str() + ":";
    bool ok = true;
    for (i64 p : {q1, q2}) {
      Representation r = represents(principal, p, 100);
      if (!r.found) r = represents(principal, -p, 100);
      ok = ok && r.found;
      if (r.found)
        w += " " + std::to_string(static_cast<i64>(principal.eval(r.x, r.y))) + "=f(" +
             std::to_string(r.x) + "," + std::to_string(r.y) + ")";
      else
        w += " no witness for " + std::to_string(p) + " within |x|,|y|<=100";
    }
    add("the primes above 37 and 53 are principal", "cm-construction/principal-primes", ok, w);
  }
  {
    const i64 e = (D - 1) / 4;
    const i64 r1 = powmod(q1, e, D), r2 = powmod(q2, e, D);
    add("37 and 53 are 4th power residues mod 229", "cm-construction/quartic-residues",
        r1 == 1 && r2 == 1,
        "37^57 mod 229 = " + std::to_string(r1) + ", 53^57 mod 229 = " + std::to_string(r2));
  }
  return rep;
}

}  // namespace horolab

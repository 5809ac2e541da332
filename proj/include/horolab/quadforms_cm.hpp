#pragma once

// Integral binary quadratic forms: reduction, class numbers (definite and
// indefinite), Gauss composition, the forms (q^2, 2qa, a^2+1) attached to a
// discrete horocycle, and the audit of the Q(sqrt 229) CM construction data.

#include <compare>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "horolab/arith.hpp"

namespace horolab {

struct QuadForm {
  i64 a = 0;
  i64 b = 0;
  i64 c = 0;

  i64 disc() const { return static_cast<i64>(static_cast<i128>(b) * b - 4 * static_cast<i128>(a) * c); }
  i64 content() const { return gcd(gcd(a, b), c); }
  bool primitive() const { return std::abs(content()) == 1; }
  i128 eval(i64 x, i64 y) const {
    return static_cast<i128>(a) * x * x + static_cast<i128>(b) * x * y + static_cast<i128>(c) * y * y;
  }
  std::string str() const;

  friend bool operator==(const QuadForm&, const QuadForm&) = default;
  friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

struct ClassGroupData {
  i64 disc = 0;
  i64 class_number = 0;                   // primitive classes
  std::vector<QuadForm> representatives;  // one reduced primitive form per class
  std::vector<QuadForm> imprimitive;      // reduced forms with content > 1
  std::vector<i64> character_orders;      // multiset of orders of the dual group
  std::optional<QuadForm> generator;      // set when the group is cyclic
};

bool is_fundamental_discriminant(i64 D);

/// Unique reduced representative of a positive definite form.
QuadForm reduce_definite(QuadForm f);

ClassGroupData class_number_definite(i64 disc);

/// Gauss composition of two primitive forms of the same discriminant; the
/// result is not reduced.
QuadForm compose(const QuadForm& f, const QuadForm& g);

/// Principal form of discriminant D.
QuadForm principal_form(i64 D);

struct HeegnerReport {
  i64 q = 0;
  i64 distinct_classes = 0;            // among all q forms
  i64 distinct_primitive_classes = 0;  // among the primitive ones
  i64 primitive_class_number = 0;      // h(-4q^2), all primitive classes
  i64 expected = 0;                    // (q+1)/2 or (q-1)/2
  std::vector<i64> imprimitive_indices;
  bool criterion_checked = false;
  i64 criterion_failures = 0;  // primitive pairs where equivalence and a1 a2 = -1 / a1 = a2 disagree
  i64 imprimitive_exceptions = 0;  // ordered pairs of imprimitive forms that coincide anyway
};

/// Reduce the forms (q^2, 2qa, a^2+1), a mod q, count classes and, when
/// check_pairs is set, test the equivalence criterion on every pair.
HeegnerReport heegner_point_count(i64 q, bool check_pairs = true);

/// Reduced indefinite form: 0 < b < sqrt D, sqrt D - b < 2|a| < sqrt D + b.
bool is_reduced_indefinite(const QuadForm& f);
/// One step of the rho operator on indefinite forms.
QuadForm rho(const QuadForm& f);
/// Iterate rho until the form is reduced.
QuadForm reduce_indefinite(QuadForm f);

struct IndefiniteClassData {
  ClassGroupData group;               // narrow (proper) classes, one cycle each
  std::vector<std::vector<QuadForm>> cycles;
  bool unit_of_norm_minus_one = false;  // principal cycle contains a form with a = -1
  i64 wide_class_number = 0;
  std::optional<std::pair<i64, i64>> pell_witness;  // x^2 - D y^2 = -4
};

IndefiniteClassData indefinite_class_number(i64 D);

struct Representation {
  bool found = false;
  i64 x = 0;
  i64 y = 0;
  i64 bound = 0;  // search box |x|,|y| <= bound; !found means "not within bound"
};

Representation represents(const QuadForm& f, i64 n, i64 bound);

struct AuditItem {
  std::string claim;
  std::string location;
  bool result = false;
  std::string witness;
};

struct AuditReport {
  std::vector<AuditItem> items;
  bool all_pass() const;
};

AuditReport cm_construction_audit();

}  // namespace horolab

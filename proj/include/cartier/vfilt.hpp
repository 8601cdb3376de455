#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cartier/testmod.hpp"

namespace cartier {

struct FiltrationJump {
  Rational t;
  FreeSubmodule value;  // V^t
  FreeSubmodule left;   // V^{t - eps}, from the left-limit search
  bool left_certified;
  /// The left limit equals the value at the previous grid point, so no jump
  /// hides between grid points.
  bool grid_consistent;
};

/// V^t = tau(M, f^t) on [lo, hi], relative to the fractions with denominator
/// at most max_den.
struct FiltrationTable {
  CartierModule module;
  Polynomial f;
  Polynomial c;
  Rational lo, hi;
  std::int64_t max_den;
  FreeSubmodule V0;  // value at lo
  std::vector<FiltrationJump> jumps;
  std::vector<Rational> grid;  // lo followed by the scanned candidates

  /// V at the largest jump <= t, else V0; t must lie in [lo, hi].
  const FreeSubmodule& value_at(const Rational& t) const;
  /// V^{t - eps}: the stored left limit at a jump, the value elsewhere.
  const FreeSubmodule& left_at(const Rational& t) const;
  const FiltrationJump* jump_at(const Rational& t) const;
  bool in_range(const Rational& t) const { return lo <= t && t <= hi; }
};

/// Requires f regular on M (NonDegenerate) and M F-regular for the test
/// element (NotFRegular). `c` defaults to suggest_test_element.
FiltrationTable compute_vfiltration(const CartierModule& M, const Polynomial& f,
                                    const Rational& lo, const Rational& hi, std::int64_t max_den,
                                    std::optional<Polynomial> c = std::nullopt,
                                    unsigned threads = 1);

struct AxiomCheck {
  bool tested = false;
  bool ok = true;
  std::optional<Rational> first_failure;
  std::string detail;
};

struct AxiomReport {
  AxiomCheck decreasing;
  AxiomCheck i;    // V constant just above the start, and V^0 = M when the start is 0
  AxiomCheck ii;   // f is injective on every V^t
  AxiomCheck iii;  // V^t = f V^{t-1} for grid t > 1
  AxiomCheck iv;   // kappa(V^{tp}) = V^t for grid t with tp in range
  bool all_ok() const;
};

/// Uses the table data only.
AxiomReport verify_axioms(const FiltrationTable& table);

/// A: exponent ceil(t(p-1)). B: floor(t(p-1)) + 1.
enum class GrConvention { A, B };

struct GrPiece {
  Rational t;
  CartierModule module;  // V^{t-eps} / V^t with kappa o f^exponent
  GrConvention convention;
  std::uint64_t exponent;
  bool is_zero() const { return module.presentation().is_zero(); }
};

std::uint64_t gr_exponent(const Rational& t, std::uint32_t p, GrConvention convention);
GrPiece gr_piece(const FiltrationTable& table, const Rational& t,
                 GrConvention convention = GrConvention::A);
/// Nonzero pieces with t in [a, b].
std::vector<GrPiece> gr_range(const FiltrationTable& table, const Rational& a, const Rational& b,
                              GrConvention convention = GrConvention::A);
bool gr_is_crystal_zero(const GrPiece& piece);

/// Multiplication by f is a bijection Gr^t -> Gr^{t+1} intertwining the twists.
bool mu_f_check(const FiltrationTable& table, const Rational& t);
/// kappa maps Gr^{tp} onto Gr^t.
bool kappa_gr_surjection_check(const FiltrationTable& table, const Rational& t);

enum class Verdict { Holds, Fails, Inapplicable };
const char* verdict_name(Verdict v);

struct IshriekReport {
  Verdict verdict;
  std::string detail;
};
/// For a constant invertible twist: V^t = f^{floor t} M on the grid, and the
/// projection Gr^{[0,1]} M -> M/fM with kappa o f^{p-1} is an isomorphism.
IshriekReport compare_with_ishriek(const FiltrationTable& table);

/// phi restricted to Gr^t; throws VerificationFailed if phi does not respect
/// the two filtrations.
CartierMorphism gr_of_morphism(const CartierMorphism& phi, const FiltrationTable& source,
                               const FiltrationTable& target, const Rational& t,
                               GrConvention convention = GrConvention::A);
/// Same source, target and values modulo the target denominator.
bool same_morphism(const CartierMorphism& a, const CartierMorphism& b);

}  // namespace cartier

#pragma once

#include <cstdint>
#include <vector>

#include "cartier/cartier_module.hpp"

namespace cartier {

/// S = R[y]/(g) for g monic in y of degree d. The ambient ring R[y] is the
/// base ring with y appended as its last variable. Vectors over S are stored
/// over R in y-major order: coordinate j*r + k is the y^j part of entry k.
class FiniteExtension {
 public:
  /// `g` lives in a ring whose variables are the base variables followed by y.
  FiniteExtension(Ring base, Polynomial g);

  const Ring& base() const { return base_; }
  const Ring& ambient() const { return ambient_; }
  std::size_t y_index() const { return base_.arity(); }
  std::size_t degree() const { return d_; }
  const Polynomial& relation() const { return g_; }

  /// Coefficients of h in powers of y (unreduced), as base polynomials.
  std::vector<Polynomial> y_coefficients(const Polynomial& h) const;
  /// Coordinates of h mod g on 1, y, ..., y^{d-1}.
  Vec reduce(const Polynomial& h) const;
  Polynomial from_coords(const Vec& coords) const;
  Polynomial lift(const Polynomial& base_poly) const;

  /// Row j holds the coordinates of y^{jp} mod g.
  const Matrix& frobenius_matrix() const { return frob_; }
  /// Tr(y^j) for j < d.
  const std::vector<Polynomial>& trace_values() const { return traces_; }
  /// det(Tr(y^{i+j})).
  const Polynomial& discriminant() const { return disc_; }
  Polynomial trace(const Polynomial& h) const;

 private:
  Ring base_;
  Ring ambient_;
  Polynomial g_;
  std::size_t d_ = 0;
  std::vector<Polynomial> tail_;  // g = y^d + sum_b tail_[b] y^b
  Matrix frob_;
  std::vector<Polynomial> traces_;
  Polynomial disc_;
};

/// Hom_R(S, M) on the dual basis phi(1), ..., phi(y^{d-1}); structure
/// phi -> kappa o phi o F, i.e. the twist kron(M_F, U).
CartierModule shriek_finite(const FiniteExtension& ext, const CartierModule& M);
/// Hom_R(S, X) inside Hom_R(S, R^r): X in every block.
FreeSubmodule shriek_submodule(const FiniteExtension& ext, const FreeSubmodule& X);
/// Action of y on Hom_R(S, R^r).
Matrix shriek_action(const FiniteExtension& ext, std::size_t rank);

/// Coordinates over R of an ambient vector reduced mod g.
Vec pushforward_vector(const FiniteExtension& ext, const Vec& v);
/// R-span of the coordinates of y^j w, w a generator.
FreeSubmodule pushforward_submodule(const FiniteExtension& ext, const FreeSubmodule& X);
/// Twist over R transporting kappa(v) = C(U v) on ambient vectors mod g.
Matrix pushforward_twist(const FiniteExtension& ext, const Matrix& U);
/// M over the ambient ring with g R[y]^r inside its denominator, viewed over R.
CartierModule pushforward_finite(const FiniteExtension& ext, const CartierModule& M);

/// M tensor S: the hypersurface model of M along g.
HypersurfaceModel pullback_finite(const FiniteExtension& ext, const CartierModule& M);

/// Entrywise trace of an ambient vector.
Vec trace_vector(const FiniteExtension& ext, const Vec& v);
/// 1 lies in the ideal generated by the trace values.
bool trace_surjective(const FiniteExtension& ext);
/// Tr(kappa_{M tensor S}(z)) = kappa_M(Tr z) modulo N on random z.
bool trace_kappa_commute_check(const FiniteExtension& ext, const CartierModule& M, int samples,
                               std::uint64_t seed);

}  // namespace cartier

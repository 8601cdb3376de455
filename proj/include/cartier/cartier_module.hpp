#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cartier/frobenius.hpp"
#include "cartier/groebner.hpp"

namespace cartier {

/// Level-1 structure kappa(v) = C(U v) on R^r.
class CartierStructure {
 public:
  CartierStructure(Ring ring, Matrix U);
  static CartierStructure scalar(const Polynomial& u);
  static CartierStructure identity(const Ring& ring, std::size_t rank);

  const Ring& ring() const { return ring_; }
  std::size_t rank() const { return U_.size(); }
  const Matrix& matrix() const { return U_; }

  Vec apply(const Vec& v) const;
  /// kappa o g: the matrix U g.
  CartierStructure twisted(const Polynomial& g) const;

 private:
  Ring ring_;
  Matrix U_;
};

/// Coherent Cartier module W/N with kappa(W) in W and kappa(N) in N.
class CartierModule {
 public:
  CartierModule(QuotientPresentation pres, CartierStructure kappa);
  static CartierModule free(CartierStructure kappa);

  const QuotientPresentation& presentation() const { return pres_; }
  const FreeSubmodule& numerator() const { return pres_.numerator(); }
  const FreeSubmodule& denominator() const { return pres_.denominator(); }
  const CartierStructure& kappa() const { return kappa_; }
  const Ring& ring() const { return pres_.ring(); }
  std::size_t rank() const { return pres_.rank(); }

  /// Same presentation, different structure (re-verified).
  CartierModule with_structure(CartierStructure kappa) const;
  /// Sub-quotient W'/N' of the same ambient (re-verified).
  CartierModule with_presentation(FreeSubmodule num, FreeSubmodule den) const;

 private:
  QuotientPresentation pres_;
  CartierStructure kappa_;
};

/// Exponent vectors in [0, p-1]^n.
std::vector<Monomial> digit_monomials(const Ring& ring);

/// kappa^e(v) reduced modulo the denominator; e is subject to the level cap.
Vec kappa_apply(const CartierModule& M, const Vec& v, unsigned e);

/// R-span of kappa(X): generated by kappa(x^a w), w a generator, a a digit.
FreeSubmodule kappa_image(const CartierStructure& kappa, const FreeSubmodule& X);
/// kappa_image(X) + N.
FreeSubmodule kappa_image(const CartierModule& M, const FreeSubmodule& X);
bool is_kappa_stable(const CartierStructure& kappa, const FreeSubmodule& X);

struct Underline {
  FreeSubmodule module;  // contains the denominator
  unsigned steps;
};
/// Descending iteration W <- kappa(W) + N to its fixed point.
Underline underline(const CartierModule& M, unsigned cap = 32);
CartierModule underline_module(const CartierModule& M);
bool is_F_pure(const CartierModule& M);
/// Exact: iterate images until they reach N (true) or a nonzero fixed point.
bool is_nilpotent(const CartierModule& M, unsigned e_max = 64);

struct NilpotentPart {
  FreeSubmodule module;  // contains the denominator, inside the numerator
  bool complete;         // true when M is finite over F_p and the bound covers it
  unsigned degree_bound;
};
/// Largest nilpotent submodule restricted to representatives of degree <= bound.
NilpotentPart nilpotent_kernel_bounded(const CartierModule& M, unsigned degree_bound);

/// Block-diagonal sum of two modules over the same ring.
CartierModule direct_sum(const CartierModule& a, const CartierModule& b);

/// Quotient M / (S + N) for a kappa-stable S inside the numerator.
CartierModule quotient_module(const CartierModule& M, const FreeSubmodule& S);

struct MorphismReport {
  bool ok;
  std::string reason;
};
MorphismReport morphism_check(const CartierModule& source, const CartierModule& target,
                              const Matrix& phi);

class CartierMorphism {
 public:
  /// Throws NotStable unless morphism_check passes.
  CartierMorphism(CartierModule source, CartierModule target, Matrix phi);

  const CartierModule& source() const { return source_; }
  const CartierModule& target() const { return target_; }
  const Matrix& matrix() const { return phi_; }

  /// {w in W : phi(w) in N'} + N, as a Cartier submodule of the source.
  CartierModule kernel() const;
  /// W' / (phi(W) + N').
  CartierModule cokernel() const;
  FreeSubmodule image() const;  // phi(W) + N'

 private:
  CartierModule source_;
  CartierModule target_;
  Matrix phi_;
};

bool nil_isomorphism_check(const CartierMorphism& phi, unsigned e_max = 64);
bool is_isomorphism(const CartierMorphism& phi);
CartierMorphism compose(const CartierMorphism& second, const CartierMorphism& first);

/// Module over R[z] = R plus one appended variable, cut out by a hypersurface
/// relation g: numerator W[z], denominator N[z] + g W[z], twist U g^{p-1}.
struct HypersurfaceModel {
  Ring base;
  Ring ambient;
  std::size_t new_var;
  Polynomial relation;
  CartierModule module;

  /// Lift a base polynomial into the ambient ring.
  Polynomial lift(const Polynomial& f) const;
  FreeSubmodule lift(const FreeSubmodule& W) const;
};

/// `relation` builds g inside the ambient ring. Throws if `var` is taken.
HypersurfaceModel hypersurface_model(const CartierModule& M, const std::string& var,
                                     const std::function<Polynomial(const Ring&)>& relation);

/// Graph of f: relation s - f, s acting as f on the module.
HypersurfaceModel graph_embed(const CartierModule& M, const Polynomial& f,
                              const std::string& var = "s");
/// Image of an ambient submodule after substituting s -> f.
FreeSubmodule graph_restrict(const HypersurfaceModel& G, const Polynomial& f,
                             const FreeSubmodule& W);

/// Localization at h modelled as R[z]/(h z - 1).
HypersurfaceModel localization_embed(const CartierModule& M, const Polynomial& h,
                                     const std::string& var = "z");
/// Contraction to the base: eliminate z from W + relation * ambient.
FreeSubmodule localization_contract(const HypersurfaceModel& L, const FreeSubmodule& W);

/// Presentation with numerator and denominator saturated at h; kappa unchanged.
CartierModule localize_presentation(const CartierModule& M, const Polynomial& h);

/// {r in R : r W in N}.
FreeSubmodule annihilator(const FreeSubmodule& W, const FreeSubmodule& N);
/// g lies in the radical of the ideal J (Rabinowitsch trick).
bool in_radical(const Polynomial& g, const FreeSubmodule& J);
/// rad ann(a) = rad ann(b), i.e. the two quotients have the same support.
bool same_support(const QuotientPresentation& a, const QuotientPresentation& b);

Matrix kronecker(const Matrix& a, const Matrix& b);
Polynomial determinant(const Matrix& m);

}  // namespace cartier

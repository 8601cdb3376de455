#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cartier/field_poly.hpp"

namespace cartier {

using Vec = std::vector<Polynomial>;
/// Row-major; entry [i][j] maps basis vector j of the source to row i.
using Matrix = std::vector<std::vector<Polynomial>>;

/// Term order on module terms x^a e_i. Positions are compared first (e_0 is
/// largest) unless an elimination mask is set, in which case the total degree
/// in the masked variables is compared before anything else.
struct TermOrder {
  enum class Mono { Grevlex, Lex };
  Mono mono = Mono::Grevlex;
  std::uint32_t elim_mask = 0;

  static TermOrder grevlex() { return {}; }
  static TermOrder lex() { return {Mono::Lex, 0}; }
  static TermOrder elimination(std::uint32_t mask) { return {Mono::Grevlex, mask}; }

  int compare_monomials(const Monomial& a, const Monomial& b) const;
  friend bool operator==(const TermOrder&, const TermOrder&) = default;
};

struct GBData;

/// Submodule of R^rank given by generators. The reduced Groebner basis under
/// the default order is computed once and shared between copies.
class FreeSubmodule {
 public:
  FreeSubmodule(Ring ring, std::size_t rank, std::vector<Vec> gens = {});

  static FreeSubmodule whole(const Ring& ring, std::size_t rank);
  static FreeSubmodule zero(const Ring& ring, std::size_t rank) { return {ring, rank}; }
  static FreeSubmodule ideal(const Ring& ring, const std::vector<Polynomial>& gens);

  const Ring& ring() const { return ring_; }
  std::size_t rank() const { return rank_; }
  const std::vector<Vec>& generators() const { return gens_; }

  /// Reduced Groebner basis, POT over grevlex, sorted by descending lead term.
  const std::vector<Vec>& basis() const;
  bool is_zero() const { return basis().empty(); }

  /// Rank-1 convenience: generators as polynomials.
  std::vector<Polynomial> ideal_generators() const;

  /// Basis elements, printed; rank 1 prints bare polynomials.
  std::vector<std::string> to_strings() const;
  std::string to_string() const;

  std::shared_ptr<const GBData> gb_data() const;

 private:
  struct Cache {
    std::mutex mu;
    std::shared_ptr<const GBData> gb;
  };

  Ring ring_;
  std::size_t rank_;
  std::vector<Vec> gens_;
  std::shared_ptr<Cache> cache_;
};

/// W / N with N inside W, both in R^rank.
class QuotientPresentation {
 public:
  QuotientPresentation(FreeSubmodule numerator, FreeSubmodule denominator);

  const FreeSubmodule& numerator() const { return num_; }
  const FreeSubmodule& denominator() const { return den_; }
  const Ring& ring() const { return num_.ring(); }
  std::size_t rank() const { return num_.rank(); }
  bool is_zero() const;

 private:
  FreeSubmodule num_;
  FreeSubmodule den_;
};

Vec zero_vec(const Ring& ring, std::size_t rank);
Vec unit_vec(const Ring& ring, std::size_t rank, std::size_t i);
bool is_zero_vec(const Vec& v);
std::string vec_to_string(const Vec& v);
Matrix identity_matrix(const Ring& ring, std::size_t n);
Vec apply_matrix(const Matrix& m, const Vec& v);
Matrix matrix_product(const Matrix& a, const Matrix& b);

/// Leading (position, monomial) of each default-order basis element.
std::vector<std::pair<std::size_t, Monomial>> leading_terms(const FreeSubmodule& W);

/// Reduced Groebner basis of W under an arbitrary order (not cached).
std::vector<Vec> groebner_basis(const FreeSubmodule& W, const TermOrder& order);

/// Canonical remainder of v modulo W under the default order.
Vec normal_form(const Vec& v, const FreeSubmodule& W);
Polynomial normal_form(const Polynomial& f, const FreeSubmodule& ideal);
bool member(const Vec& v, const FreeSubmodule& W);
bool contains(const FreeSubmodule& W, const FreeSubmodule& V);  // V inside W
bool equal(const FreeSubmodule& W, const FreeSubmodule& V);

FreeSubmodule sum(const FreeSubmodule& a, const FreeSubmodule& b);
FreeSubmodule scale(const FreeSubmodule& W, const Polynomial& f);
/// phi(W) inside R^{phi.size()}.
FreeSubmodule image(const Matrix& phi, const FreeSubmodule& W);
FreeSubmodule intersect(const FreeSubmodule& a, const FreeSubmodule& b);
/// {v in R^s : phi v in N}, s = number of columns of phi.
FreeSubmodule preimage(const Matrix& phi, const FreeSubmodule& N, std::size_t source_rank);
/// {v : f v in N}.
FreeSubmodule colon(const FreeSubmodule& N, const Polynomial& f);
/// Elements of W involving none of the variables in `vars` (same ring).
FreeSubmodule eliminate(const FreeSubmodule& W, const std::vector<std::size_t>& vars);
/// (W : h^infinity) via an auxiliary variable t and the relation 1 - t h.
FreeSubmodule saturate(const FreeSubmodule& W, const Polynomial& h);
/// Same saturation computed as the stable value of repeated colons.
FreeSubmodule saturate_by_colons(const FreeSubmodule& W, const Polynomial& h);

/// Move every generator into `target` through the variable map of Polynomial::remap.
FreeSubmodule remap(const FreeSubmodule& W, const Ring& target, const std::vector<int>& map);

}  // namespace cartier

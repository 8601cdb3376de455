#include "cartier/cartier_module.hpp"

#include <algorithm>
#include <map>

namespace cartier {

CartierStructure::CartierStructure(Ring ring, Matrix U) : ring_(std::move(ring)), U_(std::move(U)) {
  for (const auto& row : U_) {
    if (row.size() != U_.size()) fail(ErrorCode::InvalidInput, "twist matrix must be square");
    for (const auto& c : row) require_same_ring(ring_, c.ring(), "CartierStructure");
  }
  if (U_.empty()) fail(ErrorCode::InvalidInput, "twist matrix must be nonempty");
}

CartierStructure CartierStructure::scalar(const Polynomial& u) { return {u.ring(), {{u}}}; }

CartierStructure CartierStructure::identity(const Ring& ring, std::size_t rank) {
  return {ring, identity_matrix(ring, rank)};
}

Vec CartierStructure::apply(const Vec& v) const {
  Vec w = apply_matrix(U_, v);
  for (auto& c : w) c = cartier_trace(c, 1);
  return w;
}

CartierStructure CartierStructure::twisted(const Polynomial& g) const {
  Matrix m = U_;
  for (auto& row : m)
    for (auto& c : row) c = c * g;
  return {ring_, std::move(m)};
}

namespace {

void verify_stable(const CartierStructure& kappa, const FreeSubmodule& X, const char* what) {
  if (!is_kappa_stable(kappa, X))
    fail(ErrorCode::NotStable, std::string(what) + " is not stable under the Cartier structure");
}

}  // namespace

CartierModule::CartierModule(QuotientPresentation pres, CartierStructure kappa)
    : pres_(std::move(pres)), kappa_(std::move(kappa)) {
  require_same_ring(pres_.ring(), kappa_.ring(), "CartierModule");
  if (kappa_.rank() != pres_.rank())
    fail(ErrorCode::InvalidInput, "twist matrix size does not match the module rank");
  verify_stable(kappa_, pres_.denominator(), "denominator");
  verify_stable(kappa_, pres_.numerator(), "numerator");
}

CartierModule CartierModule::free(CartierStructure kappa) {
  const Ring ring = kappa.ring();
  const std::size_t r = kappa.rank();
  return {QuotientPresentation(FreeSubmodule::whole(ring, r), FreeSubmodule::zero(ring, r)),
          std::move(kappa)};
}

CartierModule CartierModule::with_structure(CartierStructure kappa) const {
  return {pres_, std::move(kappa)};
}

CartierModule CartierModule::with_presentation(FreeSubmodule num, FreeSubmodule den) const {
  return {QuotientPresentation(std::move(num), std::move(den)), kappa_};
}

std::vector<Monomial> digit_monomials(const Ring& ring) {
  std::vector<Monomial> out{Monomial{}};
  for (std::size_t i = 0; i < ring.arity(); ++i) {
    std::vector<Monomial> next;
    for (const auto& m : out)
      for (std::uint32_t a = 0; a < ring.p(); ++a) {
        Monomial k = m;
        k.exp[i] = a;
        next.push_back(k);
      }
    out = std::move(next);
  }
  return out;
}

Vec kappa_apply(const CartierModule& M, const Vec& v, unsigned e) {
  check_frobenius_level(e);
  Vec cur = normal_form(v, M.denominator());
  for (unsigned i = 0; i < e; ++i) cur = normal_form(M.kappa().apply(cur), M.denominator());
  return cur;
}

FreeSubmodule kappa_image(const CartierStructure& kappa, const FreeSubmodule& X) {
  require_same_ring(kappa.ring(), X.ring(), "kappa_image");
  const auto digits = digit_monomials(X.ring());
  std::vector<Vec> gens;
  for (const auto& w : X.basis()) {
    Vec uw = apply_matrix(kappa.matrix(), w);
    for (const auto& a : digits) {
      Vec img;
      img.reserve(uw.size());
      for (const auto& c : uw) img.push_back(cartier_trace(c.mul_monomial(a), 1));
      if (!is_zero_vec(img)) gens.push_back(std::move(img));
    }
  }
  return FreeSubmodule(X.ring(), X.rank(), std::move(gens));
}

FreeSubmodule kappa_image(const CartierModule& M, const FreeSubmodule& X) {
  return sum(kappa_image(M.kappa(), X), M.denominator());
}

bool is_kappa_stable(const CartierStructure& kappa, const FreeSubmodule& X) {
  return contains(X, kappa_image(kappa, X));
}

Underline underline(const CartierModule& M, unsigned cap) {
  FreeSubmodule cur = M.numerator();
  for (unsigned k = 0; k <= cap; ++k) {
    FreeSubmodule next = kappa_image(M, cur);
    if (equal(next, cur)) return {cur, k};
    cur = next;
  }
  throw StabilizationCapExceeded("underline did not stabilize within " + std::to_string(cap) +
                                 " steps");
}

CartierModule underline_module(const CartierModule& M) {
  return M.with_presentation(underline(M).module, M.denominator());
}

bool is_F_pure(const CartierModule& M) { return underline(M).steps == 0; }

bool is_nilpotent(const CartierModule& M, unsigned e_max) {
  FreeSubmodule cur = M.numerator();
  for (unsigned k = 0; k <= e_max; ++k) {
    if (contains(M.denominator(), cur)) return true;
    FreeSubmodule next = kappa_image(M, cur);
    if (equal(next, cur)) return false;
    cur = next;
  }
  throw StabilizationCapExceeded("nilpotence test did not settle within " +
                                 std::to_string(e_max) + " steps");
}

namespace {

// Dense F_p linear algebra on coordinate vectors.
class Echelon {
 public:
  explicit Echelon(const PrimeField& F) : F_(&F) {}

  // Reduce v in place; returns true if v became zero.
  bool reduce(std::vector<std::uint32_t>& v) const {
    for (const auto& [pivot, row] : rows_) {
      if (pivot >= v.size() || v[pivot] == 0) continue;
      std::uint32_t c = v[pivot];
      for (std::size_t i = 0; i < row.size() && i < v.size(); ++i)
        if (row[i]) v[i] = F_->sub(v[i], F_->mul(c, row[i]));
    }
    return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
  }

  bool insert(std::vector<std::uint32_t> v) {
    if (reduce(v)) return false;
    std::size_t pivot = 0;
    while (v[pivot] == 0) ++pivot;
    std::uint32_t inv = F_->inv(v[pivot]);
    for (auto& x : v) x = F_->mul(x, inv);
    // Keep rows fully reduced against the new pivot.
    for (auto& [p, row] : rows_) {
      if (pivot < row.size() && row[pivot]) {
        std::uint32_t c = row[pivot];
        for (std::size_t i = 0; i < v.size(); ++i)
          if (v[i]) row[i] = F_->sub(row[i], F_->mul(c, v[i]));
      }
    }
    rows_.emplace_back(pivot, std::move(v));
    return true;
  }

  std::size_t dim() const { return rows_.size(); }
  const std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>>& rows() const {
    return rows_;
  }

 private:
  const PrimeField* F_;
  std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> rows_;
};

struct CoordKey {
  std::size_t pos;
  Monomial mono;
  bool operator<(const CoordKey& o) const {
    if (pos != o.pos) return pos < o.pos;
    return lex_less(mono, o.mono);
  }
};

std::vector<Monomial> monomials_up_to(std::size_t n, unsigned D) {
  std::vector<Monomial> out{Monomial{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Monomial> next;
    for (const auto& m : out) {
      unsigned used = static_cast<unsigned>(m.degree());
      for (unsigned a = 0; a + used <= D; ++a) {
        Monomial k = m;
        k.exp[i] = a;
        next.push_back(k);
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

NilpotentPart nilpotent_kernel_bounded(const CartierModule& M, unsigned degree_bound) {
  const Ring& R = M.ring();
  const std::size_t r = M.rank();
  const auto& F = R.field();
  const FreeSubmodule& N = M.denominator();
  // Work in R^r / N, which contains M; intersect with the numerator at the end.
  auto leads = leading_terms(N);
  auto standard = [&](std::size_t pos, const Monomial& m) {
    for (const auto& [lp, lm] : leads)
      if (lp == pos && lm.divides(m)) return false;
    return true;
  };
  std::vector<CoordKey> basis;
  for (std::size_t i = 0; i < r; ++i)
    for (const auto& m : monomials_up_to(R.arity(), degree_bound))
      if (standard(i, m)) basis.push_back({i, m});

  // Finite colength: a pure power of every variable leads in every position.
  bool finite = true;
  for (std::size_t i = 0; i < r && finite; ++i)
    for (std::size_t j = 0; j < R.arity() && finite; ++j) {
      bool found = false;
      for (const auto& [lp, lm] : leads) {
        if (lp != i) continue;
        bool pure = true;
        for (std::size_t k = 0; k < R.arity(); ++k)
          if (k != j && lm.exp[k]) pure = false;
        found = found || pure;
      }
      finite = found;
    }
  bool covers = finite;
  if (finite) {
    // Every standard monomial must have degree <= bound.
    for (std::size_t i = 0; i < r && covers; ++i)
      for (const auto& m : monomials_up_to(R.arity(), degree_bound + 1))
        if (m.degree() == degree_bound + 1 && standard(i, m)) covers = false;
  }

  std::map<CoordKey, std::size_t> index;
  for (std::size_t k = 0; k < basis.size(); ++k) index[basis[k]] = k;
  auto coords = [&](const Vec& v) {
    std::vector<std::uint32_t> out(index.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (const auto& t : v[i].terms()) {
        CoordKey key{i, t.mono};
        auto it = index.find(key);
        if (it == index.end()) {
          it = index.emplace(key, index.size()).first;
          out.push_back(0);
        }
        out[it->second] = t.coeff;
      }
    return out;
  };

  // Images kappa(x^a b) for each basis vector b and digit a.
  const auto digits = digit_monomials(R);
  std::vector<std::vector<std::vector<std::uint32_t>>> images(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Vec b = zero_vec(R, r);
    b[basis[k].pos] = Polynomial::monomial(R, basis[k].mono);
    for (const auto& a : digits) {
      Vec shifted = b;
      shifted[basis[k].pos] = shifted[basis[k].pos].mul_monomial(a);
      images[k].push_back(coords(normal_form(M.kappa().apply(shifted), N)));
    }
  }
  const std::size_t width = index.size();
  for (auto& per : images)
    for (auto& v : per) v.resize(width, 0);

  Echelon K(F);
  for (unsigned guard = 0;; ++guard) {
    // Solve sum_k c_k * (images[k][a] mod K) = 0 for all a; left kernel.
    const std::size_t cols = digits.size() * width;
    Echelon sys(F);
    std::vector<std::vector<std::uint32_t>> aug;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      std::vector<std::uint32_t> row(cols + basis.size(), 0);
      for (std::size_t a = 0; a < digits.size(); ++a) {
        auto v = images[k][a];
        K.reduce(v);
        std::copy(v.begin(), v.end(), row.begin() + a * width);
      }
      row[cols + k] = 1;
      aug.push_back(std::move(row));
    }
    for (auto& row : aug) sys.insert(row);
    Echelon next(F);
    for (const auto& [pivot, row] : sys.rows()) {
      if (pivot < cols) continue;
      // Row with zero image part: its identity part is a kernel vector.
      std::vector<std::uint32_t> v(width, 0);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        std::uint32_t c = row[cols + k];
        if (!c) continue;
        v[index[basis[k]]] = F.add(v[index[basis[k]]], c);
      }
      next.insert(std::move(v));
    }
    if (next.dim() == K.dim()) break;
    K = std::move(next);
    if (guard > basis.size() + 1) fail(ErrorCode::VerificationFailed, "nilpotent part did not settle");
  }

  std::vector<CoordKey> keys(index.size());
  for (const auto& [key, i] : index) keys[i] = key;
  std::vector<Vec> gens = N.generators();
  for (const auto& [pivot, row] : K.rows()) {
    Vec v = zero_vec(R, r);
    std::vector<std::vector<Term>> parts(r);
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i]) parts[keys[i].pos].push_back(Term{keys[i].mono, row[i]});
    for (std::size_t i = 0; i < r; ++i) v[i] = Polynomial(R, std::move(parts[i]));
    gens.push_back(std::move(v));
  }
  FreeSubmodule span(R, r, std::move(gens));
  return {intersect(span, M.numerator()), finite && covers, degree_bound};
}

CartierModule direct_sum(const CartierModule& a, const CartierModule& b) {
  require_same_ring(a.ring(), b.ring(), "direct_sum");
  const Ring& R = a.ring();
  const std::size_t ra = a.rank(), rb = b.rank();
  auto embed = [&](const FreeSubmodule& X, std::size_t offset) {
    std::vector<Vec> gens;
    for (const auto& g : X.generators()) {
      Vec v = zero_vec(R, ra + rb);
      for (std::size_t i = 0; i < g.size(); ++i) v[offset + i] = g[i];
      gens.push_back(std::move(v));
    }
    return gens;
  };
  auto block = [&](const FreeSubmodule& X, const FreeSubmodule& Y) {
    auto gens = embed(X, 0);
    for (auto& v : embed(Y, ra)) gens.push_back(std::move(v));
    return FreeSubmodule(R, ra + rb, std::move(gens));
  };
  Matrix U(ra + rb, std::vector<Polynomial>(ra + rb, Polynomial(R)));
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < ra; ++j) U[i][j] = a.kappa().matrix()[i][j];
  for (std::size_t i = 0; i < rb; ++i)
    for (std::size_t j = 0; j < rb; ++j) U[ra + i][ra + j] = b.kappa().matrix()[i][j];
  return CartierModule(QuotientPresentation(block(a.numerator(), b.numerator()),
                                            block(a.denominator(), b.denominator())),
                       CartierStructure(R, std::move(U)));
}

CartierModule quotient_module(const CartierModule& M, const FreeSubmodule& S) {
  return M.with_presentation(M.numerator(), sum(S, M.denominator()));
}

MorphismReport morphism_check(const CartierModule& source, const CartierModule& target,
                              const Matrix& phi) {
  require_same_ring(source.ring(), target.ring(), "morphism_check");
  if (phi.size() != target.rank()) return {false, "matrix rows do not match target rank"};
  for (const auto& row : phi)
    if (row.size() != source.rank()) return {false, "matrix columns do not match source rank"};
  if (!contains(target.numerator(), image(phi, source.numerator())))
    return {false, "phi does not map numerator into numerator"};
  if (!contains(target.denominator(), image(phi, source.denominator())))
    return {false, "phi does not map denominator into denominator"};
  const auto digits = digit_monomials(source.ring());
  for (const auto& w : source.numerator().generators()) {
    for (const auto& a : digits) {
      Vec xa;
      for (const auto& c : w) xa.push_back(c.mul_monomial(a));
      Vec lhs = apply_matrix(phi, source.kappa().apply(xa));
      Vec rhs = target.kappa().apply(apply_matrix(phi, xa));
      Vec diff;
      for (std::size_t i = 0; i < lhs.size(); ++i) diff.push_back(lhs[i] - rhs[i]);
      if (!member(diff, target.denominator()))
        return {false, "phi does not commute with the Cartier structures"};
    }
  }
  return {true, ""};
}

CartierMorphism::CartierMorphism(CartierModule source, CartierModule target, Matrix phi)
    : source_(std::move(source)), target_(std::move(target)), phi_(std::move(phi)) {
  auto report = morphism_check(source_, target_, phi_);
  if (!report.ok) fail(ErrorCode::NotStable, "not a Cartier morphism: " + report.reason);
}

CartierModule CartierMorphism::kernel() const {
  FreeSubmodule pre = preimage(phi_, target_.denominator(), source_.rank());
  FreeSubmodule K = sum(intersect(source_.numerator(), pre), source_.denominator());
  return source_.with_presentation(K, source_.denominator());
}

FreeSubmodule CartierMorphism::image() const {
  return sum(cartier::image(phi_, source_.numerator()), target_.denominator());
}

CartierModule CartierMorphism::cokernel() const {
  return target_.with_presentation(target_.numerator(), image());
}

bool nil_isomorphism_check(const CartierMorphism& phi, unsigned e_max) {
  return is_nilpotent(phi.kernel(), e_max) && is_nilpotent(phi.cokernel(), e_max);
}

bool is_isomorphism(const CartierMorphism& phi) {
  return phi.kernel().presentation().is_zero() && phi.cokernel().presentation().is_zero();
}

CartierMorphism compose(const CartierMorphism& second, const CartierMorphism& first) {
  return CartierMorphism(first.source(), second.target(),
                         matrix_product(second.matrix(), first.matrix()));
}

Polynomial HypersurfaceModel::lift(const Polynomial& f) const {
  std::vector<int> map(base.arity());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
  return f.remap(ambient, map);
}

FreeSubmodule HypersurfaceModel::lift(const FreeSubmodule& W) const {
  std::vector<int> map(base.arity());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
  return remap(W, ambient, map);
}

HypersurfaceModel hypersurface_model(const CartierModule& M, const std::string& var,
                                     const std::function<Polynomial(const Ring&)>& relation) {
  const Ring& R = M.ring();
  if (R.var_index(var) >= 0) fail(ErrorCode::InvalidInput, "variable name '" + var + "' is taken");
  if (R.arity() + 1 > kMaxVars) fail(ErrorCode::InvalidInput, "too many variables");
  Ring A = R.with_variable(var);
  std::vector<int> map(R.arity());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
  Polynomial g = relation(A);
  FreeSubmodule W = remap(M.numerator(), A, map);
  FreeSubmodule N = sum(remap(M.denominator(), A, map), scale(W, g));
  Matrix U;
  for (const auto& row : M.kappa().matrix()) {
    std::vector<Polynomial> r;
    for (const auto& c : row) r.push_back(c.remap(A, map));
    U.push_back(std::move(r));
  }
  CartierStructure kappa = CartierStructure(A, std::move(U)).twisted(g.pow(R.p() - 1));
  CartierModule module(QuotientPresentation(W, N), kappa);
  return HypersurfaceModel{R, A, R.arity(), g, std::move(module)};
}

HypersurfaceModel graph_embed(const CartierModule& M, const Polynomial& f, const std::string& var) {
  require_same_ring(M.ring(), f.ring(), "graph_embed");
  return hypersurface_model(M, var, [&](const Ring& A) {
    std::vector<int> map(f.ring().arity());
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
    return Polynomial::variable(A, f.ring().arity()) - f.remap(A, map);
  });
}

FreeSubmodule graph_restrict(const HypersurfaceModel& G, const Polynomial& f,
                             const FreeSubmodule& W) {
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < G.base.arity(); ++i) images.push_back(Polynomial::variable(G.base, i));
  images.push_back(f);
  std::vector<Vec> gens;
  for (const auto& g : W.generators()) {
    Vec v;
    for (const auto& c : g) v.push_back(c.substitute(G.base, images));
    gens.push_back(std::move(v));
  }
  return FreeSubmodule(G.base, W.rank(), std::move(gens));
}

HypersurfaceModel localization_embed(const CartierModule& M, const Polynomial& h,
                                     const std::string& var) {
  require_same_ring(M.ring(), h.ring(), "localization_embed");
  if (h.is_zero()) fail(ErrorCode::InvalidInput, "cannot localize at zero");
  return hypersurface_model(M, var, [&](const Ring& A) {
    std::vector<int> map(h.ring().arity());
    for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
    return h.remap(A, map) * Polynomial::variable(A, h.ring().arity()) -
           Polynomial::constant(A, 1);
  });
}

FreeSubmodule localization_contract(const HypersurfaceModel& L, const FreeSubmodule& W) {
  auto gens = W.generators();
  for (std::size_t i = 0; i < W.rank(); ++i) {
    Vec v = zero_vec(L.ambient, W.rank());
    v[i] = L.relation;
    gens.push_back(std::move(v));
  }
  FreeSubmodule E = eliminate(FreeSubmodule(L.ambient, W.rank(), std::move(gens)), {L.new_var});
  std::vector<int> down(L.ambient.arity(), -1);
  for (std::size_t i = 0; i < L.base.arity(); ++i) down[i] = static_cast<int>(i);
  std::vector<Vec> out;
  for (const auto& b : E.basis()) {
    Vec v;
    for (const auto& c : b) v.push_back(c.remap(L.base, down));
    out.push_back(std::move(v));
  }
  return FreeSubmodule(L.base, W.rank(), std::move(out));
}

CartierModule localize_presentation(const CartierModule& M, const Polynomial& h) {
  if (h.is_zero()) fail(ErrorCode::InvalidInput, "cannot localize at zero");
  return M.with_presentation(saturate(M.numerator(), h), saturate(M.denominator(), h));
}

FreeSubmodule annihilator(const FreeSubmodule& W, const FreeSubmodule& N) {
  const Ring& R = W.ring();
  FreeSubmodule acc = FreeSubmodule::whole(R, 1);
  for (const auto& w : W.basis()) {
    Matrix col;
    for (const auto& c : w) col.push_back({c});
    acc = intersect(acc, preimage(col, N, 1));
  }
  return acc;
}

bool in_radical(const Polynomial& g, const FreeSubmodule& J) {
  const Ring& R = g.ring();
  Ring A = R.with_variable(R.fresh_name("z"));
  std::vector<int> map(R.arity());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
  FreeSubmodule lifted = remap(J, A, map);
  Polynomial rel = Polynomial::constant(A, 1) -
                   Polynomial::variable(A, R.arity()) * g.remap(A, map);
  return member({Polynomial::constant(A, 1)}, sum(lifted, FreeSubmodule::ideal(A, {rel})));
}

bool same_support(const QuotientPresentation& a, const QuotientPresentation& b) {
  FreeSubmodule ja = annihilator(a.numerator(), a.denominator());
  FreeSubmodule jb = annihilator(b.numerator(), b.denominator());
  for (const auto& g : ja.basis())
    if (!in_radical(g[0], jb)) return false;
  for (const auto& g : jb.basis())
    if (!in_radical(g[0], ja)) return false;
  return true;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out;
  for (const auto& arow : a)
    for (const auto& brow : b) {
      std::vector<Polynomial> row;
      for (const auto& x : arow)
        for (const auto& y : brow) row.push_back(x * y);
      out.push_back(std::move(row));
    }
  return out;
}

Polynomial determinant(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0) fail(ErrorCode::InvalidInput, "determinant of an empty matrix");
  if (n == 1) return m[0].at(0);
  Polynomial acc(m[0][0].ring());
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    Matrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Polynomial> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    Polynomial term = m[0][j] * determinant(minor);
    acc = j % 2 ? acc - term : acc + term;
  }
  return acc;
}

}  // namespace cartier

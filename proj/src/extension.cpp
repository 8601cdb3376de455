#include "cartier/extension.hpp"

#include <random>

namespace cartier {

namespace {

std::vector<int> prefix_map(std::size_t n) {
  std::vector<int> map(n);
  for (std::size_t i = 0; i < n; ++i) map[i] = static_cast<int>(i);
  return map;
}

}  // namespace

FiniteExtension::FiniteExtension(Ring base, Polynomial g)
    : base_(std::move(base)), ambient_(g.ring()), g_(std::move(g)), disc_(base_) {
  if (ambient_.arity() != base_.arity() + 1 || ambient_.p() != base_.p())
    fail(ErrorCode::InvalidInput, "extension relation must live in the base ring plus one variable");
  for (std::size_t i = 0; i < base_.arity(); ++i)
    if (ambient_.vars()[i] != base_.vars()[i])
      fail(ErrorCode::InvalidInput, "extension ring must extend the base variables");
  auto coeffs = y_coefficients(g_);
  if (coeffs.size() < 2) fail(ErrorCode::InvalidInput, "relation must have positive degree in y");
  d_ = coeffs.size() - 1;
  if (coeffs.back() != Polynomial::constant(base_, 1))
    fail(ErrorCode::InvalidInput, "relation must be monic in y");
  tail_.assign(coeffs.begin(), coeffs.end() - 1);

  const Polynomial y = Polynomial::variable(ambient_, y_index());
  for (std::size_t j = 0; j < d_; ++j) frob_.push_back(reduce(y.pow(j * base_.p())));

  // Tr(y^m) is the trace of multiplication by y^m on 1, ..., y^{d-1}.
  std::vector<Polynomial> tr;
  for (std::size_t m = 0; m + 1 < 2 * d_; ++m) {
    Polynomial acc(base_);
    for (std::size_t j = 0; j < d_; ++j) acc += reduce(y.pow(m + j))[j];
    tr.push_back(acc);
  }
  traces_.assign(tr.begin(), tr.begin() + static_cast<std::ptrdiff_t>(d_));
  Matrix form(d_);
  for (std::size_t i = 0; i < d_; ++i)
    for (std::size_t j = 0; j < d_; ++j) form[i].push_back(tr[i + j]);
  disc_ = determinant(form);
}

std::vector<Polynomial> FiniteExtension::y_coefficients(const Polynomial& h) const {
  require_same_ring(ambient_, h.ring(), "FiniteExtension");
  const std::size_t yi = y_index();
  std::vector<std::vector<Term>> parts;
  for (const auto& t : h.terms()) {
    std::size_t e = t.mono.exp[yi];
    if (parts.size() <= e) parts.resize(e + 1);
    Monomial m = t.mono;
    m.exp[yi] = 0;
    parts[e].push_back(Term{m, t.coeff});
  }
  std::vector<Polynomial> out;
  for (auto& ts : parts) out.emplace_back(base_, std::move(ts));
  return out;
}

Vec FiniteExtension::reduce(const Polynomial& h) const {
  auto c = y_coefficients(h);
  for (std::size_t m = c.size(); m-- > d_;) {
    if (c[m].is_zero()) continue;
    Polynomial lead = c[m];
    for (std::size_t b = 0; b < d_; ++b)
      if (!tail_[b].is_zero()) c[m - d_ + b] -= lead * tail_[b];
    c[m] = Polynomial(base_);
  }
  c.resize(d_, Polynomial(base_));
  return c;
}

Polynomial FiniteExtension::from_coords(const Vec& coords) const {
  const Polynomial y = Polynomial::variable(ambient_, y_index());
  Polynomial out(ambient_);
  for (std::size_t j = 0; j < coords.size(); ++j) out += lift(coords[j]) * y.pow(j);
  return out;
}

Polynomial FiniteExtension::lift(const Polynomial& base_poly) const {
  return base_poly.remap(ambient_, prefix_map(base_.arity()));
}

Polynomial FiniteExtension::trace(const Polynomial& h) const {
  Vec c = reduce(h);
  Polynomial acc(base_);
  for (std::size_t j = 0; j < d_; ++j) acc += c[j] * traces_[j];
  return acc;
}

namespace {

FreeSubmodule blocks(const FiniteExtension& ext, const FreeSubmodule& X) {
  const std::size_t r = X.rank(), d = ext.degree();
  std::vector<Vec> gens;
  for (const auto& g : X.generators())
    for (std::size_t j = 0; j < d; ++j) {
      Vec v = zero_vec(X.ring(), d * r);
      for (std::size_t k = 0; k < r; ++k) v[j * r + k] = g[k];
      gens.push_back(std::move(v));
    }
  return FreeSubmodule(X.ring(), d * r, std::move(gens));
}

}  // namespace

FreeSubmodule shriek_submodule(const FiniteExtension& ext, const FreeSubmodule& X) {
  require_same_ring(ext.base(), X.ring(), "shriek_submodule");
  return blocks(ext, X);
}

CartierModule shriek_finite(const FiniteExtension& ext, const CartierModule& M) {
  require_same_ring(ext.base(), M.ring(), "shriek_finite");
  QuotientPresentation pres(blocks(ext, M.numerator()), blocks(ext, M.denominator()));
  return CartierModule(std::move(pres), CartierStructure(M.ring(),
                                                         kronecker(ext.frobenius_matrix(),
                                                                   M.kappa().matrix())));
}

Matrix shriek_action(const FiniteExtension& ext, std::size_t rank) {
  const Polynomial y = Polynomial::variable(ext.ambient(), ext.y_index());
  Matrix A;
  for (std::size_t j = 0; j < ext.degree(); ++j) A.push_back(ext.reduce(y.pow(j + 1)));
  return kronecker(A, identity_matrix(ext.base(), rank));
}

Vec pushforward_vector(const FiniteExtension& ext, const Vec& v) {
  const std::size_t r = v.size(), d = ext.degree();
  Vec out = zero_vec(ext.base(), d * r);
  for (std::size_t k = 0; k < r; ++k) {
    Vec c = ext.reduce(v[k]);
    for (std::size_t j = 0; j < d; ++j) out[j * r + k] = c[j];
  }
  return out;
}

FreeSubmodule pushforward_submodule(const FiniteExtension& ext, const FreeSubmodule& X) {
  require_same_ring(ext.ambient(), X.ring(), "pushforward_submodule");
  const Polynomial y = Polynomial::variable(ext.ambient(), ext.y_index());
  std::vector<Vec> gens;
  for (const auto& g : X.generators())
    for (std::size_t j = 0; j < ext.degree(); ++j) {
      Vec shifted;
      for (const auto& c : g) shifted.push_back(c * y.pow(j));
      gens.push_back(pushforward_vector(ext, shifted));
    }
  return FreeSubmodule(ext.base(), ext.degree() * X.rank(), std::move(gens));
}

Matrix pushforward_twist(const FiniteExtension& ext, const Matrix& U) {
  const std::size_t r = U.size(), d = ext.degree();
  const std::uint32_t p = ext.base().p();
  const Polynomial y = Polynomial::variable(ext.ambient(), ext.y_index());
  std::vector<Vec> ypow;  // coordinates of y^m mod g, with p-th powers taken
  auto coords_p = [&](std::size_t m) -> const Vec& {
    while (ypow.size() <= m) {
      Vec c = ext.reduce(y.pow(ypow.size()));
      for (auto& x : c) x = x.pow(p);
      ypow.push_back(std::move(c));
    }
    return ypow[m];
  };
  Matrix out(d * r, std::vector<Polynomial>(d * r, Polynomial(ext.base())));
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t l = 0; l < r; ++l) {
      auto ub = ext.y_coefficients(U[k][l]);
      for (std::size_t b = 0; b < ub.size(); ++b) {
        if (ub[b].is_zero()) continue;
        for (std::size_t j = 0; j < d; ++j) {
          if ((b + j + 1) % p != 0) continue;
          const Vec& c = coords_p((b + j + 1) / p - 1);
          for (std::size_t i = 0; i < d; ++i)
            if (!c[i].is_zero()) out[i * r + k][j * r + l] += c[i] * ub[b];
        }
      }
    }
  return out;
}

CartierModule pushforward_finite(const FiniteExtension& ext, const CartierModule& M) {
  require_same_ring(ext.ambient(), M.ring(), "pushforward_finite");
  for (std::size_t i = 0; i < M.rank(); ++i) {
    Vec v = zero_vec(M.ring(), M.rank());
    v[i] = ext.relation();
    if (!member(v, M.denominator()))
      fail(ErrorCode::InvalidInput, "relation does not annihilate the module");
  }
  QuotientPresentation pres(pushforward_submodule(ext, M.numerator()),
                            pushforward_submodule(ext, M.denominator()));
  return CartierModule(std::move(pres),
                       CartierStructure(ext.base(), pushforward_twist(ext, M.kappa().matrix())));
}

HypersurfaceModel pullback_finite(const FiniteExtension& ext, const CartierModule& M) {
  require_same_ring(ext.base(), M.ring(), "pullback_finite");
  const std::string& y = ext.ambient().vars().back();
  return hypersurface_model(M, y, [&](const Ring& A) {
    return ext.relation().remap(A, prefix_map(A.arity()));
  });
}

Vec trace_vector(const FiniteExtension& ext, const Vec& v) {
  Vec out;
  for (const auto& c : v) out.push_back(ext.trace(c));
  return out;
}

bool trace_surjective(const FiniteExtension& ext) {
  return member({Polynomial::constant(ext.base(), 1)},
                FreeSubmodule::ideal(ext.base(), ext.trace_values()));
}

bool trace_kappa_commute_check(const FiniteExtension& ext, const CartierModule& M, int samples,
                               std::uint64_t seed) {
  auto model = pullback_finite(ext, M);
  const Ring& A = model.ambient;
  const std::uint32_t p = A.p();
  std::mt19937_64 rng(seed);
  auto random_poly = [&]() {
    std::vector<Term> ts;
    int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      Monomial m;
      for (std::size_t v = 0; v < A.arity(); ++v)
        m.exp[v] = static_cast<std::uint32_t>(rng() % (2 * p + 1));
      ts.push_back(Term{m, static_cast<std::uint32_t>(1 + rng() % (p - 1))});
    }
    return Polynomial(A, std::move(ts));
  };
  const auto& gens = model.module.numerator().generators();
  for (int s = 0; s < samples; ++s) {
    Vec z = zero_vec(A, M.rank());
    for (const auto& g : gens) {
      Polynomial a = random_poly();
      for (std::size_t k = 0; k < z.size(); ++k) z[k] += a * g[k];
    }
    Vec lhs = trace_vector(ext, model.module.kappa().apply(z));
    Vec rhs = M.kappa().apply(trace_vector(ext, z));
    Vec diff;
    for (std::size_t k = 0; k < lhs.size(); ++k) diff.push_back(lhs[k] - rhs[k]);
    if (!member(diff, M.denominator())) return false;
  }
  return true;
}

}  // namespace cartier

#include "cartier/checks.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "cartier/frobenius.hpp"
#include "cartier/parse.hpp"

namespace cartier {

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skip: return "SKIP";
  }
  return "?";
}

bool CheckReport::passed() const { return count(CheckStatus::Fail) == 0; }

std::size_t CheckReport::count(CheckStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [&](const CheckItem& i) { return i.status == s; }));
}

namespace {

using Rng = std::mt19937_64;

CheckItem verdict(std::string name, bool ok, std::string detail = "") {
  return CheckItem{std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)};
}

CheckItem guarded(const std::string& name, const std::function<CheckItem()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return CheckItem{name, CheckStatus::Fail, std::string(error_code_name(e.code())) + ": " + e.what()};
  } catch (const std::exception& e) {
    return CheckItem{name, CheckStatus::Fail, e.what()};
  }
}

std::vector<std::string> var_names(std::size_t n) {
  static const char* names[] = {"x", "y", "z", "w"};
  return std::vector<std::string>(names, names + n);
}

// Random polynomial of total degree <= max_deg with at most max_terms terms.
Polynomial random_poly(Rng& rng, const Ring& R, int max_terms, unsigned max_deg) {
  std::uniform_int_distribution<std::uint32_t> co(1, R.p() - 1);
  std::vector<Term> ts;
  for (int k = std::uniform_int_distribution<int>(1, max_terms)(rng); k > 0; --k) {
    Monomial m;
    unsigned left = std::uniform_int_distribution<unsigned>(0, max_deg)(rng);
    for (std::size_t i = 0; i < R.arity(); ++i) {
      unsigned e = i + 1 == R.arity() ? left : std::uniform_int_distribution<unsigned>(0, left)(rng);
      m.exp[i] = e;
      left -= e;
    }
    ts.push_back(Term{m, co(rng)});
  }
  return Polynomial(R, std::move(ts));
}

Polynomial random_nonzero(Rng& rng, const Ring& R, int max_terms, unsigned max_deg) {
  for (;;)
    if (auto f = random_poly(rng, R, max_terms, max_deg); !f.is_zero()) return f;
}

Polynomial random_nonconstant(Rng& rng, const Ring& R, int max_terms, unsigned max_deg) {
  for (;;)
    if (auto f = random_poly(rng, R, max_terms, max_deg); !f.is_constant()) return f;
}

Rational random_t(Rng& rng, std::int64_t max_den, std::int64_t max_num) {
  std::int64_t d = std::uniform_int_distribution<std::int64_t>(1, max_den)(rng);
  return Rational(std::uniform_int_distribution<std::int64_t>(1, max_num * d)(rng), d);
}

std::uint32_t pick(Rng& rng, std::initializer_list<std::uint32_t> xs) {
  return *(xs.begin() + rng() % xs.size());
}

CartierModule line(const Polynomial& u) { return CartierModule::free(CartierStructure::scalar(u)); }

std::string describe(const CartierModule& M, const Polynomial& f) {
  std::ostringstream os;
  os << "p=" << M.ring().p() << " u=";
  const auto& U = M.kappa().matrix();
  if (U.size() == 1) {
    os << U[0][0].to_string();
  } else {
    os << "[";
    for (std::size_t i = 0; i < U.size(); ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < U[i].size(); ++j) os << (j ? ", " : "") << U[i][j].to_string();
    }
    os << "]";
  }
  os << " f=" << f.to_string();
  return os.str();
}

std::vector<Rational> grid(const Rational& hi, std::int64_t max_den) {
  std::vector<Rational> g{Rational(0)};
  auto c = farey_candidates(Rational(0), hi, max_den);
  g.insert(g.end(), c.begin(), c.end());
  return g;
}

// Instance shared by prop32, lemma31 and skoda.
struct PairInstance {
  CartierModule M;
  Polynomial f;
  Rational t;
  std::string label() const { return describe(M, f) + " t=" + to_string(t); }
};

PairInstance random_pair(Rng& rng) {
  Ring R(pick(rng, {2, 3, 5}), var_names(1 + rng() % 2));
  auto u = random_nonzero(rng, R, 3, 4);
  auto f = random_nonconstant(rng, R, 3, 4);
  return PairInstance{line(u), f, random_t(rng, 12, 2)};
}

TauContext context(const CartierModule& M, const Polynomial& f,
                   Convention conv = Convention::CeilPE) {
  return TauContext(M, f, suggest_test_element(M, f), conv);
}

// -- suites ------------------------------------------------------------------

CheckReport suite_prop32(std::uint64_t seed, int cases) {
  CheckReport rep{"prop32", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    auto in = random_pair(rng);
    rep.items.push_back(guarded(in.label(), [&] {
      auto ctx = context(in.M, in.f);
      auto lhs = kappa_image(in.M, ctx.tau(in.t * Rational(in.M.ring().p())).value);
      return verdict(in.label(), equal(lhs, ctx.tau(in.t).value), "kappa(tau(tp)) vs tau(t)");
    }));
  }
  return rep;
}

CheckReport suite_lemma31(std::uint64_t seed, int cases) {
  CheckReport rep{"lemma31", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    auto in = random_pair(rng);
    rep.items.push_back(guarded(in.label(), [&] {
      auto e = context(in.M, in.f, Convention::CeilPE).tau(in.t).value;
      auto d = context(in.M, in.f, Convention::CeilPEMinus1).tau(in.t).value;
      return verdict(in.label(), equal(e, d), "ceil(tp^e) vs ceil(t(p^e-1))");
    }));
  }
  return rep;
}

CheckReport suite_skoda(std::uint64_t seed, int cases) {
  CheckReport rep{"skoda", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    auto in = random_pair(rng);
    in.t = in.t - Rational(floor(in.t));
    rep.items.push_back(guarded(in.label(), [&] {
      auto ctx = context(in.M, in.f);
      auto a = sum(scale(ctx.tau(in.t).value, in.f), in.M.denominator());
      auto b = ctx.tau(in.t + 1).value;
      if (!contains(b, a)) return verdict(in.label(), false, "f tau(t) not inside tau(t+1)");
      bool eq = in.t == Rational(0) || equal(a, b);
      return verdict(in.label(), eq, "tau(t+1) = f tau(t) for t > 0");
    }));
  }
  return rep;
}

FreeSubmodule random_ideal(Rng& rng, const Ring& R, int gens, unsigned deg) {
  std::vector<Polynomial> ps;
  for (int i = 0; i < gens; ++i) ps.push_back(random_nonconstant(rng, R, 3, deg));
  return FreeSubmodule::ideal(R, ps);
}

CheckReport suite_adjunction(std::uint64_t seed, int cases) {
  CheckReport rep{"adjunction", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    Ring R(k % 2 ? 3 : 2, {"x", "y"});
    auto W = random_ideal(rng, R, 1 + static_cast<int>(rng() % 3), 3);
    auto J = k % 3 == 0 ? frobenius_root(W, 1) : random_ideal(rng, R, 1 + static_cast<int>(rng() % 2), 2);
    std::string label = "p=" + std::to_string(R.p()) + " W=" + W.to_string();
    rep.items.push_back(guarded(label, [&] {
      for (unsigned e : {1u, 2u}) {
        auto root = frobenius_root(W, e);
        if (!equal(root, frobenius_root_oracle(W, e)))
          return verdict(label, false, "root differs from the oracle at e=" + std::to_string(e));
        if (contains(bracket_power(J, e), W) != contains(J, root))
          return verdict(label, false, "adjunction fails for J=" + J.to_string());
      }
      return verdict(label, true, "J=" + J.to_string());
    }));
  }
  return rep;
}

CheckReport suite_prop38(std::uint64_t seed, int cases) {
  CheckReport rep{"prop38", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    Ring R(pick(rng, {2, 3}), {"x"});
    auto M = line(random_nonzero(rng, R, 2, 2));
    auto f = random_nonconstant(rng, R, 2, 3);
    rep.items.push_back(graph_check(M, f, random_t(rng, 6, 2)));
  }
  return rep;
}

CheckReport suite_localization(std::uint64_t seed, int cases) {
  CheckReport rep{"localization", {}};
  Ring R3(3, {"x"});
  rep.items.push_back(localization_check(line(parse_polynomial(R3, "x")), parse_polynomial(R3, "x"),
                                         parse_polynomial(R3, "x + 1"), Rational(2), 6));
  Rng rng(seed);
  for (int k = 1; k < cases; ++k) {
    Ring R(pick(rng, {2, 3}), {"x"});
    auto M = line(random_nonzero(rng, R, 2, 2));
    auto f = random_nonconstant(rng, R, 2, 2);
    auto h = random_nonzero(rng, R, 2, 2);
    rep.items.push_back(localization_check(M, f, h, Rational(1), R.p() * (R.p() - 1)));
  }
  return rep;
}

CheckReport suite_pushforward(std::uint64_t seed, int cases) {
  CheckReport rep{"pushforward", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    Ring R(k % 2 ? 3 : 2, {"x"});
    auto ext = artin_schreier_extension(R);
    auto M = line(random_nonzero(rng, R, 2, 1));
    auto f = random_nonconstant(rng, R, 2, 2);
    std::int64_t den = R.p() * (R.p() - 1);
    rep.items.push_back(pushforward_check(ext, M, f, Rational(3, 2), den));
    rep.items.push_back(pushforward_gr_check(ext, M, f, Rational(3, 2), den));
  }
  return rep;
}

CheckReport suite_shriek(std::uint64_t seed, int cases) {
  CheckReport rep{"shriek", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    Ring R(k % 2 ? 3 : 2, {"x"});
    auto ext = rng() % 2 ? artin_schreier_extension(R) : extension_from_text(R, "y^2 - x^3");
    auto M = line(random_nonzero(rng, R, 2, 1));
    auto f = random_nonconstant(rng, R, 2, 2);
    for (auto& it : shriek_check(ext, M, f, Rational(2), R.p() * (R.p() - 1)))
      rep.items.push_back(std::move(it));
  }
  return rep;
}

CheckReport suite_trace(std::uint64_t seed, int cases) {
  CheckReport rep{"trace", {}};
  Rng rng(seed);
  for (std::uint32_t p : {2u, 3u}) {
    Ring R(p, {"x"});
    auto ext = artin_schreier_extension(R);
    auto u = random_nonzero(rng, R, 2, 2);
    std::vector<CartierModule> mods{line(Polynomial::constant(R, 1)), line(u)};
    Matrix swap{{Polynomial(R), Polynomial::constant(R, 1)}, {u, Polynomial(R)}};
    mods.push_back(CartierModule::free(CartierStructure(R, swap)));
    for (const auto& M : mods) {
      std::string label = describe(M, Polynomial::variable(R, 0)) + " trace";
      std::uint64_t s = rng();
      rep.items.push_back(guarded(label, [&] {
        bool surj = trace_surjective(ext);
        bool comm = trace_kappa_commute_check(ext, M, cases, s);
        return verdict(label, surj && comm,
                       std::string(surj ? "" : "trace not surjective; ") +
                           (comm ? "Tr o kappa = kappa o Tr" : "Tr o kappa differs from kappa o Tr"));
      }));
    }
  }
  return rep;
}

CheckReport suite_thm75(std::uint64_t seed, int cases) {
  CheckReport rep{"thm75", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    Ring R(k % 2 ? 3 : 2, {"x"});
    auto M = line(random_nonzero(rng, R, 2, 1));
    auto f = random_nonconstant(rng, R, 2, 2);
    rep.items.push_back(etale_transformation_check(artin_schreier_extension(R), M, f, Rational(3, 2),
                                                   R.p() * (R.p() - 1)));
  }
  return rep;
}

CheckReport suite_thm77(std::uint64_t seed, int cases) {
  CheckReport rep{"thm77", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    Ring R(pick(rng, {2, 3}), {"x", "y"});
    Matrix U;
    do {
      U.assign(2, std::vector<Polynomial>(2, Polynomial(R)));
      for (auto& row : U)
        for (auto& c : row) c = Polynomial::constant(R, static_cast<std::int64_t>(rng() % R.p()));
    } while (determinant(U).is_zero());
    auto M = CartierModule::free(CartierStructure(R, U));
    auto f = random_nonconstant(rng, R, 3, 3);
    Rational t = random_t(rng, 2 * R.p() * (R.p() - 1), 2);
    std::string label = describe(M, f) + " t=" + to_string(t);
    rep.items.push_back(guarded(label, [&] {
      auto ideal = context(line(Polynomial::constant(R, 1)), f).tau(t).value;
      std::vector<Vec> gens;
      for (const auto& g : ideal.basis()) {
        gens.push_back({g[0], Polynomial(R)});
        gens.push_back({Polynomial(R), g[0]});
      }
      return verdict(label, equal(context(M, f).tau(t).value, FreeSubmodule(R, 2, gens)),
                     "tau(M, f^t) vs tau(R, f^t) M");
    }));
  }
  return rep;
}

CheckReport suite_axioms(std::uint64_t seed, int cases) {
  CheckReport rep{"axioms", {}};
  Rng rng(seed);
  for (int k = 0; k < cases; ++k) {
    Ring R(pick(rng, {2, 3}), var_names(1 + rng() % 2));
    auto M = line(random_nonzero(rng, R, 2, 2));
    auto f = random_nonconstant(rng, R, 2, 3);
    std::string label = describe(M, f);
    try {
      auto T = compute_vfiltration(M, f, Rational(0), Rational(2), R.p() * (R.p() - 1));
      auto ax = verify_axioms(T);
      bool ok = ax.all_ok();
      std::string detail = ok ? std::to_string(T.jumps.size()) + " jumps" : "axiom failure";
      for (const auto& t : T.grid) {
        if (t + 1 > T.hi) break;
        if (!contains(T.value_at(t + 1), scale(T.value_at(t), f))) {
          ok = false;
          detail = "f V^t not inside V^{t+1} at t=" + to_string(t);
        }
      }
      for (const auto& j : T.jumps)
        if (j.t <= 1 && !mu_f_check(T, j.t)) {
          ok = false;
          detail = "mu_f fails at t=" + to_string(j.t);
        }
      rep.items.push_back(verdict(label, ok, detail));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotFRegular)
        rep.items.push_back(CheckItem{label, CheckStatus::Skip, "not F-regular"});
      else
        rep.items.push_back(verdict(label, false, e.what()));
    }
  }
  return rep;
}

using Suite = CheckReport (*)(std::uint64_t, int);

const std::map<std::string, Suite>& suite_table() {
  static const std::map<std::string, Suite> t{
      {"adjunction", suite_adjunction}, {"axioms", suite_axioms},
      {"lemma31", suite_lemma31},       {"localization", suite_localization},
      {"prop32", suite_prop32},         {"prop38", suite_prop38},
      {"pushforward", suite_pushforward}, {"shriek", suite_shriek},
      {"skoda", suite_skoda},           {"thm75", suite_thm75},
      {"thm77", suite_thm77},           {"trace", suite_trace}};
  return t;
}

// -- worked examples ---------------------------------------------------------

CheckReport repro_cor79() {
  CheckReport rep{"cor79", {}};
  const std::vector<Rational> ts{Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                 Rational(1),    Rational(3, 2), Rational(2)};
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    Ring R(p, {"x"});
    auto x = Polynomial::variable(R, 0);
    std::string label = "p=" + std::to_string(p) + ": tau(R, x^t) = (x^floor(t))";
    rep.items.push_back(guarded(label, [&] {
      TauContext ctx(line(Polynomial::constant(R, 1)), x, x);
      for (const auto& t : ts) {
        auto want = FreeSubmodule::ideal(R, {x.pow(static_cast<std::uint64_t>(floor(t)))});
        auto got = ctx.tau(t);
        if (!equal(got.value, want) || !got.certified)
          return verdict(label, false, "t=" + to_string(t) + " gives " + got.value.to_string());
      }
      return verdict(label, true);
    }));
  }
  return rep;
}

CheckReport repro_ex712() {
  CheckReport rep{"ex712", {}};
  for (std::uint32_t p : {3u, 5u, 7u}) {
    Ring R(p, {"x"});
    auto x = Polynomial::variable(R, 0);
    auto M = line(x);
    const Rational t0(p - 2, p - 1);
    const std::int64_t den = p * (p - 1);
    const std::string pre = "p=" + std::to_string(p) + ": ";
    TauContext ctx(M, x, x * x);
    auto unit = FreeSubmodule::whole(R, 1), ideal = FreeSubmodule::ideal(R, {x});

    rep.items.push_back(guarded(pre + "tau = R below " + to_string(t0) + ", (x) up to 1", [&] {
      for (const auto& t : grid(Rational(1), den)) {
        const auto& want = t < t0 ? unit : ideal;
        if (!equal(ctx.tau(t).value, want))
          return verdict(pre + "tau values", false, "t=" + to_string(t));
      }
      return verdict(pre + "tau = R below " + to_string(t0) + ", (x) up to 1", true);
    }));
    rep.items.push_back(guarded(pre + "jumps on (0,1] = {" + to_string(t0) + "}", [&] {
      auto scan = jumping_numbers(ctx, Rational(0), Rational(1), den);
      std::string got;
      for (const auto& j : scan.jumps) got += (got.empty() ? "" : ", ") + to_string(j);
      return verdict(pre + "jumps on (0,1] = {" + to_string(t0) + "}",
                     scan.jumps == std::vector<Rational>{t0}, "found {" + got + "}");
    }));
    rep.items.push_back(guarded(pre + "Gr^[0,1] pieces", [&] {
      auto T = compute_vfiltration(M, x, Rational(0), Rational(1), den, x * x);
      auto a = gr_range(T, Rational(0), Rational(1), GrConvention::A);
      auto b = gr_range(T, Rational(0), Rational(1), GrConvention::B);
      if (a.size() != 1 || b.size() != 1 || a[0].t != t0)
        return verdict(pre + "Gr^[0,1] has one nonzero piece", false,
                       std::to_string(a.size()) + " pieces");
      Vec img = kappa_apply(a[0].module, {Polynomial::constant(R, 1)}, 1);
      bool fixes_one = member({img[0] - Polynomial::constant(R, 1)}, a[0].module.denominator());
      bool a_nil = gr_is_crystal_zero(a[0]);
      bool b_one_step = contains(b[0].module.denominator(),
                                 kappa_image(b[0].module, b[0].module.numerator()));
      std::ostringstream os;
      os << "A: C o x^" << a[0].exponent + 1 << " fixes 1, not nilpotent; B: C o x^"
         << b[0].exponent + 1 << " kills the piece in one step. The stated nilpotence of "
         << "Gr^[0,1] holds under B only";
      return verdict(pre + "Gr^[0,1]: A non-nilpotent, B nilpotent in one step",
                     fixes_one && !a_nil && b_one_step, os.str());
    }));
  }
  return rep;
}

CheckReport repro_ex621() {
  CheckReport rep{"ex621", {}};
  Ring R(3, {"x"});
  auto ext = extension_from_text(R, "y^2 - x^3");
  auto C = line(Polynomial::constant(R, 1));
  auto Sh = shriek_finite(ext, C);
  rep.items.push_back(guarded("f^! R not F-pure", [&] {
    return verdict("f^! R not F-pure", !is_F_pure(Sh));
  }));
  rep.items.push_back(guarded("phi_y outside the kappa image", [&] {
    return verdict("phi_y outside the kappa image",
                   !member(unit_vec(R, 2, 1), kappa_image(Sh, Sh.numerator())));
  }));
  for (auto& it : shriek_check(ext, C, Polynomial::variable(R, 0), Rational(2), 6))
    rep.items.push_back(std::move(it));
  return rep;
}

CheckReport repro_prop38() {
  CheckReport rep{"prop38", {}};
  Ring R(3, {"x"});
  auto C = line(Polynomial::constant(R, 1));
  for (const char* f : {"x", "x^2"})
    for (Rational t : {Rational(1, 2), Rational(1)})
      rep.items.push_back(graph_check(C, parse_polynomial(R, f), t));
  return rep;
}

CheckReport repro_thm75() {
  CheckReport rep{"thm75", {}};
  for (std::uint32_t p : {2u, 3u}) {
    Ring R(p, {"x"});
    rep.items.push_back(etale_transformation_check(artin_schreier_extension(R),
                                                   line(Polynomial::constant(R, 1)),
                                                   Polynomial::variable(R, 0), Rational(3, 2),
                                                   p * p * (p - 1)));
  }
  return rep;
}

CheckReport repro_lemma62() {
  CheckReport rep{"lemma62", {}};
  for (std::uint32_t p : {2u, 3u}) {
    Ring R(p, {"x"});
    auto ext = artin_schreier_extension(R);
    auto C = line(Polynomial::constant(R, 1));
    auto x = Polynomial::variable(R, 0);
    rep.items.push_back(pushforward_check(ext, C, x, Rational(3, 2), p * p * (p - 1)));
    rep.items.push_back(pushforward_gr_check(ext, C, x, Rational(3, 2), p * p * (p - 1)));
  }
  return rep;
}

const std::map<std::string, CheckReport (*)()>& repro_table() {
  static const std::map<std::string, CheckReport (*)()> t{
      {"cor79", repro_cor79},   {"ex621", repro_ex621},   {"ex712", repro_ex712},
      {"lemma62", repro_lemma62}, {"prop38", repro_prop38}, {"thm75", repro_thm75}};
  return t;
}

template <class Table>
std::vector<std::string> keys(const Table& t) {
  std::vector<std::string> out;
  for (const auto& [k, v] : t) out.push_back(k);
  return out;
}

}  // namespace

const std::vector<std::string>& check_suites() {
  static const auto names = keys(suite_table());
  return names;
}

CheckReport run_check(const std::string& suite, std::uint64_t seed, int cases) {
  auto it = suite_table().find(suite);
  if (it == suite_table().end()) fail(ErrorCode::InvalidInput, "unknown check suite '" + suite + "'");
  if (cases < 1) fail(ErrorCode::InvalidInput, "cases must be positive");
  return it->second(seed, cases);
}

const std::vector<std::string>& repro_targets() {
  static const auto names = keys(repro_table());
  return names;
}

CheckReport run_repro(const std::string& target) {
  auto it = repro_table().find(target);
  if (it == repro_table().end()) fail(ErrorCode::InvalidInput, "unknown repro target '" + target + "'");
  return it->second();
}

FreeSubmodule frobenius_root_oracle(const FreeSubmodule& W, unsigned e) {
  const Ring& R = W.ring();
  const std::uint64_t q = prime_power(R.p(), e);
  std::vector<Monomial> box{Monomial{}};
  for (std::size_t i = 0; i < R.arity(); ++i) {
    std::vector<Monomial> next;
    for (const auto& m : box)
      for (std::uint64_t a = 0; a < q; ++a) {
        Monomial k = m;
        k.exp[i] = static_cast<std::uint32_t>(a);
        next.push_back(k);
      }
    box = std::move(next);
  }
  std::vector<Vec> gens;
  for (const auto& g : W.generators())
    for (const auto& b : box) {
      Vec v;
      for (const auto& c : g) v.push_back(cartier_trace(c.mul_monomial(b), e));
      gens.push_back(std::move(v));
    }
  return FreeSubmodule(R, W.rank(), std::move(gens));
}

FiniteExtension extension_from_text(const Ring& R, const std::string& g) {
  Ring A = R.with_variable("y");
  return FiniteExtension(R, parse_polynomial(A, g));
}

FiniteExtension artin_schreier_extension(const Ring& R) {
  const std::string p = std::to_string(R.p());
  return extension_from_text(R, "y^" + p + " - y - " + R.vars().front());
}

CheckItem graph_check(const CartierModule& M, const Polynomial& f, const Rational& t) {
  std::string label = describe(M, f) + " t=" + to_string(t) + ": graph tau restricts to tau(M, f^t)";
  return guarded(label, [&] {
    auto G = graph_embed(M, f, M.ring().fresh_name("s"));
    Polynomial c = suggest_test_element(M, f);
    Polynomial s = Polynomial::variable(G.ambient, G.new_var);
    auto up = TauContext(G.module, s, G.lift(c)).tau(t).value;
    auto down = sum(graph_restrict(G, f, up), M.denominator());
    auto want = TauContext(M, f, c).tau(t).value;
    return verdict(label, equal(down, want), "restricted " + down.to_string() + ", direct " + want.to_string());
  });
}

CheckItem localization_check(const CartierModule& M, const Polynomial& f, const Polynomial& h,
                             const Rational& hi, std::int64_t max_den) {
  std::string label = describe(M, f) + " h=" + h.to_string() + ": saturation commutes with tau";
  return guarded(label, [&] {
    auto L = localization_embed(M, h, M.ring().fresh_name("z"));
    Polynomial c = suggest_test_element(M, f);
    TauContext base(M, f, c), loc(L.module, L.lift(f), L.lift(c));
    auto ts = grid(hi, max_den);
    for (const auto& t : ts) {
      auto lhs = saturate(base.tau(t).value, h);
      auto rhs = localization_contract(L, loc.tau(t).value);
      if (!equal(lhs, rhs)) return verdict(label, false, "differs at t=" + to_string(t));
    }
    return verdict(label, true, std::to_string(ts.size()) + " grid points");
  });
}

namespace {

struct EtaleSides {
  HypersurfaceModel model;
  CartierModule push;
  TauContext top;   // over the ambient ring, along f
  TauContext pushed;  // the pushforward over R
  TauContext base;  // M itself
};

EtaleSides etale_sides(const FiniteExtension& ext, const CartierModule& M, const Polynomial& f) {
  auto model = pullback_finite(ext, M);
  Polynomial c = suggest_test_element(M, f);
  auto push = pushforward_finite(ext, model.module);
  TauContext top(model.module, model.lift(f), model.lift(c));
  TauContext pushed(push, f, c);
  TauContext base(M, f, c);
  return EtaleSides{std::move(model), std::move(push), std::move(top), std::move(pushed),
                    std::move(base)};
}

std::string ext_label(const FiniteExtension& ext, const CartierModule& M, const Polynomial& f) {
  return describe(M, f) + " g=" + ext.relation().to_string();
}

}  // namespace

CheckItem pushforward_check(const FiniteExtension& ext, const CartierModule& M,
                            const Polynomial& f, const Rational& hi, std::int64_t max_den) {
  std::string label = ext_label(ext, M, f) + ": pushforward of V_S equals V of the pushforward";
  return guarded(label, [&] {
    auto sides = etale_sides(ext, M, f);
    auto ts = grid(hi, max_den);
    for (const auto& t : ts)
      if (!equal(pushforward_submodule(ext, sides.top.tau(t).value), sides.pushed.tau(t).value))
        return verdict(label, false, "differs at t=" + to_string(t));
    return verdict(label, true, std::to_string(ts.size()) + " grid points");
  });
}

CheckItem pushforward_gr_check(const FiniteExtension& ext, const CartierModule& M,
                               const Polynomial& f, const Rational& hi, std::int64_t max_den) {
  std::string label = ext_label(ext, M, f) + ": Gr commutes with pushforward at the jumps";
  return guarded(label, [&] {
    auto sides = etale_sides(ext, M, f);
    const std::uint32_t p = M.ring().p();
    auto scan = jumping_numbers(sides.pushed, Rational(0), hi, max_den);
    if (scan.jumps.empty()) return verdict(label, false, "no jumps in range");
    Polynomial fS = sides.model.lift(f);
    for (const auto& t : scan.jumps) {
      std::uint64_t n = gr_exponent(t, p, GrConvention::A);
      auto lS = sides.top.left_limit(t), lR = sides.pushed.left_limit(t);
      CartierModule pieceS(QuotientPresentation(lS.result.value, sides.top.tau(t).value),
                           sides.model.module.kappa().twisted(fS.pow(n)));
      CartierModule pieceR(QuotientPresentation(lR.result.value, sides.pushed.tau(t).value),
                           sides.push.kappa().twisted(f.pow(n)));
      auto moved = pushforward_finite(ext, pieceS);
      if (!equal(moved.numerator(), pieceR.numerator()) ||
          !equal(moved.denominator(), pieceR.denominator()))
        return verdict(label, false, "pieces differ as modules at t=" + to_string(t));
      Matrix id = identity_matrix(M.ring(), pieceR.rank());
      auto mc = morphism_check(moved, pieceR, id);
      if (!mc.ok) return verdict(label, false, "structures differ at t=" + to_string(t) + ": " + mc.reason);
      if (!is_isomorphism(CartierMorphism(moved, pieceR, id)))
        return verdict(label, false, "identity not an isomorphism at t=" + to_string(t));
    }
    std::string js;
    for (const auto& t : scan.jumps) js += (js.empty() ? "" : ", ") + to_string(t);
    return verdict(label, true, "jumps {" + js + "}");
  });
}

CheckItem etale_transformation_check(const FiniteExtension& ext, const CartierModule& M,
                                     const Polynomial& f, const Rational& hi,
                                     std::int64_t max_den) {
  std::string label = ext_label(ext, M, f) + ": tau over S meets R in tau(M, f^t)";
  return guarded(label, [&] {
    auto sides = etale_sides(ext, M, f);
    auto ts = grid(hi, max_den);
    for (const auto& t : ts) {
      // localization_contract only uses the relation and the extra variable.
      auto down = localization_contract(sides.model, sides.top.tau(t).value);
      if (!equal(down, sides.base.tau(t).value))
        return verdict(label, false, "differs at t=" + to_string(t));
    }
    return verdict(label, true, std::to_string(ts.size()) + " grid points");
  });
}

std::vector<CheckItem> shriek_check(const FiniteExtension& ext, const CartierModule& M,
                                    const Polynomial& f, const Rational& hi,
                                    std::int64_t max_den) {
  const std::string pre = ext_label(ext, M, f) + ": ";
  const std::string inc = pre + "tau(f^! M) inside f^! tau(M)";
  const std::string ev = pre + "evaluation at 1 maps tau(f^! M) into tau(M)";
  std::vector<CheckItem> out;
  try {
    auto Sh = shriek_finite(ext, M);
    TauContext top(Sh, f, suggest_test_element(Sh, f));
    TauContext base(M, f, suggest_test_element(M, f));
    const std::size_t r = M.rank();
    std::optional<Rational> bad_inc, bad_ev;
    for (const auto& t : grid(hi, max_den)) {
      auto T = top.tau(t).value;
      auto B = base.tau(t).value;
      if (!bad_inc && !contains(shriek_submodule(ext, B), T)) bad_inc = t;
      std::vector<Vec> at_one;
      for (const auto& g : T.generators()) at_one.emplace_back(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(r));
      if (!bad_ev && !contains(B, FreeSubmodule(M.ring(), r, std::move(at_one)))) bad_ev = t;
    }
    out.push_back(verdict(inc, !bad_inc, bad_inc ? "fails at t=" + to_string(*bad_inc) : ""));
    out.push_back(verdict(ev, !bad_ev, bad_ev ? "fails at t=" + to_string(*bad_ev) : ""));
  } catch (const std::exception& e) {
    out.push_back(verdict(inc, false, e.what()));
    out.push_back(verdict(ev, false, e.what()));
  }
  return out;
}

}  // namespace cartier

#include "cartier/vfilt.hpp"

#include <algorithm>

namespace cartier {

const FiltrationJump* FiltrationTable::jump_at(const Rational& t) const {
  for (const auto& j : jumps)
    if (j.t == t) return &j;
  return nullptr;
}

const FreeSubmodule& FiltrationTable::value_at(const Rational& t) const {
  if (!in_range(t))
    fail(ErrorCode::InvalidInput, "t = " + to_string(t) + " outside the table range [" +
                                      to_string(lo) + ", " + to_string(hi) + "]");
  const FreeSubmodule* v = &V0;
  for (const auto& j : jumps) {
    if (j.t > t) break;
    v = &j.value;
  }
  return *v;
}

const FreeSubmodule& FiltrationTable::left_at(const Rational& t) const {
  if (const auto* j = jump_at(t)) return j->left;
  return value_at(t);
}

FiltrationTable compute_vfiltration(const CartierModule& M, const Polynomial& f,
                                    const Rational& lo, const Rational& hi, std::int64_t max_den,
                                    std::optional<Polynomial> c, unsigned threads) {
  if (!is_regular_element(M, f))
    fail(ErrorCode::NonDegenerate, "f is a zero divisor on the module");
  Polynomial test = c ? *c : suggest_test_element(M, f);
  if (!is_F_regular(M, test).value)
    fail(ErrorCode::NotFRegular, "module is not F-regular for test element " + test.to_string());
  TauContext ctx(M, f, test);
  JumpScan scan = jumping_numbers(ctx, lo, hi, max_den, threads);

  FiltrationTable table{M, f, test, lo, hi, max_den, scan.values.front(), {}, {lo}};
  table.grid.insert(table.grid.end(), scan.candidates.begin(), scan.candidates.end());
  for (const auto& t : scan.jumps) {
    auto pos = std::find(table.grid.begin(), table.grid.end(), t) - table.grid.begin();
    const FreeSubmodule& before = scan.values[static_cast<std::size_t>(pos) - 1];
    auto left = ctx.left_limit(t);
    table.jumps.push_back(FiltrationJump{t, scan.values[static_cast<std::size_t>(pos)],
                                         left.result.value, left.result.certified,
                                         equal(left.result.value, before)});
  }
  return table;
}

bool AxiomReport::all_ok() const { return decreasing.ok && i.ok && ii.ok && iii.ok && iv.ok; }

namespace {

void record(AxiomCheck& check, const Rational& t, const std::string& why) {
  check.tested = true;
  if (check.ok || t < *check.first_failure) {
    check.ok = false;
    check.first_failure = t;
    check.detail = why;
  }
}

}  // namespace

AxiomReport verify_axioms(const FiltrationTable& table) {
  AxiomReport rep;
  const CartierModule& M = table.module;
  const FreeSubmodule& N = M.denominator();
  const std::int64_t p = M.ring().p();

  rep.decreasing.tested = true;
  const FreeSubmodule* prev = &table.V0;
  for (const auto& j : table.jumps) {
    if (!contains(*prev, j.value) || contains(j.value, *prev))
      record(rep.decreasing, j.t, "value does not strictly decrease at the jump");
    if (!contains(j.left, j.value)) record(rep.decreasing, j.t, "left limit is below the value");
    prev = &j.value;
  }

  rep.i.tested = true;
  // A jump at the first grid point is fine as long as V is constant just below it.
  if (table.grid.size() > 1)
    if (const auto* j = table.jump_at(table.grid[1]); j && !equal(j->left, table.V0))
      record(rep.i, table.grid[1], "V is not constant to the right of the start");
  if (table.lo == Rational(0) && !equal(table.V0, M.numerator()))
    record(rep.i, Rational(0), "V^0 differs from the module");

  rep.ii.tested = true;
  for (const auto& t : table.grid) {
    const FreeSubmodule& V = table.value_at(t);
    if (!contains(N, intersect(V, colon(N, table.f))))
      record(rep.ii, t, "multiplication by f is not injective on V^t");
  }

  for (const auto& t : table.grid) {
    if (t <= 1 || t - 1 < table.lo) continue;
    rep.iii.tested = true;
    FreeSubmodule want = sum(scale(table.value_at(t - 1), table.f), N);
    if (!equal(table.value_at(t), want))
      record(rep.iii, t, "V^t differs from f V^{t-1}");
  }
  if (!rep.iii.tested) rep.iii.detail = "no grid point t > 1 with t - 1 in range";

  for (const auto& t : table.grid) {
    Rational tp = t * Rational(p);
    if (!table.in_range(tp)) continue;
    rep.iv.tested = true;
    if (!equal(kappa_image(M, table.value_at(tp)), table.value_at(t)))
      record(rep.iv, t, "kappa(V^{tp}) differs from V^t");
  }
  if (!rep.iv.tested) rep.iv.detail = "range too small: no grid t with tp in range";
  return rep;
}

std::uint64_t gr_exponent(const Rational& t, std::uint32_t p, GrConvention convention) {
  Rational s = t * Rational(static_cast<std::int64_t>(p) - 1);
  return static_cast<std::uint64_t>(convention == GrConvention::A ? ceil(s) : floor(s) + 1);
}

GrPiece gr_piece(const FiltrationTable& table, const Rational& t, GrConvention convention) {
  const CartierModule& M = table.module;
  if (!table.in_range(t)) fail(ErrorCode::InvalidInput, "t = " + to_string(t) + " outside the table range");
  std::uint64_t n = gr_exponent(t, M.ring().p(), convention);
  const FreeSubmodule& W = table.left_at(t);
  const FreeSubmodule& V = table.value_at(t);
  if (!contains(V, scale(W, table.f)))
    fail(ErrorCode::VerificationFailed, "f does not annihilate Gr^" + to_string(t));
  CartierModule piece(QuotientPresentation(W, V), M.kappa().twisted(table.f.pow(n)));
  return GrPiece{t, std::move(piece), convention, n};
}

std::vector<GrPiece> gr_range(const FiltrationTable& table, const Rational& a, const Rational& b,
                              GrConvention convention) {
  if (!table.in_range(a) || !table.in_range(b) || b < a)
    fail(ErrorCode::InvalidInput, "interval outside the table range");
  std::vector<GrPiece> out;
  for (const auto& j : table.jumps)
    if (a <= j.t && j.t <= b) out.push_back(gr_piece(table, j.t, convention));
  return out;
}

bool gr_is_crystal_zero(const GrPiece& piece) { return is_nilpotent(piece.module); }

bool mu_f_check(const FiltrationTable& table, const Rational& t) {
  if (t <= 0) fail(ErrorCode::InvalidInput, "mu_f needs t > 0");
  GrPiece a = gr_piece(table, t), b = gr_piece(table, t + 1);
  const Ring& R = table.module.ring();
  const std::size_t r = table.module.rank();
  Matrix mu = identity_matrix(R, r);
  for (auto& row : mu)
    for (auto& c : row) c = c * table.f;
  if (!morphism_check(a.module, b.module, mu).ok) return false;
  return is_isomorphism(CartierMorphism(a.module, b.module, mu));
}

bool kappa_gr_surjection_check(const FiltrationTable& table, const Rational& t) {
  if (t < 0) fail(ErrorCode::InvalidInput, "t must be nonnegative");
  const CartierModule& M = table.module;
  Rational tp = t * Rational(static_cast<std::int64_t>(M.ring().p()));
  const FreeSubmodule &Wtp = table.left_at(tp), &Vtp = table.value_at(tp);
  const FreeSubmodule &Wt = table.left_at(t), &Vt = table.value_at(t);
  if (!contains(Vt, kappa_image(M, Vtp)) || !contains(Wt, kappa_image(M, Wtp))) return false;
  return equal(sum(kappa_image(M, Wtp), Vt), Wt);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inapplicable: return "inapplicable";
  }
  return "?";
}

IshriekReport compare_with_ishriek(const FiltrationTable& table) {
  const CartierModule& M = table.module;
  const Ring& R = M.ring();
  for (const auto& row : M.kappa().matrix())
    for (const auto& c : row)
      if (!c.is_zero() && !c.is_constant())
        return {Verdict::Inapplicable, "twist matrix is not constant"};
  if (determinant(M.kappa().matrix()).is_zero())
    return {Verdict::Inapplicable, "twist matrix is not invertible"};
  if (table.lo != Rational(0) || table.hi < Rational(1))
    return {Verdict::Inapplicable, "table must cover [0, 1]"};

  for (const auto& t : table.grid) {
    FreeSubmodule want = sum(scale(M.numerator(), table.f.pow(static_cast<std::uint64_t>(floor(t)))),
                             M.denominator());
    if (!equal(table.value_at(t), want))
      return {Verdict::Fails, "V^t differs from f^floor(t) M at t = " + to_string(t)};
  }
  auto pieces = gr_range(table, Rational(0), Rational(1));
  if (pieces.size() != 1 || pieces[0].t != Rational(1))
    return {Verdict::Fails, "Gr^[0,1] is not concentrated at t = 1"};
  const std::uint64_t p = R.p();
  CartierModule target(QuotientPresentation(M.numerator(),
                                            sum(scale(M.numerator(), table.f), M.denominator())),
                       M.kappa().twisted(table.f.pow(p - 1)));
  Matrix id = identity_matrix(R, M.rank());
  auto report = morphism_check(pieces[0].module, target, id);
  if (!report.ok) return {Verdict::Fails, "projection is not a Cartier morphism: " + report.reason};
  if (!is_isomorphism(CartierMorphism(pieces[0].module, target, id)))
    return {Verdict::Fails, "projection is not an isomorphism"};
  return {Verdict::Holds, ""};
}

CartierMorphism gr_of_morphism(const CartierMorphism& phi, const FiltrationTable& source,
                               const FiltrationTable& target, const Rational& t,
                               GrConvention convention) {
  GrPiece a = gr_piece(source, t, convention), b = gr_piece(target, t, convention);
  const Matrix& m = phi.matrix();
  if (!contains(b.module.numerator(), image(m, a.module.numerator())) ||
      !contains(b.module.denominator(), image(m, a.module.denominator())))
    fail(ErrorCode::VerificationFailed,
         "morphism does not respect the filtrations at t = " + to_string(t));
  return CartierMorphism(a.module, b.module, m);
}

bool same_morphism(const CartierMorphism& a, const CartierMorphism& b) {
  const auto &sa = a.source(), &sb = b.source(), &ta = a.target(), &tb = b.target();
  if (!equal(sa.numerator(), sb.numerator()) || !equal(sa.denominator(), sb.denominator()) ||
      !equal(ta.numerator(), tb.numerator()) || !equal(ta.denominator(), tb.denominator()))
    return false;
  for (const auto& w : sa.numerator().generators()) {
    Vec x = apply_matrix(a.matrix(), w), y = apply_matrix(b.matrix(), w);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] -= y[k];
    if (!member(x, ta.denominator())) return false;
  }
  return true;
}

}  // namespace cartier

#include "cartier/testmod.hpp"

#include <algorithm>
#include <future>

namespace cartier {

namespace {

FreeSubmodule tidy(const FreeSubmodule& X) {
  return FreeSubmodule(X.ring(), X.rank(), X.basis());
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

// t = A / (p^s (p^r - 1)) with t1 = p^s t; kappa^r o f^A acts on the t1 level
// one digit of A at a time.
struct Period {
  unsigned s = 0;
  unsigned r = 1;
  Rational t1;
  std::vector<std::uint64_t> digits;  // a_0 .. a_{r-1}
  std::uint64_t q = 0;                // A div p^r
};

Period period_of(const Rational& t, std::uint32_t p) {
  Period per;
  std::int64_t den = t.denominator();
  per.s = p_valuation(den, p);
  std::int64_t b = den / static_cast<std::int64_t>(ipow(p, per.s));
  per.t1 = t * Rational(static_cast<std::int64_t>(ipow(p, per.s)));
  per.r = multiplicative_order(p, b);
  if (per.r > kMaxTauPeriod)
    throw StabilizationCapExceeded("period of t is " + std::to_string(per.r) + " > " +
                                   std::to_string(kMaxTauPeriod));
  BigInt pr = 1;
  for (unsigned i = 0; i < per.r; ++i) pr *= p;
  BigInt A = BigInt(per.t1.numerator()) * (pr - 1) / BigInt(per.t1.denominator());
  for (unsigned i = 0; i < per.r; ++i) {
    per.digits.push_back(static_cast<std::uint64_t>(A % p));
    A /= p;
  }
  if (A > BigInt(std::uint64_t{1} << 40)) fail(ErrorCode::InvalidInput, "t too large");
  per.q = static_cast<std::uint64_t>(A);
  return per;
}

class PhiOps {
 public:
  PhiOps(const CartierModule& M, const Polynomial& f, bool root)
      : M_(M), f_(f), root_(root), powers_{Polynomial::constant(M.ring(), 1)} {}

  // kappa(f^a X) + N
  FreeSubmodule step(const FreeSubmodule& X, std::uint64_t a) const {
    FreeSubmodule Y = a == 0 ? X : scale(X, power(a));
    FreeSubmodule out = root_ ? sum(frobenius_root(scale(Y, M_.kappa().matrix()[0][0]), 1),
                                    M_.denominator())
                              : kappa_image(M_, Y);
    return tidy(out);
  }

  FreeSubmodule phi(const FreeSubmodule& X, const Period& per) const {
    FreeSubmodule Y = X;
    for (auto a : per.digits) Y = step(Y, a);
    if (per.q > 0) Y = sum(scale(Y, power(per.q)), M_.denominator());
    return tidy(Y);
  }

  Polynomial power(std::uint64_t a) const {
    if (a < 64) {
      while (powers_.size() <= a) powers_.push_back(powers_.back() * f_);
      return powers_[a];
    }
    return f_.pow(a);
  }

 private:
  const CartierModule& M_;
  const Polynomial& f_;
  bool root_;
  mutable std::vector<Polynomial> powers_;
};

// Descending chain Phi^k(underline M) to its fixed point.
FreeSubmodule phi_underline(const PhiOps& ops, const FreeSubmodule& under, const Period& per) {
  FreeSubmodule D = under;
  for (unsigned k = 0;; ++k) {
    if (k == kMaxTauSteps) throw StabilizationCapExceeded("underline for Phi did not settle");
    FreeSubmodule next = ops.phi(D, per);
    if (equal(next, D)) return D;
    D = next;
  }
}

struct PathResult {
  FreeSubmodule value;
  unsigned steps;
};

PathResult run_path(const CartierModule& M, const Polynomial& f, const Polynomial& c,
                    Convention conv, const FreeSubmodule& under, const Period& per, bool root) {
  PhiOps ops(M, f, root);
  const FreeSubmodule& N = M.denominator();
  FreeSubmodule Y = under;
  if (conv == Convention::CeilPE) {
    Y = sum(scale(under, ops.power(static_cast<std::uint64_t>(ceil(per.t1))) * c), N);
  } else {
    Y = sum(scale(phi_underline(ops, under, per), c), N);
  }
  // S_{k+1} = Phi(Y) + Phi(S_k), so S_{k+1} = S_k is a genuine fixed point.
  FreeSubmodule first = ops.phi(tidy(Y), per);
  FreeSubmodule S = first;
  unsigned K = 1;
  for (;; ++K) {
    if (K >= kMaxTauSteps)
      throw StabilizationCapExceeded("tau did not stabilize after " + std::to_string(K) +
                                     " periods; partial value " + S.to_string());
    FreeSubmodule next = tidy(sum(first, ops.phi(S, per)));
    if (equal(next, S)) break;
    S = next;
  }
  for (unsigned i = 0; i < per.s; ++i) S = ops.step(S, 0);
  return {S, per.s + per.r * K};
}

}  // namespace

bool is_regular_element(const CartierModule& M, const Polynomial& f) {
  require_same_ring(M.ring(), f.ring(), "is_regular_element");
  FreeSubmodule K = intersect(M.numerator(), colon(M.denominator(), f));
  return contains(M.denominator(), K);
}

Polynomial suggest_test_element(const CartierModule& M, const Polynomial& f) {
  require_same_ring(M.ring(), f.ring(), "suggest_test_element");
  if (f.is_zero()) fail(ErrorCode::InvalidInput, "f must be nonzero");
  const Matrix& U = M.kappa().matrix();
  Polynomial c = (M.rank() == 1 ? U[0][0] : determinant(U)) * f;
  if (c.is_zero() || contains(M.denominator(), scale(M.numerator(), c))) return f;
  return c;
}

TauContext::TauContext(CartierModule M, Polynomial f, Polynomial c, Convention convention,
                       TauPath path)
    : M_(std::move(M)),
      f_(std::move(f)),
      c_(std::move(c)),
      convention_(convention),
      path_(path),
      memo_(std::make_shared<Memo>()) {
  require_same_ring(M_.ring(), f_.ring(), "tau");
  require_same_ring(M_.ring(), c_.ring(), "tau");
  if (f_.is_zero()) fail(ErrorCode::InvalidInput, "f must be nonzero");
  if (c_.is_zero()) fail(ErrorCode::InvalidInput, "test element must be nonzero");
  if (path_ == TauPath::Root && M_.rank() != 1)
    fail(ErrorCode::InvalidInput, "root path needs rank 1");
}

const FreeSubmodule& TauContext::underline_module() const {
  std::lock_guard<std::mutex> lock(memo_->mu);
  if (!memo_->underline) memo_->underline = tidy(underline(M_).module);
  return *memo_->underline;
}

FreeSubmodule TauContext::twisted_underline(const Rational& t) const {
  if (t < 0) fail(ErrorCode::InvalidInput, "t must be nonnegative");
  PhiOps ops(M_, f_, false);
  return phi_underline(ops, underline_module(), period_of(t, M_.ring().p()));
}

TauResult TauContext::tau(const Rational& t) const {
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->values.find(t);
    if (it != memo_->values.end()) return it->second;
  }
  TauResult r = compute(t);
  std::lock_guard<std::mutex> lock(memo_->mu);
  return memo_->values.emplace(t, std::move(r)).first->second;
}

TauResult TauContext::compute(const Rational& t) const {
  if (t < 0) fail(ErrorCode::InvalidInput, "t must be nonnegative");
  if (t.denominator() > kMaxTauDenominator)
    fail(ErrorCode::InvalidInput, "denominator of t exceeds " + std::to_string(kMaxTauDenominator));
  if (t > 0 && !is_regular_element(M_, f_))
    fail(ErrorCode::NonDegenerate, "f is a zero divisor on the module");
  const Period per = period_of(t, M_.ring().p());
  const FreeSubmodule& under = underline_module();

  TauPath path = path_;
  if (path == TauPath::Auto) path = M_.rank() == 1 ? TauPath::Both : TauPath::Sum;
  TauResult out{FreeSubmodule::zero(M_.ring(), M_.rank()), 0, true, ""};
  if (path == TauPath::Root || path == TauPath::Both) {
    auto r = run_path(M_, f_, c_, convention_, under, per, true);
    out.value = r.value;
    out.stabilized_at_e = r.steps;
    out.path = "root";
  }
  if (path == TauPath::Sum || path == TauPath::Both) {
    auto r = run_path(M_, f_, c_, convention_, under, per, false);
    if (path == TauPath::Both) {
      if (!equal(r.value, out.value))
        fail(ErrorCode::VerificationFailed, "root and sum paths disagree at t = " + to_string(t) +
                                                ": " + out.value.to_string() + " vs " +
                                                r.value.to_string());
      out.path = "root+sum";
    } else {
      out.value = r.value;
      out.stabilized_at_e = r.steps;
      out.path = "sum";
    }
  }
  return out;
}

TauContext::LeftLimit TauContext::left_limit(const Rational& t) const {
  if (t <= 0) fail(ErrorCode::InvalidInput, "left limit needs t > 0");
  const std::int64_t p = M_.ring().p();
  std::optional<TauResult> prev;
  Rational delta;
  for (unsigned k = 1; k <= 8; ++k) {
    Rational d(1, static_cast<std::int64_t>(ipow(p, k)) * (p - 1));
    if (t - d < 0) continue;
    TauResult cur = tau(t - d);
    if (prev && equal(prev->value, cur.value)) return {cur, d};
    prev = cur;
    delta = d;
  }
  if (!prev) fail(ErrorCode::InvalidInput, "t too small for a left limit");
  prev->certified = false;
  return {*prev, delta};
}

TauResult tau(const PairSpec& spec, TauPath path) {
  return TauContext(spec.module, spec.f, spec.c, spec.convention, path).tau(spec.t);
}

TauContext::LeftLimit tau_left_limit(const PairSpec& spec, TauPath path) {
  return TauContext(spec.module, spec.f, spec.c, spec.convention, path).left_limit(spec.t);
}

FreeSubmodule tau_truncated_sum(const PairSpec& spec, unsigned E) {
  const CartierModule& M = spec.module;
  const std::uint32_t p = M.ring().p();
  FreeSubmodule base = tidy(scale(underline(M).module, spec.c));
  FreeSubmodule acc = M.denominator();
  for (unsigned e = 1; e <= E; ++e) {
    std::int64_t n = ceil(spec.t * Rational(static_cast<std::int64_t>(ipow(p, e))));
    FreeSubmodule X = tidy(scale(base, spec.f.pow(static_cast<std::uint64_t>(n))));
    for (unsigned i = 0; i < e; ++i) X = tidy(kappa_image(M, X));
    acc = tidy(sum(acc, X));
  }
  return acc;
}

bool verify_test_element(const PairSpec& spec) {
  TauContext a(spec.module, spec.f, spec.c, spec.convention);
  TauContext b(spec.module, spec.f, spec.c * spec.c, spec.convention);
  TauContext c(spec.module, spec.f, spec.c * spec.f, spec.convention);
  FreeSubmodule v = a.tau(spec.t).value;
  return equal(v, b.tau(spec.t).value) && equal(v, c.tau(spec.t).value);
}

JumpScan jumping_numbers(const TauContext& ctx, const Rational& lo, const Rational& hi,
                         std::int64_t max_den, unsigned threads) {
  const std::int64_t p = ctx.module().ring().p();
  if (lo < 0 || hi <= lo || hi > 4) fail(ErrorCode::InvalidInput, "range must lie in [0, 4]");
  if (max_den < 1 || max_den > p * p * p * (p - 1))
    fail(ErrorCode::InvalidInput, "max denominator must be in [1, p^3(p-1)]");
  JumpScan scan;
  for (const auto& t : farey_candidates(lo, hi, max_den))
    if (t > lo) scan.candidates.push_back(t);

  std::vector<Rational> points{lo};
  points.insert(points.end(), scan.candidates.begin(), scan.candidates.end());
  std::vector<std::optional<FreeSubmodule>> values(points.size());
  threads = std::max(1u, threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) values[i] = ctx.tau(points[i]).value;
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < threads; ++w)
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < points.size(); i += threads) values[i] = ctx.tau(points[i]).value;
      }));
    for (auto& j : jobs) j.get();
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    scan.values.push_back(*values[i]);
    if (i == 0) continue;
    const FreeSubmodule& before = *values[i - 1];
    if (!contains(before, *values[i]))
      fail(ErrorCode::VerificationFailed, "tau increased between " + to_string(points[i - 1]) +
                                              " and " + to_string(points[i]));
    if (!contains(*values[i], before)) scan.jumps.push_back(points[i]);
  }
  return scan;
}

std::uint64_t nu_invariant(const Polynomial& f, unsigned e) {
  const Ring& R = f.ring();
  if (f.is_zero() || f.constant_term() != 0)
    fail(ErrorCode::InvalidInput, "f must be a nonzero element of the maximal ideal at the origin");
  const std::uint64_t q = ipow(R.p(), e);
  auto truncate = [&](const Polynomial& g) {
    std::vector<Term> ts;
    for (const auto& t : g.terms()) {
      bool inside = false;
      for (std::size_t i = 0; i < R.arity(); ++i) inside |= t.mono.exp[i] >= q;
      if (!inside) ts.push_back(t);
    }
    return Polynomial(R, std::move(ts));
  };
  Polynomial g = Polynomial::constant(R, 1);
  std::uint64_t r = 0;
  for (;;) {
    g = truncate(g * f);
    if (g.is_zero()) return r;
    ++r;
  }
}

FptResult fpt(const Polynomial& f, std::int64_t max_den) {
  const Ring& R = f.ring();
  const std::int64_t p = R.p();
  if (f.is_zero() || f.constant_term() != 0)
    fail(ErrorCode::InvalidInput, "f must be a nonzero element of the maximal ideal at the origin");
  if (max_den <= 0) max_den = p * p * (p - 1);
  TauContext ctx(CartierModule::free(CartierStructure::identity(R, 1)), f,
                 Polynomial::constant(R, 1));
  std::vector<Polynomial> vars;
  for (std::size_t i = 0; i < R.arity(); ++i) vars.push_back(Polynomial::variable(R, i));
  const FreeSubmodule m = FreeSubmodule::ideal(R, vars);
  // Local at the origin: tau(t) is the unit ideal there iff tau(t) is not in m.
  auto trivial = [&](const Rational& t) { return !contains(m, ctx.tau(t).value); };

  auto cand = farey_candidates(Rational(0), Rational(1), max_den);
  if (trivial(cand.back()))
    fail(ErrorCode::VerificationFailed, "tau(f^1) is trivial at the origin");
  std::size_t lo = 0, hi = cand.size() - 1;  // trivial(lo), !trivial(hi)
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    (trivial(cand[mid]) ? lo : hi) = mid;
  }
  FptResult out{cand[hi], {}};
  for (unsigned e = 1;; ++e) {
    std::uint64_t q = ipow(static_cast<std::uint64_t>(p), e);
    if (e > 1 && (q > 256 || ipow(q, static_cast<unsigned>(R.arity())) > 200000)) break;
    std::uint64_t nu = nu_invariant(f, e);
    out.nu.emplace_back(e, nu);
    Rational lower(static_cast<std::int64_t>(nu), static_cast<std::int64_t>(q));
    Rational upper(static_cast<std::int64_t>(nu + 1), static_cast<std::int64_t>(q));
    if (out.value < lower || out.value > upper)
      fail(ErrorCode::VerificationFailed,
           "fpt by bisection is " + to_string(out.value) + " but nu_f(" + std::to_string(q) +
               ") = " + std::to_string(nu) + " bounds it to [" + to_string(lower) + ", " +
               to_string(upper) + "]");
  }
  return out;
}

FRegularity is_F_regular(const CartierModule& M, const Polynomial& c) {
  require_same_ring(M.ring(), c.ring(), "is_F_regular");
  FreeSubmodule first = tidy(kappa_image(M, scale(M.numerator(), c)));
  FreeSubmodule S = first;
  unsigned k = 1;
  for (;; ++k) {
    if (k >= kMaxTauSteps) throw StabilizationCapExceeded("F-regularity sum did not stabilize");
    FreeSubmodule next = tidy(sum(first, kappa_image(M, S)));
    if (equal(next, S)) break;
    S = next;
  }
  return {equal(S, M.numerator()), k, S};
}

}  // namespace cartier

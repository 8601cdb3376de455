#include "cartier/field_poly.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace cartier {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::RingMismatch: return "ring_mismatch";
    case ErrorCode::NotSubmodule: return "not_submodule";
    case ErrorCode::NotStable: return "not_stable";
    case ErrorCode::NotRegularElement: return "not_regular_element";
    case ErrorCode::NonDegenerate: return "non_degenerate";
    case ErrorCode::NotFRegular: return "not_f_regular";
    case ErrorCode::CapExceeded: return "cap_exceeded";
    case ErrorCode::VerificationFailed: return "verification_failed";
  }
  return "unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p > kMaxPrime || !is_prime(p))
    fail(ErrorCode::InvalidInput, "characteristic must be a prime <= 2^20, got " + std::to_string(p));
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1 % p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a % p_ == 0) fail(ErrorCode::InvalidInput, "division by zero in F_p");
  return pow(a, p_ - 2);
}

std::uint32_t PrimeField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<std::uint32_t>(r);
}

std::uint64_t Monomial::degree() const {
  std::uint64_t d = 0;
  for (auto e : exp) d += e;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (exp[i] > other.exp[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    std::uint64_t s = std::uint64_t(exp[i]) + other.exp[i];
    if (s > std::numeric_limits<std::uint32_t>::max())
      fail(ErrorCode::CapExceeded, "monomial exponent overflow");
    r.exp[i] = static_cast<std::uint32_t>(s);
  }
  return r;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = exp[i] - divisor.exp[i];
  return r;
}

Monomial Monomial::lcm(const Monomial& other) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.exp[i] = std::max(exp[i], other.exp[i]);
  return r;
}

bool Monomial::is_one() const {
  return std::all_of(exp.begin(), exp.end(), [](auto e) { return e == 0; });
}

int lex_compare(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? -1 : 1;
  }
  return 0;
}

bool lex_less(const Monomial& a, const Monomial& b) { return lex_compare(a, b) < 0; }

std::size_t MonomialHash::operator()(const Monomial& m) const {
  std::size_t h = 1469598103934665603ull;
  for (auto e : m.exp) h = (h ^ e) * 1099511628211ull;
  return h;
}

Ring::Ring(std::uint32_t p, std::vector<std::string> vars)
    : data_(std::make_shared<const Data>(Data{PrimeField(p), std::move(vars)})) {
  if (arity() > kMaxVars)
    fail(ErrorCode::InvalidInput, "at most 8 variables are supported");
  for (std::size_t i = 0; i < arity(); ++i) {
    const auto& v = data_->vars[i];
    if (v.empty()) fail(ErrorCode::InvalidInput, "empty variable name");
    for (std::size_t j = 0; j < i; ++j)
      if (data_->vars[j] == v) fail(ErrorCode::InvalidInput, "duplicate variable " + v);
  }
}

int Ring::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < arity(); ++i)
    if (data_->vars[i] == name) return static_cast<int>(i);
  return -1;
}

Ring Ring::with_variable(const std::string& name) const {
  auto vars = data_->vars;
  vars.push_back(name);
  return Ring(p(), std::move(vars));
}

std::string Ring::fresh_name(const std::string& stem) const {
  if (var_index(stem) < 0) return stem;
  for (int i = 0;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (var_index(cand) < 0) return cand;
  }
}

bool operator==(const Ring& a, const Ring& b) {
  return a.data_ == b.data_ || (a.p() == b.p() && a.vars() == b.vars());
}

void require_same_ring(const Ring& a, const Ring& b, const char* where) {
  if (a != b) fail(ErrorCode::RingMismatch, std::string("ring mismatch in ") + where);
}

namespace {

// Sort descending, merge equal monomials, drop zeros.
void normalize(const PrimeField& F, std::vector<Term>& ts) {
  std::sort(ts.begin(), ts.end(),
            [](const Term& a, const Term& b) { return lex_less(b.mono, a.mono); });
  std::size_t out = 0;
  for (std::size_t i = 0; i < ts.size();) {
    Term acc = ts[i];
    std::size_t j = i + 1;
    while (j < ts.size() && ts[j].mono == acc.mono) acc.coeff = F.add(acc.coeff, ts[j++].coeff);
    if (acc.coeff != 0) ts[out++] = acc;
    i = j;
  }
  ts.resize(out);
}

}  // namespace

Polynomial::Polynomial(Ring ring, std::vector<Term> terms)
    : ring_(std::move(ring)), terms_(std::move(terms)) {
  for (auto& t : terms_) t.coeff %= ring_.p();
  normalize(ring_.field(), terms_);
}

Polynomial Polynomial::constant(const Ring& ring, std::int64_t c) {
  return Polynomial(ring, {Term{Monomial{}, ring.field().from_int(c)}});
}

Polynomial Polynomial::variable(const Ring& ring, std::size_t index) {
  if (index >= ring.arity()) fail(ErrorCode::InvalidInput, "variable index out of range");
  Monomial m;
  m.exp[index] = 1;
  return Polynomial(ring, {Term{m, 1}});
}

Polynomial Polynomial::monomial(const Ring& ring, const Monomial& m, std::uint32_t c) {
  return Polynomial(ring, {Term{m, c}});
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

std::uint32_t Polynomial::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
  return 0;
}

std::uint64_t Polynomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exp[var]);
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  require_same_ring(ring_, o.ring_, "polynomial addition");
  const auto& F = ring_.field();
  Polynomial r(ring_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    int c = i == terms_.size()     ? -1
            : j == o.terms_.size() ? 1
                                   : lex_compare(terms_[i].mono, o.terms_[j].mono);
    if (c > 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      std::uint32_t s = F.add(terms_[i].coeff, o.terms_[j].coeff);
      if (s) r.terms_.push_back(Term{terms_[i].mono, s});
      ++i, ++j;
    }
  }
  return r;
}

Polynomial Polynomial::operator-() const { return scale(ring_.p() - 1); }

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  require_same_ring(ring_, o.ring_, "polynomial multiplication");
  if (is_zero() || o.is_zero()) return Polynomial(ring_);
  const auto& F = ring_.field();
  if (terms_.size() == 1) return o.mul_monomial(terms_[0].mono, terms_[0].coeff);
  if (o.terms_.size() == 1) return mul_monomial(o.terms_[0].mono, o.terms_[0].coeff);
  std::unordered_map<Monomial, std::uint32_t, MonomialHash> acc;
  acc.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      auto& slot = acc[a.mono * b.mono];
      slot = F.add(slot, F.mul(a.coeff, b.coeff));
    }
  std::vector<Term> ts;
  ts.reserve(acc.size());
  for (const auto& [m, c] : acc)
    if (c) ts.push_back(Term{m, c});
  std::sort(ts.begin(), ts.end(),
            [](const Term& a, const Term& b) { return lex_less(b.mono, a.mono); });
  Polynomial r(ring_);
  r.terms_ = std::move(ts);
  return r;
}

Polynomial Polynomial::scale(std::uint32_t c) const {
  c %= ring_.p();
  Polynomial r(ring_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff = ring_.field().mul(t.coeff, c);
  return r;
}

Polynomial Polynomial::mul_monomial(const Monomial& m, std::uint32_t c) const {
  c %= ring_.p();
  Polynomial r(ring_);
  if (c == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back(Term{t.mono * m, ring_.field().mul(t.coeff, c)});
  return r;
}

Polynomial Polynomial::pow(std::uint64_t e) const {
  Polynomial result = constant(ring_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

bool Polynomial::divide_exact(const Polynomial& d, Polynomial* quotient) const {
  require_same_ring(ring_, d.ring_, "divide_exact");
  if (d.is_zero()) fail(ErrorCode::InvalidInput, "division by the zero polynomial");
  const auto& F = ring_.field();
  std::uint32_t lead_inv = F.inv(d.terms_[0].coeff);
  Polynomial rem = *this;
  std::vector<Term> q;
  // Lex leading terms: every step must cancel the current leading term.
  while (!rem.is_zero()) {
    const Term& lt = rem.terms_[0];
    if (!d.terms_[0].mono.divides(lt.mono)) return false;
    Term qt{lt.mono.quotient(d.terms_[0].mono), F.mul(lt.coeff, lead_inv)};
    q.push_back(qt);
    rem = rem - d.mul_monomial(qt.mono, qt.coeff);
  }
  if (quotient) *quotient = Polynomial(ring_, std::move(q));
  return true;
}

Polynomial Polynomial::substitute(const Ring& target, const std::vector<Polynomial>& images) const {
  if (images.size() != ring_.arity())
    fail(ErrorCode::InvalidInput, "substitute needs one image per variable");
  Polynomial r(target);
  // Cache powers per variable; exponents repeat a lot.
  std::vector<std::map<std::uint32_t, Polynomial>> cache(images.size());
  auto power = [&](std::size_t i, std::uint32_t e) -> const Polynomial& {
    auto it = cache[i].find(e);
    if (it != cache[i].end()) return it->second;
    return cache[i].emplace(e, images[i].pow(e)).first->second;
  };
  for (const auto& t : terms_) {
    Polynomial term = constant(target, t.coeff);
    for (std::size_t i = 0; i < ring_.arity(); ++i)
      if (t.mono.exp[i]) term = term * power(i, t.mono.exp[i]);
    r += term;
  }
  return r;
}

Polynomial Polynomial::remap(const Ring& target, const std::vector<int>& map) const {
  if (target.p() != ring_.p()) fail(ErrorCode::RingMismatch, "remap across characteristics");
  std::vector<Term> ts;
  ts.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (std::size_t i = 0; i < ring_.arity(); ++i) {
      if (!t.mono.exp[i]) continue;
      int j = i < map.size() ? map[i] : -1;
      if (j < 0)
        fail(ErrorCode::RingMismatch, "variable " + ring_.vars()[i] + " has no image");
      m.exp[j] += t.mono.exp[i];
    }
    ts.push_back(Term{m, t.coeff});
  }
  return Polynomial(target, std::move(ts));
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << '+';
    first = false;
    bool wrote = false;
    if (t.coeff != 1 || t.mono.is_one()) {
      os << t.coeff;
      wrote = true;
    }
    for (std::size_t i = 0; i < ring_.arity(); ++i) {
      if (!t.mono.exp[i]) continue;
      if (wrote) os << '*';
      os << ring_.vars()[i];
      if (t.mono.exp[i] > 1) os << '^' << t.mono.exp[i];
      wrote = true;
    }
  }
  return os.str();
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.ring_ != b.ring_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].coeff != b.terms_[i].coeff || !(a.terms_[i].mono == b.terms_[i].mono))
      return false;
  return true;
}

std::uint64_t prime_power(std::uint32_t p, unsigned e) {
  std::uint64_t q = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (q > std::numeric_limits<std::uint32_t>::max() / p)
      fail(ErrorCode::CapExceeded, "p^e exceeds 32 bits");
    q *= p;
  }
  return q;
}

std::map<std::array<std::uint32_t, kMaxVars>, Polynomial> frobenius_digits(const Polynomial& f,
                                                                           unsigned e) {
  const Ring& R = f.ring();
  const std::uint64_t q = prime_power(R.p(), e);
  std::map<std::array<std::uint32_t, kMaxVars>, std::vector<Term>> buckets;
  for (const auto& t : f.terms()) {
    std::array<std::uint32_t, kMaxVars> digit{};
    Monomial rest;
    for (std::size_t i = 0; i < R.arity(); ++i) {
      digit[i] = static_cast<std::uint32_t>(t.mono.exp[i] % q);
      rest.exp[i] = static_cast<std::uint32_t>(t.mono.exp[i] / q);
    }
    // Coefficients are fixed by Frobenius on F_p, so the q-th root is itself.
    buckets[digit].push_back(Term{rest, t.coeff});
  }
  std::map<std::array<std::uint32_t, kMaxVars>, Polynomial> out;
  for (auto& [d, ts] : buckets) out.emplace(d, Polynomial(R, std::move(ts)));
  return out;
}

Polynomial cartier_trace(const Polynomial& f, unsigned e) {
  const Ring& R = f.ring();
  const std::uint64_t q = prime_power(R.p(), e);
  std::vector<Term> ts;
  for (const auto& t : f.terms()) {
    bool top = true;
    Monomial rest;
    for (std::size_t i = 0; i < R.arity() && top; ++i) {
      top = t.mono.exp[i] % q == q - 1;
      rest.exp[i] = static_cast<std::uint32_t>(t.mono.exp[i] / q);
    }
    if (top) ts.push_back(Term{rest, t.coeff});
  }
  return Polynomial(R, std::move(ts));
}

Polynomial twisted_power(const Polynomial& u, const Polynomial& f, unsigned e) {
  require_same_ring(u.ring(), f.ring(), "twisted_power");
  const std::uint64_t q = prime_power(u.ring().p(), e);
  return cartier_trace(u.pow((q - 1) / (u.ring().p() - 1)) * f, e);
}

}  // namespace cartier

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cartier/error.hpp"

namespace cartier {

inline constexpr std::size_t kMaxVars = 8;
inline constexpr std::uint64_t kMaxPrime = 1u << 20;

/// Arithmetic in F_p for a prime p <= 2^20. Elements are residues in [0, p).
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t inv(std::uint32_t a) const;  // throws on 0
  std::uint32_t from_int(std::int64_t v) const;

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Exponent vector. Slots past the ring arity are always zero, so equality and
/// ordering never need the arity.
struct Monomial {
  std::array<std::uint32_t, kMaxVars> exp{};

  std::uint64_t degree() const;
  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  Monomial quotient(const Monomial& divisor) const;  // caller checks divides
  Monomial lcm(const Monomial& other) const;
  bool is_one() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Pure lexicographic comparison, x_0 > x_1 > ...
int lex_compare(const Monomial& a, const Monomial& b);
bool lex_less(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

/// Polynomial ring F_p[x_0..x_{n-1}], shared by value. Two rings compare equal
/// when they have the same prime and the same variable names.
class Ring {
 public:
  Ring(std::uint32_t p, std::vector<std::string> vars);

  const PrimeField& field() const { return data_->field; }
  std::uint32_t p() const { return data_->field.p(); }
  std::size_t arity() const { return data_->vars.size(); }
  const std::vector<std::string>& vars() const { return data_->vars; }
  int var_index(const std::string& name) const;  // -1 if absent

  /// Copy of this ring with `name` appended as the last variable.
  Ring with_variable(const std::string& name) const;
  /// Fresh variable name not used by this ring.
  std::string fresh_name(const std::string& stem) const;

  friend bool operator==(const Ring& a, const Ring& b);
  friend bool operator!=(const Ring& a, const Ring& b) { return !(a == b); }

 private:
  struct Data {
    PrimeField field;
    std::vector<std::string> vars;
  };
  std::shared_ptr<const Data> data_;
};

void require_same_ring(const Ring& a, const Ring& b, const char* where);

struct Term {
  Monomial mono;
  std::uint32_t coeff;
};

/// Sparse polynomial; terms kept in lexicographically descending order with
/// nonzero coefficients.
class Polynomial {
 public:
  explicit Polynomial(Ring ring) : ring_(std::move(ring)) {}
  Polynomial(Ring ring, std::vector<Term> terms);  // normalizes

  static Polynomial constant(const Ring& ring, std::int64_t c);
  static Polynomial variable(const Ring& ring, std::size_t index);
  static Polynomial monomial(const Ring& ring, const Monomial& m, std::uint32_t c = 1);

  const Ring& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::uint32_t constant_term() const;
  std::uint64_t total_degree() const;  // 0 for the zero polynomial
  std::uint32_t degree_in(std::size_t var) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  Polynomial scale(std::uint32_t c) const;
  Polynomial mul_monomial(const Monomial& m, std::uint32_t c = 1) const;
  Polynomial pow(std::uint64_t e) const;

  /// Exact quotient by `d`, or nullopt-like empty flag when d does not divide.
  bool divide_exact(const Polynomial& d, Polynomial* quotient) const;

  /// Substitute polynomials (all in `target`) for each variable of this ring.
  Polynomial substitute(const Ring& target, const std::vector<Polynomial>& images) const;
  /// Rename into `target` by index map; map[i] = -1 means x_i must not occur.
  Polynomial remap(const Ring& target, const std::vector<int>& map) const;

  std::string to_string() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  Ring ring_;
  std::vector<Term> terms_;
};

/// Digits of f in base q = p^e: f = sum_a (f_a)^q x^a with 0 <= a_i < q.
/// Keys are the digit exponents a; values are the f_a.
std::map<std::array<std::uint32_t, kMaxVars>, Polynomial> frobenius_digits(
    const Polynomial& f, unsigned e);

/// C_e(f): the digit at a = (q-1, ..., q-1).
Polynomial cartier_trace(const Polynomial& f, unsigned e);

/// (C o u)^e (f) = C_e(u^{(p^e-1)/(p-1)} f).
Polynomial twisted_power(const Polynomial& u, const Polynomial& f, unsigned e);

/// q = p^e with an overflow check.
std::uint64_t prime_power(std::uint32_t p, unsigned e);

}  // namespace cartier

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cartier/cartier_module.hpp"
#include "cartier/rational.hpp"

namespace cartier {

/// Exponent attached to kappa^e: ceil(t p^e) or ceil(t (p^e - 1)).
enum class Convention { CeilPE, CeilPEMinus1 };

/// Root: Frobenius roots of ideals (rank 1 only). Sum: literal kappa images.
/// Both: run the two and require equal answers.
enum class TauPath { Auto, Root, Sum, Both };

struct PairSpec {
  CartierModule module;
  Polynomial f;
  Rational t;
  Polynomial c;  // test element
  Convention convention = Convention::CeilPE;
};

struct TauResult {
  FreeSubmodule value;  // contains the denominator
  unsigned stabilized_at_e = 0;
  bool certified = false;
  std::string path;  // "root", "sum" or "root+sum"
};

/// Largest denominator accepted for t, and the cap on the period r of t.
inline constexpr std::int64_t kMaxTauDenominator = 1 << 16;
inline constexpr unsigned kMaxTauPeriod = 64;
/// Cap on the number of Phi-steps in one tau evaluation.
inline constexpr unsigned kMaxTauSteps = 64;

/// Multiplication by f is injective on W/N.
bool is_regular_element(const CartierModule& M, const Polynomial& f);

/// u f for rank 1, det(U) f otherwise; falls back to f when that product
/// kills the module.
Polynomial suggest_test_element(const CartierModule& M, const Polynomial& f);

/// Memoizing evaluator for one pair (M, f, c). Safe to share between threads.
class TauContext {
 public:
  TauContext(CartierModule M, Polynomial f, Polynomial c,
             Convention convention = Convention::CeilPE, TauPath path = TauPath::Auto);

  const CartierModule& module() const { return M_; }
  const Polynomial& f() const { return f_; }
  const Polynomial& test_element() const { return c_; }
  Convention convention() const { return convention_; }

  TauResult tau(const Rational& t) const;

  struct LeftLimit {
    TauResult result;
    Rational delta;
  };
  /// tau(t - delta_k) for delta_k = 1/(p^k (p-1)) until two successive values
  /// agree; k <= 8, uncertified when the cap is hit.
  LeftLimit left_limit(const Rational& t) const;

  /// The underline of M, with N included.
  const FreeSubmodule& underline_module() const;
  /// Underline for the algebra of f^t: the stable descending chain
  /// Phi^k(underline M) where Phi = kappa^r f^A is the periodic operator of t.
  FreeSubmodule twisted_underline(const Rational& t) const;

 private:
  TauResult compute(const Rational& t) const;

  CartierModule M_;
  Polynomial f_;
  Polynomial c_;
  Convention convention_;
  TauPath path_;
  struct Memo {
    std::mutex mu;
    std::map<Rational, TauResult> values;
    std::optional<FreeSubmodule> underline;
  };
  std::shared_ptr<Memo> memo_;
};

TauResult tau(const PairSpec& spec, TauPath path = TauPath::Auto);
TauContext::LeftLimit tau_left_limit(const PairSpec& spec, TauPath path = TauPath::Auto);

/// sum_{e=1..E} kappa^e(f^{ceil(t p^e)} c underline(M)) + N, computed term by
/// term. A lower bound for tau that reaches it for E large.
FreeSubmodule tau_truncated_sum(const PairSpec& spec, unsigned E);

/// tau(c), tau(c^2) and tau(c f) agree at t; necessary, not sufficient.
bool verify_test_element(const PairSpec& spec);

struct JumpScan {
  std::vector<Rational> jumps;
  std::vector<Rational> candidates;  // scanned, ascending, excluding lo
  std::vector<FreeSubmodule> values;  // tau at lo followed by tau at each candidate
};
/// Jumps of tau on (lo, hi] relative to the fractions with denominator <= max_den.
JumpScan jumping_numbers(const TauContext& ctx, const Rational& lo, const Rational& hi,
                         std::int64_t max_den, unsigned threads = 1);

struct FptResult {
  Rational value;
  /// (e, nu_f(p^e)) pairs used for the cross-check.
  std::vector<std::pair<unsigned, std::uint64_t>> nu;
};
/// nu_f(p^e) = max{r : f^r not in (x_1^{p^e}, ..., x_n^{p^e})}.
std::uint64_t nu_invariant(const Polynomial& f, unsigned e);
/// Local F-pure threshold at the origin by bisection over the candidates,
/// checked against nu_f(p^e)/p^e < fpt <= (nu_f(p^e)+1)/p^e.
FptResult fpt(const Polynomial& f, std::int64_t max_den = 0);

struct FRegularity {
  bool value;
  unsigned steps;
  FreeSubmodule sum;  // sum_e kappa^e(c W) + N
};
/// sum_{e >= 1} kappa^e(c W) + N compared with W.
FRegularity is_F_regular(const CartierModule& M, const Polynomial& c);

}  // namespace cartier

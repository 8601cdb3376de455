#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cartier/extension.hpp"
#include "cartier/testmod.hpp"
#include "cartier/vfilt.hpp"

namespace cartier {

enum class CheckStatus { Pass, Fail, Skip };
const char* status_name(CheckStatus s);

struct CheckItem {
  std::string name;
  CheckStatus status;
  std::string detail;
};

struct CheckReport {
  std::string name;
  std::vector<CheckItem> items;
  bool passed() const;
  std::size_t count(CheckStatus s) const;
};

/// Property suites for `check`, and the worked examples for `repro`.
const std::vector<std::string>& check_suites();
CheckReport run_check(const std::string& suite, std::uint64_t seed, int cases);
const std::vector<std::string>& repro_targets();
CheckReport run_repro(const std::string& target);

/// Span of C_e(x^b g) over generators g and monomials b in the box [0, p^e)^n.
/// Slow, but shares no code with frobenius_root.
FreeSubmodule frobenius_root_oracle(const FreeSubmodule& W, unsigned e);

/// y^p - y - x1 over R, y appended as the last variable.
FiniteExtension artin_schreier_extension(const Ring& R);
/// `g` is parsed over R with a fresh variable named `y`.
FiniteExtension extension_from_text(const Ring& R, const std::string& g);

/// The building blocks below each return one item; errors become failures.

/// tau over R[s] along s of the graph embedding, pulled back by s -> f,
/// against tau(M, f^t).
CheckItem graph_check(const CartierModule& M, const Polynomial& f, const Rational& t);
/// saturate(tau(M, f^t), h) against the contraction of tau(M_h, f^t), for
/// t = lo and every candidate in (lo, hi] with denominator <= max_den.
CheckItem localization_check(const CartierModule& M, const Polynomial& f, const Polynomial& h,
                             const Rational& hi, std::int64_t max_den);
/// Pushforward of the S-side filtration against the filtration of the
/// pushforward, on the grid in [0, hi].
CheckItem pushforward_check(const FiniteExtension& ext, const CartierModule& M,
                            const Polynomial& f, const Rational& hi, std::int64_t max_den);
/// At each jump of the pushforward, Gr of the pushforward against the
/// pushforward of the S-side Gr, with the identity as comparison map.
CheckItem pushforward_gr_check(const FiniteExtension& ext, const CartierModule& M,
                               const Polynomial& f, const Rational& hi, std::int64_t max_den);
/// tau(M tensor S, f^t) intersected with R, by eliminating y, against tau(M, f^t).
CheckItem etale_transformation_check(const FiniteExtension& ext, const CartierModule& M,
                                     const Polynomial& f, const Rational& hi,
                                     std::int64_t max_den);
/// Two items: tau(f^! M) inside f^! tau(M), and evaluation at 1 maps it
/// into tau(M).
std::vector<CheckItem> shriek_check(const FiniteExtension& ext, const CartierModule& M,
                                    const Polynomial& f, const Rational& hi,
                                    std::int64_t max_den);

}  // namespace cartier

#include <gtest/gtest.h>

#include <cstdlib>

#include "cartier/frobenius.hpp"
#include "support.hpp"

using namespace cartier;
using namespace cartier::testing;

namespace {

// C_e(x^m) straight from the exponent arithmetic.
bool trace_monomial(const Monomial& m, std::uint64_t q, std::size_t n, Monomial* out) {
  for (std::size_t i = 0; i < n; ++i) {
    if ((m.exp[i] + 1) % q != 0) return false;
    out->exp[i] = static_cast<std::uint32_t>((m.exp[i] + 1) / q - 1);
  }
  return true;
}

// Root oracle: span of C_e(x^b g) for every generator g and box monomial b.
FreeSubmodule root_oracle(const FreeSubmodule& W, unsigned e) {
  const Ring& R = W.ring();
  std::uint64_t q = 1;
  for (unsigned i = 0; i < e; ++i) q *= R.p();
  std::vector<Monomial> box{Monomial{}};
  for (std::size_t i = 0; i < R.arity(); ++i) {
    std::vector<Monomial> next;
    for (const auto& m : box)
      for (std::uint64_t a = 0; a < q; ++a) {
        Monomial k = m;
        k.exp[i] = static_cast<std::uint32_t>(a);
        next.push_back(k);
      }
    box = next;
  }
  std::vector<Vec> gens;
  for (const auto& g : W.generators())
    for (const auto& b : box) {
      Vec v;
      for (const auto& c : g) {
        std::vector<Term> ts;
        for (const auto& t : c.terms()) {
          Monomial img;
          if (trace_monomial(t.mono * b, q, R.arity(), &img)) ts.push_back({img, t.coeff});
        }
        v.emplace_back(R, std::move(ts));
      }
      gens.push_back(std::move(v));
    }
  return FreeSubmodule(R, W.rank(), std::move(gens));
}

FreeSubmodule random_ideal(std::mt19937_64& rng, const Ring& R, int count, int max_exp) {
  std::vector<Polynomial> gens;
  for (int i = 0; i < count; ++i) gens.push_back(random_poly(rng, R, 3, max_exp));
  return FreeSubmodule::ideal(R, gens);
}

}  // namespace

TEST(Frobenius, BracketPowerExamples) {
  Ring R3(3, {"x", "y"});
  EXPECT_TRUE(equal(bracket_power(I(R3, {"x", "y"}), 1), I(R3, {"x^3", "y^3"})));
  auto W = I(R3, {"x^2 + y", "x*y"});
  EXPECT_TRUE(equal(bracket_power(W, 0), W));
  Ring R2(2, {"x", "y"});
  EXPECT_TRUE(equal(bracket_power(I(R2, {"x + y"}), 1), I(R2, {"x^2 + y^2"})));
  for (std::uint32_t p : {2u, 3u, 5u}) {
    Ring R(p, {"x"});
    EXPECT_TRUE(contains(bracket_power(I(R, {"x"}), 1), FreeSubmodule::ideal(R, {P(R, "x").pow(p)})));
  }
}

TEST(Frobenius, RootExamples) {
  Ring R3(3, {"x", "y"});
  EXPECT_TRUE(equal(frobenius_root(I(R3, {"x^5"}), 1), I(R3, {"x"})));
  EXPECT_TRUE(equal(frobenius_root(I(R3, {"x^2*y^5", "x^7"}), 1), I(R3, {"y", "x^2"})));
  Ring R2(2, {"x", "y"});
  EXPECT_TRUE(equal(frobenius_root(I(R2, {"x^2 + y^2"}), 1), I(R2, {"x + y"})));
}

TEST(Frobenius, RootMatchesTraceOracle) {
  std::mt19937_64 rng(31);
  for (std::uint32_t p : {2u, 3u}) {
    Ring R(p, {"x", "y"});
    for (int k = 0; k < cases(25); ++k) {
      auto W = random_ideal(rng, R, 2, 4);
      for (unsigned e : {1u, 2u}) EXPECT_TRUE(equal(frobenius_root(W, e), root_oracle(W, e)));
    }
  }
}

TEST(Frobenius, RootOfModuleMatchesOracle) {
  std::mt19937_64 rng(32);
  Ring R(3, {"x", "y"});
  for (int k = 0; k < cases(10); ++k) {
    FreeSubmodule W(R, 2, {{random_poly(rng, R, 3, 6), random_poly(rng, R, 3, 6)},
                           {random_poly(rng, R, 3, 6), random_poly(rng, R, 3, 6)}});
    EXPECT_TRUE(equal(frobenius_root(W, 1), root_oracle(W, 1)));
  }
}

TEST(Frobenius, Adjunction) {
  std::mt19937_64 rng(33);
  for (std::uint32_t p : {2u, 3u}) {
    Ring R(p, {"x", "y"});
    for (int k = 0; k < cases(25); ++k) {
      auto W = random_ideal(rng, R, 2, 5);
      // Make J sometimes large enough to matter.
      auto J = k % 2 ? frobenius_root(W, 1) : random_ideal(rng, R, 2, 3);
      for (unsigned e : {1u, 2u})
        EXPECT_EQ(contains(bracket_power(J, e), W), contains(J, frobenius_root(W, e)));
    }
  }
}

TEST(Frobenius, TowerMonotonicityRoundTrip) {
  std::mt19937_64 rng(34);
  Ring R(3, {"x", "y"});
  for (int k = 0; k < cases(15); ++k) {
    auto W = random_ideal(rng, R, 2, 9);
    auto V = sum(W, random_ideal(rng, R, 1, 9));
    EXPECT_TRUE(equal(frobenius_root(frobenius_root(W, 1), 1), frobenius_root(W, 2)));
    EXPECT_TRUE(contains(frobenius_root(V, 1), frobenius_root(W, 1)));
    EXPECT_TRUE(contains(bracket_power(frobenius_root(W, 1), 1), W));
  }
}

TEST(Frobenius, RootIndependentOfGenerators) {
  std::mt19937_64 rng(35);
  Ring R(2, {"x", "y"});
  for (int k = 0; k < cases(15); ++k) {
    auto a = random_poly(rng, R, 3, 4), b = random_poly(rng, R, 3, 4);
    auto r = random_poly(rng, R, 2, 3);
    auto W1 = FreeSubmodule::ideal(R, {a, b});
    auto W2 = FreeSubmodule::ideal(R, {a + r * b, b, a * r});
    EXPECT_TRUE(equal(frobenius_root(W1, 1), frobenius_root(W2, 1)));
  }
}

TEST(Frobenius, LevelCap) {
  Ring R(2, {"x"});
  EXPECT_THROW(frobenius_root(I(R, {"x"}), max_frobenius_level() + 1), StabilizationCapExceeded);
  setenv("CARTIER_MAX_E", "2", 1);
  EXPECT_EQ(max_frobenius_level(), 2u);
  EXPECT_THROW(bracket_power(I(R, {"x"}), 3), StabilizationCapExceeded);
  unsetenv("CARTIER_MAX_E");
  EXPECT_EQ(max_frobenius_level(), 6u);
}

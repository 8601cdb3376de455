#include <gtest/gtest.h>

#include "cartier/vfilt.hpp"
#include "support.hpp"

using namespace cartier;
using namespace cartier::testing;

namespace {

CartierModule free_scalar(const Ring& R, const std::string& u) {
  return CartierModule::free(CartierStructure::scalar(P(R, u)));
}

std::vector<Rational> jump_ts(const FiltrationTable& T) {
  std::vector<Rational> out;
  for (const auto& j : T.jumps) out.push_back(j.t);
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidInput;
}

// F-regular and F-pure with nilpotent part 0 + R/(x); projection to (R, C) is a nil-isomorphism.
CartierModule with_nil_part(const Ring& R) {
  return CartierModule(QuotientPresentation(FreeSubmodule::whole(R, 2), Mod(R, 2, {{"0", "x"}})),
                       CartierStructure(R, Mat(R, {{"1", "0"}, {"x^2", "0"}})));
}

}  // namespace

TEST(VFiltration, ComputeExamples) {
  Ring R(3, {"x"});
  auto x = P(R, "x");
  auto T = compute_vfiltration(free_scalar(R, "1"), x, Rational(0), Rational(2), 6);
  EXPECT_EQ(jump_ts(T), (std::vector<Rational>{1, 2}));
  EXPECT_TRUE(equal(T.V0, I(R, {"1"})));
  EXPECT_TRUE(equal(T.jumps[0].value, I(R, {"x"})));
  EXPECT_TRUE(equal(T.jumps[1].value, I(R, {"x^2"})));
  for (const auto& j : T.jumps) {
    EXPECT_TRUE(j.left_certified);
    EXPECT_TRUE(j.grid_consistent);
  }
  EXPECT_TRUE(equal(T.value_at(Rational(3, 2)), I(R, {"x"})));
  EXPECT_TRUE(equal(T.left_at(Rational(2)), I(R, {"x"})));
  EXPECT_THROW(T.value_at(Rational(3)), Error);

  auto K = compute_vfiltration(free_scalar(R, "x"), x, Rational(0), Rational(1), 6);
  EXPECT_EQ(jump_ts(K), (std::vector<Rational>{Rational(1, 2)}));
  EXPECT_TRUE(equal(K.jumps[0].value, I(R, {"x"})));

  Ring S(5, {"x", "y"});
  auto Q = compute_vfiltration(free_scalar(S, "1"), P(S, "x^2*y"), Rational(0), Rational(1), 4);
  EXPECT_EQ(jump_ts(Q), (std::vector<Rational>{Rational(1, 2), 1}));
}

TEST(VFiltration, Preconditions) {
  Ring R(3, {"x"});
  EXPECT_EQ(code_of([&] {
              compute_vfiltration(free_scalar(R, "x^2"), P(R, "x"), Rational(0), Rational(1), 6);
            }),
            ErrorCode::NotFRegular);
  Ring S(3, {"x", "y"});
  auto Q = CartierModule(QuotientPresentation(FreeSubmodule::whole(S, 1), I(S, {"x"})),
                         CartierStructure::scalar(P(S, "x^2")));
  EXPECT_EQ(code_of([&] { compute_vfiltration(Q, P(S, "x"), Rational(0), Rational(1), 6); }),
            ErrorCode::NonDegenerate);
}

TEST(VFiltration, AxiomsHoldOnExamples) {
  Ring R(3, {"x"});
  auto x = P(R, "x");
  auto T = compute_vfiltration(free_scalar(R, "1"), x, Rational(0), Rational(3), 6);
  auto rep = verify_axioms(T);
  EXPECT_TRUE(rep.all_ok());
  EXPECT_TRUE(rep.iii.tested && rep.iv.tested);

  auto K = compute_vfiltration(free_scalar(R, "x"), x, Rational(0), Rational(2), 6);
  EXPECT_EQ(jump_ts(K), (std::vector<Rational>{Rational(1, 2), Rational(3, 2)}));
  EXPECT_TRUE(verify_axioms(K).all_ok());
}

TEST(VFiltration, AxiomsHoldOnRandomPairs) {
  std::mt19937_64 rng(61);
  for (std::uint32_t p : {2u, 3u}) {
    Ring R(p, {"x", "y"});
    for (int k = 0; k < cases(6); ++k) {
      auto f = random_nonzero_poly(rng, R, 3, 3);
      if (f.is_constant()) continue;
      auto T = compute_vfiltration(free_scalar(R, "1"), f, Rational(0), Rational(2),
                                   static_cast<std::int64_t>(p * (p - 1)));
      auto rep = verify_axioms(T);
      EXPECT_TRUE(rep.all_ok()) << f.to_string() << " " << rep.iv.detail << rep.iii.detail;
      for (const auto& t : T.grid)
        if (t + 1 <= T.hi)
          EXPECT_TRUE(contains(T.value_at(t + 1), scale(T.value_at(t), f)));
    }
  }
}

TEST(VFiltration, CorruptedTableIsCaught) {
  Ring R(3, {"x"});
  auto T = compute_vfiltration(free_scalar(R, "1"), P(R, "x"), Rational(0), Rational(3), 6);
  ASSERT_EQ(T.jumps.front().t, Rational(1));
  T.jumps.erase(T.jumps.begin());
  auto rep = verify_axioms(T);
  EXPECT_FALSE(rep.iv.ok);
  EXPECT_EQ(*rep.iv.first_failure, Rational(1));
  EXPECT_FALSE(rep.iii.ok);
  EXPECT_GT(*rep.iii.first_failure, Rational(1));
  EXPECT_LT(*rep.iii.first_failure, Rational(2));
  EXPECT_TRUE(rep.ii.ok);
}

TEST(VFiltration, GrPieces) {
  Ring R(3, {"x"});
  auto x = P(R, "x");
  auto T = compute_vfiltration(free_scalar(R, "1"), x, Rational(0), Rational(3), 6);
  auto g1 = gr_piece(T, Rational(1));
  EXPECT_EQ(g1.exponent, 2u);
  EXPECT_TRUE(equal(g1.module.numerator(), I(R, {"1"})));
  EXPECT_TRUE(equal(g1.module.denominator(), I(R, {"x"})));
  EXPECT_EQ(kappa_apply(g1.module, {P(R, "1")}, 1)[0], P(R, "1"));
  EXPECT_FALSE(gr_is_crystal_zero(g1));
  EXPECT_TRUE(gr_piece(T, Rational(1, 2)).is_zero());

  auto K = compute_vfiltration(free_scalar(R, "x"), x, Rational(0), Rational(2), 6);
  auto a = gr_piece(K, Rational(1, 2), GrConvention::A);
  EXPECT_EQ(a.exponent, 1u);
  EXPECT_EQ(a.module.kappa().matrix()[0][0], P(R, "x^2"));
  auto b = gr_piece(K, Rational(1, 2), GrConvention::B);
  EXPECT_EQ(b.module.kappa().matrix()[0][0], P(R, "x^3"));
  EXPECT_THROW(gr_piece(K, Rational(5, 2)), Error);
}

TEST(VFiltration, GrRangeAndCrystalVanishing) {
  Ring R(3, {"x"});
  auto x = P(R, "x");
  auto T = compute_vfiltration(free_scalar(R, "1"), x, Rational(0), Rational(1), 6);
  auto pieces = gr_range(T, Rational(0), Rational(1));
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0].t, Rational(1));
  EXPECT_FALSE(gr_is_crystal_zero(pieces[0]));

  auto K = compute_vfiltration(free_scalar(R, "x"), x, Rational(0), Rational(1), 6);
  auto A = gr_range(K, Rational(0), Rational(1), GrConvention::A);
  auto B = gr_range(K, Rational(0), Rational(1), GrConvention::B);
  ASSERT_EQ(A.size(), 1u);
  ASSERT_EQ(B.size(), 1u);
  EXPECT_EQ(A[0].t, Rational(1, 2));
  EXPECT_FALSE(gr_is_crystal_zero(A[0]));
  EXPECT_TRUE(gr_is_crystal_zero(B[0]));
  EXPECT_TRUE(kappa_apply(B[0].module, {P(R, "1")}, 1)[0].is_zero());
}

TEST(VFiltration, MuFAndKappaSurjection) {
  Ring R(3, {"x"});
  auto x = P(R, "x");
  auto T = compute_vfiltration(free_scalar(R, "1"), x, Rational(0), Rational(3), 6);
  EXPECT_TRUE(mu_f_check(T, Rational(1)));
  EXPECT_TRUE(mu_f_check(T, Rational(1, 2)));
  EXPECT_TRUE(kappa_gr_surjection_check(T, Rational(1)));
  EXPECT_TRUE(kappa_gr_surjection_check(T, Rational(1, 3)));
  auto K = compute_vfiltration(free_scalar(R, "x"), x, Rational(0), Rational(2), 6);
  EXPECT_TRUE(mu_f_check(K, Rational(1, 2)));
  EXPECT_TRUE(kappa_gr_surjection_check(K, Rational(1, 2)));
  EXPECT_THROW(mu_f_check(K, Rational(3, 2)), Error);
}

TEST(VFiltration, CompareWithIShriek) {
  Ring R(3, {"x"});
  auto x = P(R, "x");
  auto T = compute_vfiltration(free_scalar(R, "1"), x, Rational(0), Rational(2), 6);
  EXPECT_EQ(compare_with_ishriek(T).verdict, Verdict::Holds);
  auto swap = CartierModule::free(CartierStructure(R, Mat(R, {{"0", "1"}, {"1", "0"}})));
  auto S = compute_vfiltration(swap, x, Rational(0), Rational(2), 6);
  EXPECT_EQ(compare_with_ishriek(S).verdict, Verdict::Holds) << compare_with_ishriek(S).detail;
  auto K = compute_vfiltration(free_scalar(R, "x"), x, Rational(0), Rational(1), 6);
  EXPECT_EQ(compare_with_ishriek(K).verdict, Verdict::Inapplicable);
  EXPECT_FALSE(equal(K.value_at(Rational(1, 2)), I(R, {"1"})));
}

TEST(VFiltration, GrOfMorphismFunctorLaws) {
  Ring R(3, {"x"});
  auto x = P(R, "x");
  auto M = CartierModule::free(CartierStructure(R, Mat(R, {{"0", "1"}, {"1", "0"}})));
  auto T = compute_vfiltration(M, x, Rational(0), Rational(2), 6);
  CartierMorphism id(M, M, identity_matrix(R, 2));
  CartierMorphism sw(M, M, Mat(R, {{"0", "1"}, {"1", "0"}}));
  for (const auto& t : {Rational(1), Rational(2), Rational(1, 2)}) {
    auto gid = gr_of_morphism(id, T, T, t);
    auto piece = gr_piece(T, t).module;
    EXPECT_TRUE(same_morphism(gid, CartierMorphism(piece, piece, identity_matrix(R, 2))));
    auto gsw = gr_of_morphism(sw, T, T, t);
    EXPECT_TRUE(same_morphism(compose(gsw, gsw), gr_of_morphism(compose(sw, sw), T, T, t)));
    EXPECT_TRUE(same_morphism(compose(gsw, gsw), gid));
  }

  // Constant conjugation: (R^2, U) -> (R^2, P U P^{-1}) along P is an isomorphism on pieces.
  auto U = Mat(R, {{"1", "1"}, {"0", "1"}});
  auto Pm = Mat(R, {{"1", "0"}, {"1", "1"}}), Pinv = Mat(R, {{"1", "0"}, {"-1", "1"}});
  auto M1 = CartierModule::free(CartierStructure(R, U));
  auto M2 = CartierModule::free(CartierStructure(R, matrix_product(matrix_product(Pm, U), Pinv)));
  auto T1 = compute_vfiltration(M1, x, Rational(0), Rational(2), 6);
  auto T2 = compute_vfiltration(M2, x, Rational(0), Rational(2), 6);
  CartierMorphism conj(M1, M2, Pm);
  for (const auto& j : T1.jumps) EXPECT_TRUE(is_isomorphism(gr_of_morphism(conj, T1, T2, j.t)));
}

TEST(VFiltration, NilIsomorphismOnPieces) {
  Ring R(3, {"x"});
  auto f = P(R, "x + 1");
  auto M = with_nil_part(R);
  auto C = free_scalar(R, "1");
  CartierMorphism proj(M, C, Mat(R, {{"1", "0"}}));
  ASSERT_TRUE(nil_isomorphism_check(proj));
  auto TM = compute_vfiltration(M, f, Rational(0), Rational(2), 6, P(R, "x"));
  auto TC = compute_vfiltration(C, f, Rational(0), Rational(2), 6, P(R, "x"));
  EXPECT_EQ(jump_ts(TM), jump_ts(TC));
  for (const auto& j : TC.jumps) {
    auto g = gr_of_morphism(proj, TM, TC, j.t);
    EXPECT_TRUE(g.cokernel().presentation().is_zero());
    EXPECT_TRUE(is_nilpotent(g.kernel()));
  }
}

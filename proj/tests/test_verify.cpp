#include <gtest/gtest.h>

#include <pleat/verify.hpp>

using namespace pleat;

TEST(VerifyLemma, EveryLemmaHoldsOnASmallRun) {
    for (LemmaId id : all_lemmas()) {
        VerifyReport r = verify_lemma(id, 3000, 42);
        EXPECT_EQ(r.violations, 0u) << to_string(id);
        EXPECT_TRUE(r.dumps.empty()) << to_string(id);
        EXPECT_TRUE(std::isfinite(r.worstSlack)) << to_string(id);
        EXPECT_GE(r.worstSlack, -verify_slack) << to_string(id);
        EXPECT_EQ(r.trials, 3000u);
        EXPECT_EQ(r.lemmaId, to_string(id));
        // The hypothesis-boundary decile gets its share of the draws.
        EXPECT_GE(r.boundaryDecileHits, r.trials / 100) << to_string(id);
    }
}

TEST(VerifyLemma, DeterministicAcrossThreadCounts) {
    for (LemmaId id : all_lemmas()) {
        VerifyReport a = verify_lemma(id, 500, 7, {}, 1);
        VerifyReport b = verify_lemma(id, 500, 7, {}, 4);
        VerifyReport c = verify_lemma(id, 500, 7, {}, 3);
        EXPECT_EQ(a.worstSlack, b.worstSlack) << to_string(id);
        EXPECT_EQ(a.worstSlack, c.worstSlack) << to_string(id);
        EXPECT_EQ(a.boundaryDecileHits, b.boundaryDecileHits) << to_string(id);
        EXPECT_EQ(a.violations, c.violations) << to_string(id);
        VerifyReport other = verify_lemma(id, 500, 8, {}, 2);
        EXPECT_NE(a.worstSlack, other.worstSlack) << to_string(id);
    }
}

TEST(VerifyLemma, PinnedParameters) {
    LemmaParams p;
    p.m0 = 1.0;
    p.eps = 0.1;
    VerifyReport r = verify_lemma(LemmaId::L5_4, 200, 1, p);
    EXPECT_EQ(r.violations, 0u);
    LemmaParams q;
    q.m0 = 0.5;
    q.C = 2.0;
    for (LemmaId id : {LemmaId::L5_1, LemmaId::L5_2, LemmaId::L5_3, LemmaId::L5_5, LemmaId::D5_1})
        EXPECT_EQ(verify_lemma(id, 200, 2, q).violations, 0u) << to_string(id);
}

TEST(VerifyLemma, Errors) {
    EXPECT_THROW(verify_lemma(LemmaId::L5_4, 0, 1), std::invalid_argument);
    EXPECT_THROW(parse_lemma("5.9"), std::invalid_argument);
    for (LemmaId id : all_lemmas()) EXPECT_EQ(parse_lemma(to_string(id)), id);
    LemmaParams bad;
    bad.m0 = -1.0;
    EXPECT_ANY_THROW(verify_lemma(LemmaId::L5_1, 10, 1, bad));
}

TEST(RefinementCauchy, HalvingAtomsDecayGeometrically) {
    Cocycle c = Cocycle::from_real(CocycleKind::Angle, {0.3, -0.2, 0.5});
    c.refinement = halving_refinement({0.6, 0.0, -0.6}, {0.3, -0.2, 0.5}, 0.2);
    auto steps = refinement_cauchy_check(c, 6);
    ASSERT_EQ(steps.size(), 6u);
    for (std::size_t i = 1; i < steps.size(); ++i) {
        EXPECT_LT(steps[i], steps[i - 1]);
        EXPECT_LT(steps[i], 0.7 * steps[i - 1]);
    }
}

TEST(RefinementCauchy, ZeroAtomsGiveZeroSteps) {
    Cocycle c = Cocycle::zero(CocycleKind::Angle, 2);
    c.refinement = halving_refinement({0.5, -0.5}, {0.0, 0.0}, 0.2);
    for (double s : refinement_cauchy_check(c, 4)) EXPECT_LT(s, 1e-14);  // rotations by 0 up to roundoff
}

TEST(RefinementCauchy, AlternatingStepsStayBounded) {
    Cocycle c = Cocycle::zero(CocycleKind::Angle, 2);
    c.refinement = alternating_refinement(0.3);
    auto steps = refinement_cauchy_check(c, 8);
    for (double s : steps) {
        EXPECT_TRUE(std::isfinite(s));
        EXPECT_LT(s, 10.0);
    }
    EXPECT_THROW(refinement_cauchy_check(Cocycle::zero(CocycleKind::Angle, 2), 2), std::invalid_argument);
}

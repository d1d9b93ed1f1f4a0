#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include <pleat/constants.hpp>

using namespace pleat;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Plain double-precision transcriptions of the printed formulas, usable while
// every intermediate value stays inside the double range.
double eta_dd(double m, double C) {
    return std::min(std::exp(-m) / (32 * (C + 1) * m), std::exp(-m) / (66 * pi * (60 * C + 9)));
}
double cp_d(double l) { return 2 * pi * std::exp(l) * (1 + std::exp(l)) * std::exp(std::exp(2 * l)); }
double cdd_d(double l) { return cp_d(l) * (3 + std::exp(2 * l)) / 2; }

struct Row {
    double m0;
    double eps_mantissa;
    int eps_exponent;
    double w_mantissa;
    int w_exponent;
};

double log10_of(double mantissa, int exponent) { return std::log10(mantissa) + exponent; }

// The published table: m0, epsilon = delta, w*.
const std::vector<Row> published = {
    {1e-6, 2.20317, -17, 2.45816, -20},   {1e-5, 2.20241, -16, 2.45807, -18},
    {.0005, 1.08066, -14, 6.13315, -15},  {.001, 2.1201, -14, 2.44836, -14},
    {.0015, 3.1194, -14, 5.4978, -14},    {.002, 4.07961, -14, 9.75434, -14},
    {.0025, 5.00174, -14, 1.52107, -13},  {.003, 5.8868, -14, 2.18597, -13},
    {.005, 9.07579, -14, 6.02374, -13},   {.01, 1.4901, -13, 2.36178, -12},
    {.05, 1.33635, -13, 5.03139, -11},    {.1, 2.06663, -14, 1.64768, -10},
    {.25, 3.41015, -19, 5.6501, -10},     {.5, 9.94507, -43, 8.30612, -10},
    {1, 5.6123380, -550, 4.479, -10},     {2, 1.90389, -212091, 3.23146, -11},
};

}  // namespace

TEST(LogValue, MatchesDoubleArithmetic) {
    std::mt19937_64 rng(60);
    std::uniform_real_distribution<double> E(-150, 150), S(-1, 1);
    for (int trial = 0; trial < 2000; ++trial) {
        double a = (S(rng) < 0 ? -1 : 1) * std::pow(10.0, E(rng));
        double b = (S(rng) < 0 ? -1 : 1) * std::pow(10.0, E(rng) / 3);
        LogValue A = LogValue::from_double(a), B = LogValue::from_double(b);
        EXPECT_LT(rel((A * B).to_double(), a * b), 1e-12);
        EXPECT_LT(rel((A / B).to_double(), a / b), 1e-12);
        EXPECT_LT(rel(min(A, B).to_double(), std::min(a, b)), 1e-12);
        EXPECT_LT(rel(max(A, B).to_double(), std::max(a, b)), 1e-12);
        if (std::abs(std::log10(std::abs(a)) - std::log10(std::abs(b))) < 8 && a * b > 0) {
            EXPECT_LT(rel((A + B).to_double(), a + b), 1e-12);
        }
    }
}

TEST(LogValue, ZeroSignAndCancellation) {
    LogValue z;
    EXPECT_TRUE(z.is_zero());
    EXPECT_TRUE((z * LogValue::from_double(3.0)).is_zero());
    EXPECT_EQ((z + LogValue::from_double(-2.0)).sign(), -1);
    LogValue x = LogValue::from_double(5.0);
    EXPECT_TRUE((x - x).is_zero());
    EXPECT_LT(LogValue::from_double(-1e300), LogValue::from_double(1e-300));
    EXPECT_LT(LogValue::from_log10(1, -212091.0), LogValue::from_log10(1, -550.0));
    EXPECT_THROW(LogValue::from_double(NAN), std::domain_error);
    EXPECT_THROW(x / z, std::domain_error);
    EXPECT_EQ(LogValue::from_log10(1, -212090.72).display(3), "1.91e-212091");
    EXPECT_NEAR(LogValue::exp(1000.0).ln(), 1000.0, 1e-10);
}

TEST(EtaPrime, Examples) {
    EXPECT_NEAR(eta_prime(1, 0).to_double(), 0.1, 1e-16);
    EXPECT_NEAR(eta_prime(0.1, 0).to_double(), 0.25, 1e-16);
    EXPECT_NEAR(eta_prime(2, 3).to_double(), 1.0 / 80.0, 1e-16);
    EXPECT_THROW(eta_prime(0, 0), std::domain_error);
    EXPECT_THROW(eta_prime(1, -1), std::domain_error);
    for (double m : {0.01, 0.5, 3.0})
        for (double C : {0.0, 1.0, 10.0}) EXPECT_LE(eta_prime(m, C).to_double(), 0.25);
}

TEST(C1, Examples) {
    EXPECT_NEAR(c1(0).to_double(), 18 * pi, 1e-12);
    EXPECT_NEAR(c1(1).to_double(), 138 * pi, 1e-11);
}

TEST(EtaDoublePrime, ExamplesAndMonotonicity) {
    EXPECT_LT(rel(eta_dprime(1, 0).to_double(), std::exp(-1.0) / (594 * pi)), 1e-13);
    EXPECT_NEAR(eta_dprime(1, 0).to_double(), 1.97137e-4, 1e-9);
    EXPECT_LT(rel(eta_dprime(1, 1).to_double(), std::exp(-1.0) / (66 * pi * 69)), 1e-13);
    EXPECT_THROW(eta_dprime(-1, 0), std::domain_error);
    double prev_m = HUGE_VAL;
    for (double m = 0.01; m < 5; m *= 1.3) {
        double prev_c = HUGE_VAL;
        for (double C = 0; C < 20; C += 0.7) {
            double v = eta_dprime(m, C).to_double();
            EXPECT_LT(v, prev_c);
            EXPECT_GT(v, 0.0);
            prev_c = v;
        }
        double v0 = eta_dprime(m, 0).to_double();
        EXPECT_LT(v0, prev_m);
        prev_m = v0;
    }
}

TEST(CFunctions, Examples) {
    EXPECT_NEAR(c_of_l(0).to_double(), std::exp(1.0), 1e-14);
    EXPECT_NEAR(c_prime(0).to_double(), 4 * pi * std::exp(1.0), 1e-12);
    EXPECT_NEAR(c_dprime(0).to_double(), 8 * pi * std::exp(1.0), 1e-12);
    EXPECT_NEAR(c_dprime(0).to_double(), 68.31787, 1e-5);
    // The closed form pi (1+e^l)(3+e^{2l}) e^{l+e^{2l}}.
    for (double l : {0.01, 0.2, 1.0, 2.0}) {
        double closed = pi * (1 + std::exp(l)) * (3 + std::exp(2 * l)) * std::exp(l + std::exp(2 * l));
        EXPECT_LT(rel(c_dprime(l).to_double(), closed), 1e-12);
    }
}

TEST(CaseConstants, EachFormulaSymbolBySymbol) {
    for (double l : {0.001, 0.0238523, 0.2, 0.5}) {
        double ll = l / 4;
        auto k = case_constants(l, ll);
        double e1 = eta_dd(l, 0) / (120 * std::exp(l) * cdd_d(l));
        double e2 = eta_dd(2 * l, 0) / (120 * std::exp(2 * l) * cdd_d(2 * l));
        double e3 = ll * eta_dd(2 * l, 1) / (130 * pi * cdd_d(2 * l));
        double in5 = 1 + cdd_d(3 * l) + (1 + std::exp(6 * l)) / 2;
        double e5 = ll * eta_dd(3 * l, 0) / (18 * cdd_d(3 * l) * in5 * in5);
        double w7 = std::exp(-2 * l) * std::tanh(ll / 2) / (8 * pi);
        double w26 = ll * eta_dd(2 * l, 1) / (20 * std::sqrt(2.0) * pi * std::exp(2 * l) / std::tanh(ll / 2));
        EXPECT_LT(rel(k.epsCase1.to_double(), e1), 1e-12) << l;
        EXPECT_LT(rel(k.epsCase2.to_double(), e2), 1e-12) << l;
        EXPECT_LT(rel(k.epsCase3.to_double(), e3), 1e-12) << l;
        EXPECT_LT(rel(k.epsCase5.to_double(), e5), 1e-12) << l;
        EXPECT_LT(rel(k.wStarEq7.to_double(), w7), 1e-12) << l;
        EXPECT_LT(rel(k.wStarEq26.to_double(), w26), 1e-12) << l;
        EXPECT_LT(rel(k.epsilonFinal.to_double(), std::min({e1, e2, e3, e5})), 1e-12) << l;
        EXPECT_EQ(k.deltaFinal, k.epsilonFinal);
        EXPECT_LT(rel(k.wStarBound.to_double(), std::min(w7, w26)), 1e-12) << l;
        EXPECT_FALSE(k.trace.empty());
    }
    EXPECT_THROW(case_constants(0.1, 0.2), std::domain_error);
    EXPECT_THROW(case_constants(0.1, 0.0), std::domain_error);
}

TEST(CaseConstants, HeadlineValues) {
    auto k = case_constants(0.2, 0.05);
    EXPECT_NEAR(k.epsilonFinal.log10(), std::log10(3.61749e-17), 2e-5);
    EXPECT_NEAR(k.wStarBound.log10(), std::log10(4.41719e-10), 2e-5);
    auto one = case_constants(1.0, 0.25);
    EXPECT_NEAR(one.epsilonFinal.log10(), log10_of(5.6123380, -550), 2e-5);
}

TEST(Table, ReproducesThePublishedRows) {
    auto t0 = std::chrono::steady_clock::now();
    auto rows = table(default_table_m0());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 10.0);
    ASSERT_EQ(rows.size(), published.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].m0, published[i].m0);
        // Published values carry 5-6 significant digits.
        EXPECT_NEAR(rows[i].epsilon.log10(), log10_of(published[i].eps_mantissa, published[i].eps_exponent), 5e-5)
            << "m0 = " << rows[i].m0;
        EXPECT_NEAR(rows[i].wStar.log10(), log10_of(published[i].w_mantissa, published[i].w_exponent), 5e-5)
            << "m0 = " << rows[i].m0;
        EXPECT_EQ(rows[i].delta, rows[i].epsilon);
    }
    EXPECT_THROW(table({0.1, -1.0}), std::domain_error);
}

TEST(Table, MonotoneBeyondTheOptimum) {
    double prev_e = HUGE_VAL;
    for (double l = 0.03; l <= 2.0; l *= 1.1) {
        double e = case_constants(l, l / 4).epsilonFinal.log10();
        EXPECT_LT(e, prev_e) << l;
        prev_e = e;
    }
}

TEST(OptimizeLStar, FindsThePublishedOptimum) {
    auto t0 = std::chrono::steady_clock::now();
    auto opt = optimize_lstar();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 30.0);
    EXPECT_NEAR(opt.lStarOpt, 0.0238523, 1e-5);
    EXPECT_NEAR(opt.epsilonOpt.log10(), std::log10(2.01795e-13), 2e-5);
    EXPECT_NEAR(opt.wStar.log10(), std::log10(1.27126e-11), 2e-5);
    // A decade away on either side is worse.
    for (double l : {opt.lStarOpt / 10, opt.lStarOpt * 10})
        EXPECT_LT(case_constants(l, l / 4).epsilonFinal, opt.epsilonOpt);
}

#pragma once
// The constant chain behind the injectivity theorem, evaluated in log space.
//
// Final epsilons reach 10^-212091, so every quantity is a LogValue: a sign and
// a base-10 log of the magnitude.  Intermediate sums such as 3 + e^{2l} are
// formed in log space too, which keeps the code uniform for any l*.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "halfspace.hpp"
#include "optimize.hpp"

namespace pleat {

class LogValue {
  public:
    LogValue() = default;  // zero

    static LogValue from_double(double x) {
        if (!std::isfinite(x)) throw std::domain_error("LogValue from a non-finite double");
        if (x == 0.0) return {};
        return {x > 0 ? 1 : -1, std::log10(std::abs(x))};
    }
    static LogValue from_log10(int sign, double log10mag) { return {sign, log10mag}; }
    // e^x for any real x, including ones whose value does not fit a double.
    static LogValue exp(double x) { return {1, x / std::numbers::ln10}; }

    int sign() const { return sign_; }
    double log10() const { return log10_; }
    double ln() const { return log10_ * std::numbers::ln10; }
    bool is_zero() const { return sign_ == 0; }

    // Overflows to +-inf / underflows to 0 outside the double range.
    double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::pow(10.0, log10_); }

    // Decimal mantissa in [1, 10) and exponent.
    std::pair<double, long long> mantissa_exponent() const {
        if (sign_ == 0) return {0.0, 0};
        double e = std::floor(log10_);
        double m = std::pow(10.0, log10_ - e);
        if (m >= 10.0) {  // rounding at the edge
            m /= 10.0;
            e += 1.0;
        }
        return {sign_ * m, static_cast<long long>(e)};
    }

    std::string display(int digits = 6) const {
        auto [m, e] = mantissa_exponent();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*fe%lld", digits - 1, m, e);
        return buf;
    }

    friend LogValue operator*(LogValue a, LogValue b) {
        if (a.sign_ == 0 || b.sign_ == 0) return {};
        return {a.sign_ * b.sign_, a.log10_ + b.log10_};
    }
    friend LogValue operator/(LogValue a, LogValue b) {
        if (b.sign_ == 0) throw std::domain_error("LogValue division by zero");
        if (a.sign_ == 0) return {};
        return {a.sign_ * b.sign_, a.log10_ - b.log10_};
    }
    friend LogValue operator-(LogValue a) { return {-a.sign_, a.log10_}; }

    // Signed log-sum-exp.
    friend LogValue operator+(LogValue a, LogValue b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        if (a.log10_ < b.log10_) std::swap(a, b);
        double r = std::pow(10.0, b.log10_ - a.log10_);  // <= 1
        if (a.sign_ == b.sign_) return {a.sign_, a.log10_ + std::log10(1.0 + r)};
        if (r == 1.0) return {};
        return {a.sign_, a.log10_ + std::log10(1.0 - r)};
    }
    friend LogValue operator-(LogValue a, LogValue b) { return a + (-b); }

    friend LogValue operator*(LogValue a, double b) { return a * from_double(b); }
    friend LogValue operator*(double a, LogValue b) { return from_double(a) * b; }
    friend LogValue operator/(LogValue a, double b) { return a / from_double(b); }
    friend LogValue operator/(double a, LogValue b) { return from_double(a) / b; }
    friend LogValue operator+(LogValue a, double b) { return a + from_double(b); }
    friend LogValue operator+(double a, LogValue b) { return from_double(a) + b; }

    LogValue pow(double p) const {
        if (sign_ < 0) throw std::domain_error("LogValue::pow of a negative value");
        if (sign_ == 0) return {};
        return {1, log10_ * p};
    }

    friend bool operator<(LogValue a, LogValue b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
        if (a.sign_ == 0) return false;
        return a.sign_ > 0 ? a.log10_ < b.log10_ : a.log10_ > b.log10_;
    }
    friend bool operator>(LogValue a, LogValue b) { return b < a; }
    friend bool operator==(LogValue a, LogValue b) {
        return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log10_ == b.log10_);
    }

  private:
    LogValue(int s, double l) : sign_(s), log10_(l) {}
    int sign_ = 0;
    double log10_ = 0.0;
};

inline LogValue min(LogValue a, LogValue b) { return b < a ? b : a; }
inline LogValue max(LogValue a, LogValue b) { return a < b ? b : a; }

//---------------------------------------------------------------------------//
// Lemma constants
//---------------------------------------------------------------------------//

namespace detail {
inline void require_positive_m0(double m0) {
    if (!(m0 > 0.0)) throw std::domain_error("m0 must be positive");
}
inline void require_nonnegative_C(double C) {
    if (!(C >= 0.0)) throw std::domain_error("C must be nonnegative");
}
}  // namespace detail

// eta' = min{ 1/(10 (C+1) m0), 1/4 }
inline LogValue eta_prime(double m0, double C) {
    detail::require_positive_m0(m0);
    detail::require_nonnegative_C(C);
    LogValue first = LogValue::from_double(1.0) / (10.0 * (C + 1.0) * LogValue::from_double(m0));
    return min(first, LogValue::from_double(0.25));
}

// C1 = 2 pi (60 C + 9)
inline LogValue c1(double C) {
    detail::require_nonnegative_C(C);
    return LogValue::from_double(2.0 * pi * (60.0 * C + 9.0));
}

// eta'' = min{ e^{-m0} / (32 (C+1) m0), e^{-m0} / (66 pi (60 C + 9)) }
inline LogValue eta_dprime(double m0, double C) {
    detail::require_positive_m0(m0);
    detail::require_nonnegative_C(C);
    LogValue em = LogValue::exp(-m0);
    LogValue first = em / (32.0 * (C + 1.0) * LogValue::from_double(m0));
    LogValue second = em / (66.0 * pi * (60.0 * C + 9.0));
    return min(first, second);
}

struct LemmaConstants {
    double m0;
    double C;
    LogValue etaPrime, etaDoublePrime, c1;
};

inline LemmaConstants lemma_constants(double m0, double C) {
    return {m0, C, eta_prime(m0, C), eta_dprime(m0, C), pleat::c1(C)};
}

// C(l) = e^{e^l}
inline LogValue c_of_l(double l) { return LogValue::exp(std::exp(l)); }

// C'(l) = 2 pi e^l (1 + e^l) e^{e^{2l}}
inline LogValue c_prime(double l) {
    LogValue el = LogValue::exp(l);
    return 2.0 * pi * el * (1.0 + el) * LogValue::exp(std::exp(2.0 * l));
}

// C''(l) = C'(l) (3 + e^{2l}) / 2
inline LogValue c_dprime(double l) {
    return c_prime(l) * (3.0 + LogValue::exp(2.0 * l)) / 2.0;
}

//---------------------------------------------------------------------------//
// Case-by-case epsilons
//---------------------------------------------------------------------------//

struct TraceEntry {
    std::string name;
    std::string formula;
    LogValue value;
};

struct CaseConstants {
    double lStar = 0, lLower = 0;
    LogValue cOfL, cPrime, cDouble;
    LogValue epsCase1, epsCase2, epsCase3, epsCase5;
    LogValue wStarEq7, wStarEq26;
    LogValue wStarBound, epsilonFinal, deltaFinal;
    std::vector<TraceEntry> trace;
};

inline CaseConstants case_constants(double lStar, double lLower) {
    if (!(lLower > 0.0) || !(lLower <= lStar))
        throw std::domain_error("case_constants needs 0 < lLower <= lStar");
    CaseConstants k;
    k.lStar = lStar;
    k.lLower = lLower;
    double l = lStar, ll = lLower;
    auto E = [](double x) { return LogValue::exp(x); };
    auto V = [](double x) { return LogValue::from_double(x); };
    auto note = [&](std::string name, std::string formula, LogValue v) {
        k.trace.push_back({std::move(name), std::move(formula), v});
        return v;
    };

    k.cOfL = note("C(l*)", "e^{e^{l*}}", c_of_l(l));
    k.cPrime = note("C'(l*)", "2 pi e^{l*} (1+e^{l*}) e^{e^{2l*}}", c_prime(l));
    k.cDouble = note("C''(l*)", "C'(l*) (3+e^{2l*})/2", c_dprime(l));

    // Case 1: the arc stays in one rectangle.
    LogValue eta1 = note("eta''(l*,0)", "min{e^{-m}/(32(C+1)m), e^{-m}/(66 pi (60C+9))}", eta_dprime(l, 0.0));
    k.epsCase1 = note("eps case 1", "eta''(l*,0) / (120 e^{l*} C''(l*))",
                      eta1 / (120.0 * E(l) * k.cDouble));

    // Case 2: two rectangles; every length doubles.
    LogValue eta2 = note("eta''(2l*,0)", "eta'' at m0 = 2l*, C = 0", eta_dprime(2.0 * l, 0.0));
    LogValue cdd2 = note("C''(2l*)", "C'' at 2l*", c_dprime(2.0 * l));
    k.epsCase2 = note("eps case 2", "eta''(2l*,0) / (120 e^{2l*} C''(2l*))",
                      eta2 / (120.0 * E(2.0 * l) * cdd2));

    // Cases 3 and 4: the arc ends on a tie.
    LogValue eta3 = note("eta''(2l*,1)", "eta'' at m0 = 2l*, C = 1", eta_dprime(2.0 * l, 1.0));
    k.epsCase3 = note("eps case 3 (= case 4)", "l_* eta''(2l*,1) / (130 pi C''(2l*))",
                      V(ll) * eta3 / (130.0 * pi * cdd2));

    // Case 5: three rectangles, long side to long side.  The minimum length
    // of the middle crossing is taken to be l_*.
    LogValue eta5 = note("eta''(3l*,0)", "eta'' at m0 = 3l*, C = 0", eta_dprime(3.0 * l, 0.0));
    LogValue cdd3 = note("C''(3l*)", "C'' at 3l*", c_dprime(3.0 * l));
    LogValue inner = 1.0 + cdd3 + (1.0 + E(6.0 * l)) / 2.0;
    k.epsCase5 = note("eps case 5", "l_* eta''(3l*,0) / (18 C''(3l*) (1 + C''(3l*) + (1+e^{6l*})/2)^2)",
                      V(ll) * eta5 / (18.0 * cdd3 * inner.pow(2.0)));

    k.wStarEq7 = note("w* bound (tie size)", "e^{-2l*} tanh(l_*/2) / (8 pi)",
                      E(-2.0 * l) * V(std::tanh(ll / 2.0)) / (8.0 * pi));
    k.wStarEq26 = note("w* bound (case 3)", "l_* eta''(2l*,1) / (20 sqrt2 pi e^{2l*} coth(l_*/2))",
                       V(ll) * eta3 / (20.0 * std::sqrt(2.0) * pi * E(2.0 * l) * V(1.0 / std::tanh(ll / 2.0))));
    k.wStarBound = note("w*", "min of the two w* bounds", min(k.wStarEq7, k.wStarEq26));

    k.epsilonFinal = note("epsilon", "min over cases 1, 2, 3, 5",
                          min(min(k.epsCase1, k.epsCase2), min(k.epsCase3, k.epsCase5)));
    k.deltaFinal = note("delta", "epsilon", k.epsilonFinal);
    return k;
}

//---------------------------------------------------------------------------//
// Table and optimum
//---------------------------------------------------------------------------//

struct TableRow {
    double m0;
    LogValue epsilon, delta, wStar;
};

inline std::vector<double> default_table_m0() {
    return {1e-6, 1e-5, .0005, .001, .0015, .002, .0025, .003, .005, .01, .05, .1, .25, .5, 1, 2};
}

// Rows use l* = m0 and l_* = m0/4.
inline std::vector<TableRow> table(std::vector<double> const& m0s) {
    std::vector<TableRow> rows;
    for (double m0 : m0s) {
        if (!(m0 > 0.0)) throw std::domain_error("table entries must be positive");
        auto k = case_constants(m0, m0 / 4.0);
        rows.push_back({m0, k.epsilonFinal, k.deltaFinal, k.wStarBound});
    }
    return rows;
}

struct LStarOptimum {
    double lStarOpt;
    LogValue epsilonOpt;
    LogValue wStar;
};

// Maximize epsilon over l* in [lo, hi] with l_* = l*/4: a log-spaced grid,
// then golden-section refinement of log10(epsilon) in log(l*).
inline LStarOptimum optimize_lstar(double lo = 1e-6, double hi = 2.0, int grid = 400) {
    auto score = [](double logl) {
        double l = std::exp(logl);
        return case_constants(l, l / 4.0).epsilonFinal.log10();
    };
    double a = std::log(lo), b = std::log(hi);
    double step = (b - a) / (grid - 1);
    int best = 0;
    double bestv = -HUGE_VAL;
    for (int i = 0; i < grid; ++i) {
        double v = score(a + i * step);
        if (v > bestv) {
            bestv = v;
            best = i;
        }
    }
    double left = a + std::max(0, best - 1) * step;
    double right = a + std::min(grid - 1, best + 1) * step;
    auto [x, fx] = golden_section_maximize(score, left, right, 1e-14);
    double l = std::exp(x);
    auto k = case_constants(l, l / 4.0);
    return {l, k.epsilonFinal, k.wStarBound};
}

}  // namespace pleat

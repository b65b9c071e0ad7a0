#pragma once
// Closed-form probability bounds for selection under tornado tabulation, the
// layer-size bounds, and the derived symbol table. Every formula is evaluated
// in double precision (log-domain where needed) and, behind the `hp`
// namespace, at >= 50 decimal digits for oracle checks.

#include <cstdint>
#include <string>
#include <vector>

namespace tornadohash::bounds {

// Probability-valued bound. `raw` is the pre-clamp value; `value` is clamped
// to [0, 1] and `vacuous` is set when raw > 1.
struct ProbBound {
    double value = 0;
    double raw = 0;
    double exp_term = 0;
    double additive_term = 0;
    bool vacuous = false;
    std::vector<std::string> warnings;
};

struct RealResult {
    double value = 0;
    std::vector<std::string> warnings;
};

// Pr[| |X| - mu | >= delta*mu] < 2 exp(-mu delta^2 / 3), fully random baseline.
ProbBound classic_chernoff(double delta, double mu);

// (e^delta / (1+delta)^(1+delta))^mu, the tornado upper-tail bound.
ProbBound upper_tail_tornado(double delta, double mu);

// Same closed form, stated for 0/1 variables whose products are dominated by
// independent ones; used for layer variables.
ProbBound generalized_chernoff(double delta, double mu);

// 24 (3/s)^b + 2^(-s/2): failure probability of local uniformity with b extra
// tables (a tornado function with d derived characters has b = d - 2).
ProbBound local_uniformity_error(double sigma, double b);

struct TheoremInputs {
    double delta = 0;
    double mu = 0;
    double sigma = 0; // |Sigma|, the space parameter s
    double b = 1;     // extra-table count (= d - 3 for the lower-tail theorem)
    double c = 4;
};

// Lower tail: 3 exp(-delta^2 mu / 7) + (c+b+1) ln(s) (49 (3/s)^b + 3 * 2^(-s/2)).
ProbBound pretty1_bound(const TheoremInputs& in);

// Two-sided subsampled bound: 5 exp(-delta^2 mu / 3) + (c+b+2) ln(s) (...).
ProbBound subsampling_bound(const TheoremInputs& in);

// exp(-0.5 t^2 / (variance_sum + t m / 3)) with |X_i| <= m.
ProbBound bernstein_tail(double t, double variance_sum, double m);

// Expected layer-size bound mu_bar_i = sigma * f^i / i!.
RealResult mu_bar(double i, double f, double sigma);

// Upper tail for layer size: (e^delta/(1+delta)^(1+delta))^(mu_bar_i).
ProbBound layer_upper_tail(double i, double delta, double f, double sigma);

// W(x) <= ln(2x / (ln x + 1)) for x > 1/e, plus a Newton-iterated reference.
RealResult lambert_w_upper(double x);
double lambert_w_newton(double x);

// P_error <= (c+d-2) ln(s) (49 (3/s)^(d-3) + 3 * 2^(-s/2)).
ProbBound p_error(double c, double d, double sigma);

enum class IndependenceVariant { old_bound, new_bound };

// Probability that the derived selected keys are linearly dependent:
//   old: 7 mu^3 (3/s)^(d+1) + 2^(-s/2)
//   new: 3^c s/n * 3 mu^3 (3/s)^(d+1) + (mu/s)^(s/2)   (requires n, c)
ProbBound independence_failure_bound(double mu, double sigma, double d, IndependenceVariant v,
                                     double n = 0, double c = 0);

struct SymbolTableOptions {
    double s_all = 160.0;    // per the symbol table; the prose uses 180
    bool prose_preg = false; // inner log ln(1/p) instead of ln(s_sec/p)
};

struct SymbolTable {
    double s_sec = 0;
    double s_all = 0;
    double p_reg = 0;
    long long i_nr = 0;
    double i_max = 0; // real-valued; use i_max_ceil() as a layer index bound
    double n_top = 0;
    double p_top = 0;
    double eps3 = 0;
    double delta_reg = 0;
    double delta_inr = 0;
    double delta_top = 0;
    double delta_nonreg = 0;
    double gamma1 = 0;
    double gamma2 = 0;
    std::vector<std::string> warnings;

    long long i_max_ceil() const;
};

SymbolTable symbol_table(double p, double mu, double sigma, double c, double d, double sel_bits,
                         const SymbolTableOptions& opt = {});

struct UglyBound {
    double deviation = 0;   // sqrt(ln(1/p) mu) * gamma1 + gamma2
    double probability = 0; // 3p + P_error
    SymbolTable symbols;
    ProbBound perror;
};

UglyBound ugly_bound(double p, double mu, double sigma, double c, double d, double sel_bits,
                     const SymbolTableOptions& opt = {});

// High-precision evaluations of the exact same formulas (>= 50 decimal
// digits internally, rounded to double on return). Used as the conformance
// oracle for the double-precision path.
namespace hp {
ProbBound classic_chernoff(double delta, double mu);
ProbBound upper_tail_tornado(double delta, double mu);
ProbBound generalized_chernoff(double delta, double mu);
ProbBound local_uniformity_error(double sigma, double b);
ProbBound pretty1_bound(const TheoremInputs& in);
ProbBound subsampling_bound(const TheoremInputs& in);
ProbBound bernstein_tail(double t, double variance_sum, double m);
RealResult mu_bar(double i, double f, double sigma);
ProbBound layer_upper_tail(double i, double delta, double f, double sigma);
RealResult lambert_w_upper(double x);
double lambert_w_newton(double x);
ProbBound p_error(double c, double d, double sigma);
ProbBound independence_failure_bound(double mu, double sigma, double d, IndependenceVariant v,
                                     double n = 0, double c = 0);
SymbolTable symbol_table(double p, double mu, double sigma, double c, double d, double sel_bits,
                         const SymbolTableOptions& opt = {});
UglyBound ugly_bound(double p, double mu, double sigma, double c, double d, double sel_bits,
                     const SymbolTableOptions& opt = {});
} // namespace hp

} // namespace tornadohash::bounds

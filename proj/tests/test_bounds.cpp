#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "tornadohash/bounds.hpp"
#include "tornadohash/prng.hpp"

using namespace tornadohash;
namespace bd = tornadohash::bounds;

namespace {

bool rel_close(double got, double want, double tol = 1e-12) {
    if (want == 0.0) return got == 0.0;
    return std::abs(got - want) <= tol * std::abs(want);
}

} // namespace

TEST_SUITE("bounds") {

TEST_CASE("classic chernoff") {
    const auto at0 = bd::classic_chernoff(0.0, 100.0);
    CHECK(at0.value == 1.0);
    CHECK(at0.raw == 2.0);
    CHECK(at0.vacuous);

    double prev = 2.0;
    for (int i = 1; i <= 100; ++i) {
        const double raw = bd::classic_chernoff(i / 100.0, 50.0).raw;
        CHECK(raw < prev);
        prev = raw;
    }

    // frozen high-precision value: 2 exp(-7)
    CHECK(rel_close(bd::classic_chernoff(0.1, 2100.0).value, 1.823763931109032416e-3, 1e-11));

    CHECK_THROWS_AS(bd::classic_chernoff(1.5, 10.0), std::domain_error);
    CHECK_THROWS_AS(bd::classic_chernoff(-0.1, 10.0), std::domain_error);
}

TEST_CASE("tornado upper tail") {
    CHECK(bd::upper_tail_tornado(0.0, 100.0).value == 1.0);
    CHECK(bd::upper_tail_tornado(1e-9, 100.0).value == doctest::Approx(1.0));
    // dominated by exp(-mu delta^2 / 3) for delta <= 1
    for (int i = 1; i <= 100; ++i) {
        const double delta = i / 100.0;
        CHECK(bd::upper_tail_tornado(delta, 40.0).value <= std::exp(-40.0 * delta * delta / 3.0) * (1 + 1e-12));
    }
    // frozen: (e/4)^10
    CHECK(rel_close(bd::upper_tail_tornado(1.0, 10.0).value, 2.1006074709707943456e-2, 1e-11));
    // the generalized form is the same closed expression
    CHECK(bd::generalized_chernoff(0.37, 21.0).value == bd::upper_tail_tornado(0.37, 21.0).value);
    CHECK(bd::generalized_chernoff(0.0, 5.0).value == 1.0);
    CHECK(rel_close(bd::generalized_chernoff(1.0, 10.0).value, 2.1006074709707943456e-2, 1e-11));
}

TEST_CASE("local uniformity error") {
    CHECK(rel_close(bd::local_uniformity_error(65536.0, 1.0).value, 0.0010986328125, 1e-12));
    double prev = 2.0;
    for (int b = 1; b <= 8; ++b) {
        const double v = bd::local_uniformity_error(65536.0, b).raw;
        CHECK(v < prev);
        prev = v;
    }
    const auto tiny = bd::local_uniformity_error(6.0, 1.0);
    CHECK(tiny.vacuous);
    CHECK(tiny.value == 1.0);
    CHECK(tiny.raw > 1.0);
    CHECK_THROWS_AS(bd::local_uniformity_error(1.0, 1.0), std::domain_error);
}

TEST_CASE("pretty1 bound") {
    const auto vac = bd::pretty1_bound({0.0, 16384.0, 65536.0, 1.0, 4.0});
    CHECK(vac.vacuous);
    CHECK(vac.value == 1.0);
    CHECK(vac.raw >= 3.0);

    // frozen additive term at (s=2^16, b=1, c=4)
    const auto b1 = bd::pretty1_bound({0.5, 32768.0, 65536.0, 1.0, 4.0});
    CHECK(rel_close(b1.additive_term, 0.14925679034518353587, 1e-11));

    // term split sums to the total
    SplitMix64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const double delta = 0.01 + rng.next_unit();
        const double mu = 100 + rng.next_below(30000);
        const auto r = bd::pretty1_bound({delta, mu, 65536.0, 1 + double(rng.next_below(4)), 4.0});
        CHECK(rel_close(r.raw, r.exp_term + r.additive_term, 1e-12));
    }

    // theorem-regime warnings
    CHECK(!bd::pretty1_bound({0.1, 100.0, 256.0, 1.0, 4.0}).warnings.empty());
    CHECK(bd::pretty1_bound({0.1, 16384.0, 65536.0, 1.0, 4.0}).warnings.empty());
}

TEST_CASE("subsampling bound") {
    CHECK(bd::subsampling_bound({0.0, 200.0, 65536.0, 2.0, 4.0}).vacuous);
    // frozen full value at (0.5, 200, 2^16, b=2, c=4)
    CHECK(rel_close(bd::subsampling_bound({0.5, 200.0, 65536.0, 2.0, 4.0}).value,
                    9.3987989460627255356e-6, 1e-11));
    // exponential-term ordering from the 3-vs-7 denominators; the 5-vs-3
    // prefactor flips the comparison below delta^2 mu ~ 2.7
    for (double x : {2.7, 3.0, 5.0, 10.0, 50.0}) {
        const double delta = 0.3;
        const double mu = x / (delta * delta);
        const auto sub = bd::subsampling_bound({delta, mu, 65536.0, 1.0, 4.0});
        const auto pre = bd::pretty1_bound({delta, mu, 65536.0, 1.0, 4.0});
        CHECK(sub.exp_term < pre.exp_term);
    }
}

TEST_CASE("bernstein tail") {
    CHECK(bd::bernstein_tail(0.0, 5.0, 1.0).value == 1.0);
    CHECK(bd::bernstein_tail(0.0, 0.0, 1.0).value == 1.0);
    double prev = 0.0;
    for (double v : {1.0, 5.0, 20.0, 100.0}) {
        const double b = bd::bernstein_tail(10.0, v, 2.0).value;
        CHECK(b > prev);
        prev = b;
    }
    CHECK(rel_close(bd::bernstein_tail(10.0, 25.0, 2.0).value, 0.20619202825140893401, 1e-11));
    CHECK_THROWS_AS(bd::bernstein_tail(-1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bd::bernstein_tail(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("expected layer size") {
    CHECK(rel_close(bd::mu_bar(1.0, 0.375, 256.0).value, 96.0, 1e-12));
    CHECK(rel_close(bd::mu_bar(3.0, 0.5, 256.0).value, 16.0 / 3.0, 1e-11));
    CHECK(bd::mu_bar(1.0, 0.7, 16.0).warnings.size() == 1);
    CHECK_THROWS_AS(bd::mu_bar(1.0, 0.0, 16.0), std::domain_error);

    // ratio mu_bar(i+1)/mu_bar(i) = f/(i+1) <= 1/6 for i >= 2, f <= 1/2
    for (double f : {0.1, 0.25, 0.5})
        for (int i = 2; i <= 12; ++i) {
            const double ratio = bd::mu_bar(i + 1.0, f, 1024.0).value /
                                 bd::mu_bar(double(i), f, 1024.0).value;
            CHECK(ratio <= 1.0 / 6.0 + 1e-12);
            CHECK(rel_close(ratio, f / (i + 1.0), 1e-9));
        }
}

TEST_CASE("layer upper tail") {
    const double mb = bd::mu_bar(2.0, 0.5, 256.0).value;
    CHECK(bd::layer_upper_tail(2.0, 0.8, 0.5, 256.0).value ==
          bd::upper_tail_tornado(0.8, mb).value);
    CHECK(bd::layer_upper_tail(2.0, 0.0, 0.5, 256.0).value == 1.0);
    CHECK(rel_close(bd::layer_upper_tail(1.0, 1.0, 0.5, 20.0).value,
                    bd::upper_tail_tornado(1.0, 10.0).value, 1e-12));
}

TEST_CASE("lambert W upper bound") {
    // W(e) = 1 and the bound is exactly ln(2e/2) = 1 there
    CHECK(rel_close(bd::lambert_w_upper(std::exp(1.0)).value, 1.0, 1e-12));
    CHECK(rel_close(bd::lambert_w_newton(std::exp(1.0)), 1.0, 1e-12));

    // the bound dominates the Newton reference across the domain
    const double lo = std::exp(-1.0) * (1 + 1e-9);
    for (int i = 0; i <= 100; ++i) {
        const double x = lo + (1000.0 - lo) * i / 100.0;
        const double w = bd::lambert_w_newton(x);
        CHECK(bd::lambert_w_upper(x).value + 1e-12 >= w);
        // Newton reference actually solves w e^w = x
        CHECK(rel_close(w * std::exp(w), x, 1e-9));
    }

    // finite just above 1/e, flagged as near-singular
    const auto near = bd::lambert_w_upper(std::exp(-1.0) + 1e-12);
    CHECK(std::isfinite(near.value));
    CHECK(!near.warnings.empty());
    CHECK_THROWS_AS(bd::lambert_w_upper(std::exp(-1.0)), std::domain_error);
}

TEST_CASE("p_error") {
    CHECK(rel_close(bd::p_error(4.0, 4.0, 65536.0).value, 0.14925679034518353587, 1e-11));
    double prev = 0.0;
    for (double c : {2.0, 4.0, 6.0, 8.0}) {
        const double v = bd::p_error(c, 4.0, 65536.0).raw;
        CHECK(v > prev);
        prev = v;
    }
    const auto d3 = bd::p_error(4.0, 3.0, 65536.0);
    CHECK(d3.vacuous); // (3/s)^0 term does not decay
    CHECK(!d3.warnings.empty());
}

TEST_CASE("independence failure bounds") {
    CHECK(rel_close(bd::independence_failure_bound(16.0, 256.0, 4.0,
                                                   bd::IndependenceVariant::old_bound)
                        .value,
                    6.3367187976837158203e-6, 1e-11));
    // mu = 0 kills the cubic term
    const auto zero = bd::independence_failure_bound(0.0, 256.0, 4.0,
                                                     bd::IndependenceVariant::old_bound);
    CHECK(zero.value == doctest::Approx(std::pow(2.0, -128.0)));

    // new <= old whenever 3^c s 3/(7n) <= 1 and f <= 1/2
    SplitMix64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const double sigma = 256.0 * (1 + rng.next_below(16));
        const double mu = 1 + rng.next_below(static_cast<std::uint64_t>(sigma / 2));
        const double c = 1 + rng.next_below(3);
        const double d = 3 + rng.next_below(4);
        const double n_min = std::pow(3.0, c) * sigma * 3.0 / 7.0;
        const double n = n_min * (1.0 + rng.next_unit() * 8.0);
        const auto o = bd::independence_failure_bound(mu, sigma, d,
                                                      bd::IndependenceVariant::old_bound);
        const auto nw = bd::independence_failure_bound(mu, sigma, d,
                                                       bd::IndependenceVariant::new_bound, n, c);
        CHECK(nw.raw <= o.raw * (1 + 1e-12));
    }
    CHECK_THROWS_AS(bd::independence_failure_bound(1.0, 256.0, 4.0,
                                                   bd::IndependenceVariant::new_bound),
                    std::invalid_argument);
}

TEST_CASE("symbol table frozen evaluation") {
    const auto t = bd::symbol_table(std::pow(2.0, -10.0), 32768.0, 65536.0, 4.0, 4.0, 1.0);
    CHECK(t.s_sec == 20.0);
    CHECK(t.s_all == 160.0);
    CHECK(t.i_nr == 5);
    CHECK(rel_close(t.p_reg, 1.4760904599007005307e-6, 1e-9));
    CHECK(rel_close(t.i_max, 22.873856958478195211, 1e-9));
    CHECK(t.i_max_ceil() == 23);
    CHECK(rel_close(t.n_top, 8.2629718919977079938, 1e-9));
    CHECK(rel_close(t.p_top, 7.3804522995035026533e-8, 1e-9));
    CHECK(rel_close(t.eps3, 0.05505142851333394616, 1e-9));
    CHECK(rel_close(t.delta_reg, 92.213481055779359113, 1e-9));
    CHECK(rel_close(t.delta_inr, 60.370142759489510627, 1e-9));
    CHECK(rel_close(t.delta_top, 98.502106316645106741, 1e-9));
    CHECK(rel_close(t.delta_nonreg, 161.87224907613461737, 1e-9));
    CHECK(rel_close(t.gamma1, 1.7500081792428975547, 1e-9));
    CHECK(rel_close(t.gamma2, 174.75584751809772679, 1e-9));
    CHECK(t.warnings.empty());
}

TEST_CASE("symbol table gamma2 lower bound and degenerate flags") {
    SplitMix64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const double sigma = 4096.0 * (1 << rng.next_below(5));
        const double mu = sigma / 4.0 + rng.next_unit() * sigma / 4.0;
        const double p = std::pow(2.0, -1.0 - double(rng.next_below(20)));
        const auto t = bd::symbol_table(p, mu, sigma, 4.0, 4.0, double(rng.next_below(8)));
        CHECK(t.gamma2 >= 8.6 * std::log(1.0 / p));
    }
    // tiny mu: no regular layers, flagged not thrown
    const auto deg = bd::symbol_table(0.5, 2.0, 65536.0, 4.0, 4.0, 1.0);
    CHECK(!deg.warnings.empty());
    CHECK_THROWS_AS(bd::symbol_table(0.0, 100.0, 256.0, 2.0, 4.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bd::symbol_table(1.0, 100.0, 256.0, 2.0, 4.0, 0.0), std::domain_error);
}

TEST_CASE("prose p_reg variant and s_all override") {
    const double p = std::pow(2.0, -10.0);
    const auto table_form = bd::symbol_table(p, 32768.0, 65536.0, 4.0, 4.0, 1.0);
    const auto prose_form =
        bd::symbol_table(p, 32768.0, 65536.0, 4.0, 4.0, 1.0, {160.0, true});
    CHECK(table_form.p_reg != prose_form.p_reg);
    const auto s180 = bd::symbol_table(p, 32768.0, 65536.0, 4.0, 4.0, 1.0, {180.0, false});
    CHECK(s180.s_all == 180.0);
    CHECK(s180.p_reg < table_form.p_reg);
}

TEST_CASE("ugly bound") {
    const double p = std::pow(2.0, -10.0);
    const auto u = bd::ugly_bound(p, 32768.0, 65536.0, 4.0, 4.0, 1.0);
    CHECK(rel_close(u.deviation, 1008.7783656758211982, 1e-9));
    CHECK(rel_close(u.probability, 0.15218647784518353587, 1e-9));
    CHECK(u.probability >= 3.0 * p);

    // deviation grows with ln(1/p)
    double prev = 0.0;
    for (int e = 2; e <= 20; e += 3) {
        const auto r = bd::ugly_bound(std::pow(2.0, -e), 32768.0, 65536.0, 4.0, 4.0, 1.0);
        CHECK(r.deviation > prev);
        CHECK(r.probability >= 3.0 * std::pow(2.0, -e));
        prev = r.deviation;
    }
}

TEST_CASE("log-domain evaluation stays finite on the stress grid") {
    for (double mu : {1.0, 1e3, 1e6, 1e9, std::pow(2.0, 40.0)})
        for (double delta : {1e-9, 1e-3, 0.5, 1.0}) {
            for (double v : {bd::classic_chernoff(delta, mu).value,
                             bd::upper_tail_tornado(delta, mu).value,
                             bd::pretty1_bound({delta, mu, 65536.0, 1.0, 4.0}).value,
                             bd::subsampling_bound({delta, mu, 65536.0, 1.0, 4.0}).value}) {
                CHECK(std::isfinite(v));
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
}

TEST_CASE("double path tracks the high-precision path (smoke)") {
    SplitMix64 rng(12);
    for (int i = 0; i < 50; ++i) {
        const double delta = 0.01 + 0.99 * rng.next_unit();
        const double mu = 1.0 + rng.next_below(100000);
        CHECK(rel_close(bd::classic_chernoff(std::min(delta, 1.0), mu).raw,
                        bd::hp::classic_chernoff(std::min(delta, 1.0), mu).raw, 1e-9));
        CHECK(rel_close(bd::upper_tail_tornado(delta, mu).raw,
                        bd::hp::upper_tail_tornado(delta, mu).raw, 1e-9));
    }
}

} // TEST_SUITE

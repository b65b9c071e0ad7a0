#pragma once
// Precision-generic implementations behind the public bounds API. The double
// and high-precision translation units instantiate these with their own real
// type; input validation and flags are identical in both.

#include <cmath>
#include <stdexcept>

#include "tornadohash/bounds.hpp"
#include "bounds_detail.hpp"

namespace tornadohash::bounds::impl {

template <class R>
ProbBound finish(const detail::Parts<R>& parts, std::vector<std::string> warnings = {}) {
    ProbBound b;
    b.raw = static_cast<double>(parts.raw);
    b.exp_term = static_cast<double>(parts.exp_term);
    b.additive_term = static_cast<double>(parts.additive);
    b.vacuous = b.raw > 1.0;
    b.value = std::min(std::max(b.raw, 0.0), 1.0);
    b.warnings = std::move(warnings);
    return b;
}

template <class R>
ProbBound classic_chernoff_impl(double delta, double mu) {
    if (!(delta >= 0.0) || delta > 1.0)
        throw std::domain_error("classic_chernoff: delta must be in [0, 1]");
    return finish(detail::classic_chernoff_core<R>(R(delta), R(mu)));
}

template <class R>
ProbBound upper_tail_impl(double delta, double mu) {
    if (!(delta >= 0.0))
        throw std::domain_error("upper_tail_tornado: delta must be >= 0");
    return finish(detail::upper_tail_core<R>(R(delta), R(mu)));
}

template <class R>
ProbBound local_uniformity_impl(double sigma, double b) {
    if (!(sigma >= 2.0))
        throw std::domain_error("local_uniformity_error: sigma must be >= 2");
    return finish(detail::local_uniformity_core<R>(R(sigma), R(b)));
}

inline std::vector<std::string> theorem_warnings(const TheoremInputs& in, bool subsampling) {
    std::vector<std::string> w;
    if (in.b < 1) w.push_back("b < 1: outside the theorem's b >= 1 requirement");
    if (in.sigma < 65536.0 * in.b * in.b)
        w.push_back("sigma < 2^16 b^2: outside the theorem regime");
    if (subsampling) {
        if (in.mu > in.sigma / 278.0) w.push_back("mu > sigma/278: outside the theorem regime");
        if (in.delta >= 1.0) w.push_back("delta >= 1: outside the theorem's delta < 1 requirement");
    } else {
        if (in.mu < in.sigma / 4.0 || in.mu > in.sigma / 2.0)
            w.push_back("mu outside [sigma/4, sigma/2]: outside the theorem regime");
    }
    if (in.c > std::log(in.sigma)) w.push_back("c > ln(sigma): outside the theorem regime");
    return w;
}

template <class R>
ProbBound pretty1_impl(const TheoremInputs& in) {
    return finish(detail::pretty1_core<R>(R(in.delta), R(in.mu), R(in.sigma), R(in.b), R(in.c)),
                  theorem_warnings(in, false));
}

template <class R>
ProbBound subsampling_impl(const TheoremInputs& in) {
    return finish(detail::subsampling_core<R>(R(in.delta), R(in.mu), R(in.sigma), R(in.b), R(in.c)),
                  theorem_warnings(in, true));
}

template <class R>
ProbBound bernstein_impl(double t, double variance_sum, double m) {
    if (!(t >= 0.0) || !(variance_sum >= 0.0) || !(m > 0.0))
        throw std::domain_error("bernstein_tail: require t >= 0, variance_sum >= 0, m > 0");
    return finish(detail::bernstein_core<R>(R(t), R(variance_sum), R(m)));
}

template <class R>
RealResult mu_bar_impl(double i, double f, double sigma) {
    if (!(f > 0.0)) throw std::domain_error("mu_bar: f must be > 0");
    if (!(i >= 0.0)) throw std::domain_error("mu_bar: i must be >= 0");
    RealResult r;
    r.value = static_cast<double>(detail::mu_bar_core<R>(R(i), R(f), R(sigma)));
    if (f > 0.5) r.warnings.push_back("f > 1/2: outside the standing assumption");
    return r;
}

template <class R>
ProbBound layer_upper_tail_impl(double i, double delta, double f, double sigma) {
    if (!(delta >= 0.0))
        throw std::domain_error("layer_upper_tail: delta must be >= 0");
    const R mb = detail::mu_bar_core<R>(R(i), R(f), R(sigma));
    auto b = finish(detail::upper_tail_core<R>(R(delta), mb));
    if (f > 0.5) b.warnings.push_back("f > 1/2: outside the standing assumption");
    return b;
}

template <class R>
RealResult lambert_w_upper_impl(double x) {
    if (!(x > std::exp(-1.0)))
        throw std::domain_error("lambert_w_upper: requires x > 1/e");
    RealResult r;
    r.value = static_cast<double>(detail::lambert_upper_core<R>(R(x)));
    if (std::log(x) + 1.0 < 1e-6)
        r.warnings.push_back("x near 1/e: ln(x)+1 close to zero");
    return r;
}

template <class R>
ProbBound p_error_impl(double c, double d, double sigma) {
    std::vector<std::string> w;
    if (sigma < 2048.0) w.push_back("sigma < 2^11: outside the lemma regime");
    if (c > std::log(sigma)) w.push_back("c > ln(sigma): outside the lemma regime");
    if (d <= 3.0) w.push_back("d <= 3: the (3/s)^(d-3) term does not decay");
    return finish(detail::p_error_core<R>(R(c), R(d), R(sigma)), std::move(w));
}

template <class R>
ProbBound independence_impl(double mu, double sigma, double d, IndependenceVariant v, double n,
                            double c) {
    std::vector<std::string> w;
    if (mu > sigma / 2.0) w.push_back("mu > sigma/2: outside the theorem regime");
    if (v == IndependenceVariant::new_bound) {
        if (!(n > 0.0))
            throw std::invalid_argument("independence_failure_bound: new variant requires n > 0");
        return finish(detail::independence_new_core<R>(R(mu), R(sigma), R(d), R(n), R(c)),
                      std::move(w));
    }
    return finish(detail::independence_old_core<R>(R(mu), R(sigma), R(d)), std::move(w));
}

template <class R>
SymbolTable symbol_table_impl(double p, double mu, double sigma, double c, double d,
                              double sel_bits, const SymbolTableOptions& opt) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("symbol_table: p must be in (0, 1)");
    if (!(mu > 0.0) || !(sigma > 1.0))
        throw std::domain_error("symbol_table: require mu > 0 and sigma > 1");
    const auto core = detail::symbol_core<R>(R(p), R(mu), R(sigma), R(d), R(sel_bits),
                                             R(opt.s_all), opt.prose_preg);
    SymbolTable t;
    t.s_sec = 20.0;
    t.s_all = opt.s_all;
    t.p_reg = static_cast<double>(core.p_reg);
    t.i_nr = core.i_nr;
    t.i_max = static_cast<double>(core.i_max);
    t.n_top = static_cast<double>(core.n_top);
    t.p_top = static_cast<double>(core.p_top);
    t.eps3 = static_cast<double>(core.eps3);
    t.delta_reg = static_cast<double>(core.delta_reg);
    t.delta_inr = static_cast<double>(core.delta_inr);
    t.delta_top = static_cast<double>(core.delta_top);
    t.delta_nonreg = static_cast<double>(core.delta_nonreg);
    t.gamma1 = static_cast<double>(core.gamma1);
    t.gamma2 = static_cast<double>(core.gamma2);
    if (core.degenerate)
        t.warnings.push_back("degenerate regime: no regular layers under these inputs");
    if (mu < sigma / 4.0 || mu > sigma / 2.0)
        t.warnings.push_back("mu outside [sigma/4, sigma/2]: outside the theorem regime");
    if (c > std::log(sigma)) t.warnings.push_back("c > ln(sigma): outside the theorem regime");
    if (!core.degenerate && t.gamma2 < 8.6 * std::log(1.0 / p))
        t.warnings.push_back("gamma2 < 8.6 ln(1/p): expected lower bound violated");
    return t;
}

template <class R>
UglyBound ugly_bound_impl(double p, double mu, double sigma, double c, double d, double sel_bits,
                          const SymbolTableOptions& opt) {
    UglyBound u;
    u.symbols = symbol_table_impl<R>(p, mu, sigma, c, d, sel_bits, opt);
    u.perror = p_error_impl<R>(c, d, sigma);
    const auto core = detail::symbol_core<R>(R(p), R(mu), R(sigma), R(d), R(sel_bits),
                                             R(opt.s_all), opt.prose_preg);
    const auto ug = detail::ugly_core<R>(R(p), R(mu), core, R(u.perror.raw));
    u.deviation = static_cast<double>(ug.deviation);
    u.probability = static_cast<double>(ug.probability);
    return u;
}

} // namespace tornadohash::bounds::impl

#pragma once
// Formula cores shared by the double and high-precision evaluation paths.
// All functions are templated on the real type R; callers attach warnings,
// clamping and error checks (which depend only on the inputs).

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/log1p.hpp>

namespace tornadohash::bounds::detail {

template <class R>
struct Parts {
    R raw{};
    R exp_term{};
    R additive{};
};

template <class R>
R e_const() {
    using std::exp;
    return exp(R(1));
}

template <class R>
Parts<R> classic_chernoff_core(R delta, R mu) {
    using std::exp;
    Parts<R> p;
    p.raw = R(2) * exp(-mu * delta * delta / R(3));
    return p;
}

template <class R>
Parts<R> upper_tail_core(R delta, R mu) {
    using std::exp;
    Parts<R> p;
    // (e^d / (1+d)^(1+d))^mu evaluated in the log domain.
    p.raw = exp(mu * (delta - (R(1) + delta) * boost::math::log1p(delta)));
    return p;
}

template <class R>
R pow2_neg_half(R sigma) {
    using std::pow;
    return pow(R(2), -sigma / R(2));
}

template <class R>
Parts<R> local_uniformity_core(R sigma, R b) {
    using std::pow;
    Parts<R> p;
    p.raw = R(24) * pow(R(3) / sigma, b) + pow2_neg_half(sigma);
    return p;
}

// (c+b+extra) ln(s) (49 (3/s)^b + 3 * 2^(-s/2))
template <class R>
R theorem_additive(R sigma, R b, R c, R extra) {
    using std::log;
    using std::pow;
    return (c + b + extra) * log(sigma) * (R(49) * pow(R(3) / sigma, b) + R(3) * pow2_neg_half(sigma));
}

template <class R>
Parts<R> pretty1_core(R delta, R mu, R sigma, R b, R c) {
    using std::exp;
    Parts<R> p;
    p.exp_term = R(3) * exp(-delta * delta * mu / R(7));
    p.additive = theorem_additive(sigma, b, c, R(1));
    p.raw = p.exp_term + p.additive;
    return p;
}

template <class R>
Parts<R> subsampling_core(R delta, R mu, R sigma, R b, R c) {
    using std::exp;
    Parts<R> p;
    p.exp_term = R(5) * exp(-delta * delta * mu / R(3));
    p.additive = theorem_additive(sigma, b, c, R(2));
    p.raw = p.exp_term + p.additive;
    return p;
}

template <class R>
Parts<R> bernstein_core(R t, R variance_sum, R m) {
    using std::exp;
    Parts<R> p;
    if (t == R(0)) {
        p.raw = R(1);
        return p;
    }
    p.raw = exp(-(t * t / R(2)) / (variance_sum + t * m / R(3)));
    return p;
}

template <class R>
R mu_bar_core(R i, R f, R sigma) {
    using std::exp;
    using std::log;
    return exp(log(sigma) + i * log(f) - boost::math::lgamma(i + R(1)));
}

template <class R>
R lambert_upper_core(R x) {
    using std::log;
    return log(R(2) * x / (log(x) + R(1)));
}

template <class R>
R lambert_newton_core(R x) {
    using std::abs;
    using std::exp;
    using std::log;
    // w e^w = x, Newton iteration from a log-based start.
    R w = x < R(1) ? x : log(x);
    for (int it = 0; it < 200; ++it) {
        const R ew = exp(w);
        const R delta = (w * ew - x) / (ew * (w + R(1)));
        w -= delta;
        if (abs(delta) <= abs(w) * R(1e-30) + R(1e-300)) break;
    }
    return w;
}

template <class R>
Parts<R> p_error_core(R c, R d, R sigma) {
    using std::log;
    using std::pow;
    Parts<R> p;
    p.raw = (c + d - R(2)) * log(sigma) *
            (R(49) * pow(R(3) / sigma, d - R(3)) + R(3) * pow2_neg_half(sigma));
    return p;
}

template <class R>
Parts<R> independence_old_core(R mu, R sigma, R d) {
    using std::pow;
    Parts<R> p;
    p.raw = R(7) * mu * mu * mu * pow(R(3) / sigma, d + R(1)) + pow2_neg_half(sigma);
    return p;
}

template <class R>
Parts<R> independence_new_core(R mu, R sigma, R d, R n, R c) {
    using std::pow;
    Parts<R> p;
    const R f = mu / sigma;
    p.raw = pow(R(3), c) * sigma / n * R(3) * mu * mu * mu * pow(R(3) / sigma, d + R(1)) +
            pow(f, sigma / R(2));
    return p;
}

template <class R>
struct SymbolCore {
    R p_reg{}, i_max{}, n_top{}, p_top{}, eps3{};
    R delta_reg{}, delta_inr{}, delta_top{}, delta_nonreg{}, gamma1{}, gamma2{};
    long long i_nr = 0;
    bool degenerate = false; // no i with mu_bar_i >= ln(s_all/p_reg) regime issues
};

template <class R>
SymbolCore<R> symbol_core(R p, R mu, R sigma, R d, R sel_bits, R s_all, bool prose_preg) {
    using std::exp;
    using std::log;
    using std::sqrt;
    SymbolCore<R> t;
    const R s_sec = R(20);
    const R log6 = log(R(6));
    const R l1p = -log(p);
    const R lsp = log(s_sec / p);
    const R f = mu / sigma;

    const R inner = prose_preg ? l1p : lsp;
    const R reg_layers = log((mu / R(2)) / inner) / log6;
    if (!(reg_layers > R(0))) {
        t.degenerate = true;
        t.p_reg = R(0);
    } else {
        t.p_reg = p / reg_layers / s_all;
    }

    const R lsr = t.degenerate ? R(0) : log(s_sec / t.p_reg);
    const R lar = t.degenerate ? R(0) : log(s_all / t.p_reg);

    // First non-regular layer: scan i = 3, 4, ... for mu_bar_i < ln(s_all/p_reg).
    t.i_nr = 3;
    if (!t.degenerate) {
        for (long long i = 3;; ++i) {
            if (mu_bar_core(R(i), f, sigma) < lar) {
                t.i_nr = i;
                break;
            }
            if (i > 1000000) {
                t.degenerate = true;
                break;
            }
        }
    }

    t.i_max = (d - R(2)) * log(sigma) + sel_bits * log(R(2));
    if (!t.degenerate) {
        t.n_top = log(lsr * s_all / p) / log6;
        const R cand1 = t.p_reg / s_sec;
        const R cand2 = p / (t.n_top * s_all);
        t.p_top = cand1 < cand2 ? cand1 : cand2;
    }
    t.eps3 = (R(2) + sqrt(R(6))) * sqrt(lsp / sigma) + (l1p / R(2) + R(6)) / mu;
    t.delta_reg = R(0.181) * sqrt(l1p * mu) + R(0.066) * sqrt(mu / l1p) + sqrt(R(2));
    if (!t.degenerate) {
        t.delta_inr = R(1.33) * e_const<R>() * lsr + R(1);
        t.delta_top = R(2) * log(R(1) / t.p_top) * (R(2) + log(log(t.n_top))) + t.n_top;
        t.delta_nonreg = t.delta_inr + t.delta_top + R(3);
    }
    t.gamma1 = sqrt(R(7) / R(3) * (R(1) + t.eps3)) + R(0.181);
    t.gamma2 = t.delta_reg - R(0.181) * sqrt(l1p * mu) + t.delta_nonreg + l1p;
    return t;
}

template <class R>
struct UglyCore {
    R deviation{};
    R probability{};
};

template <class R>
UglyCore<R> ugly_core(R p, R mu, const SymbolCore<R>& sym, R perror) {
    using std::log;
    using std::sqrt;
    UglyCore<R> u;
    u.deviation = sqrt(-log(p) * mu) * sym.gamma1 + sym.gamma2;
    u.probability = R(3) * p + perror;
    return u;
}

} // namespace tornadohash::bounds::detail

#include "tornadohash/bounds.hpp"

#include <cmath>

#include "bounds_impl.hpp"

namespace tornadohash::bounds {

long long SymbolTable::i_max_ceil() const { return static_cast<long long>(std::ceil(i_max)); }

ProbBound classic_chernoff(double delta, double mu) {
    return impl::classic_chernoff_impl<double>(delta, mu);
}
ProbBound upper_tail_tornado(double delta, double mu) {
    return impl::upper_tail_impl<double>(delta, mu);
}
ProbBound generalized_chernoff(double delta, double mu) {
    return impl::upper_tail_impl<double>(delta, mu);
}
ProbBound local_uniformity_error(double sigma, double b) {
    return impl::local_uniformity_impl<double>(sigma, b);
}
ProbBound pretty1_bound(const TheoremInputs& in) { return impl::pretty1_impl<double>(in); }
ProbBound subsampling_bound(const TheoremInputs& in) { return impl::subsampling_impl<double>(in); }
ProbBound bernstein_tail(double t, double variance_sum, double m) {
    return impl::bernstein_impl<double>(t, variance_sum, m);
}
RealResult mu_bar(double i, double f, double sigma) { return impl::mu_bar_impl<double>(i, f, sigma); }
ProbBound layer_upper_tail(double i, double delta, double f, double sigma) {
    return impl::layer_upper_tail_impl<double>(i, delta, f, sigma);
}
RealResult lambert_w_upper(double x) { return impl::lambert_w_upper_impl<double>(x); }
double lambert_w_newton(double x) {
    if (!(x > std::exp(-1.0)))
        throw std::domain_error("lambert_w_newton: requires x > 1/e");
    return detail::lambert_newton_core<double>(x);
}
ProbBound p_error(double c, double d, double sigma) { return impl::p_error_impl<double>(c, d, sigma); }
ProbBound independence_failure_bound(double mu, double sigma, double d, IndependenceVariant v,
                                     double n, double c) {
    return impl::independence_impl<double>(mu, sigma, d, v, n, c);
}
SymbolTable symbol_table(double p, double mu, double sigma, double c, double d, double sel_bits,
                         const SymbolTableOptions& opt) {
    return impl::symbol_table_impl<double>(p, mu, sigma, c, d, sel_bits, opt);
}
UglyBound ugly_bound(double p, double mu, double sigma, double c, double d, double sel_bits,
                     const SymbolTableOptions& opt) {
    return impl::ugly_bound_impl<double>(p, mu, sigma, c, d, sel_bits, opt);
}

} // namespace tornadohash::bounds

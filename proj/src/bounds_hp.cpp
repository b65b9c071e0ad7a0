#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tornadohash/bounds.hpp"
#include "bounds_impl.hpp"

namespace tornadohash::bounds::hp {

using real50 = boost::multiprecision::cpp_bin_float_50;

ProbBound classic_chernoff(double delta, double mu) {
    return impl::classic_chernoff_impl<real50>(delta, mu);
}
ProbBound upper_tail_tornado(double delta, double mu) {
    return impl::upper_tail_impl<real50>(delta, mu);
}
ProbBound generalized_chernoff(double delta, double mu) {
    return impl::upper_tail_impl<real50>(delta, mu);
}
ProbBound local_uniformity_error(double sigma, double b) {
    return impl::local_uniformity_impl<real50>(sigma, b);
}
ProbBound pretty1_bound(const TheoremInputs& in) { return impl::pretty1_impl<real50>(in); }
ProbBound subsampling_bound(const TheoremInputs& in) { return impl::subsampling_impl<real50>(in); }
ProbBound bernstein_tail(double t, double variance_sum, double m) {
    return impl::bernstein_impl<real50>(t, variance_sum, m);
}
RealResult mu_bar(double i, double f, double sigma) { return impl::mu_bar_impl<real50>(i, f, sigma); }
ProbBound layer_upper_tail(double i, double delta, double f, double sigma) {
    return impl::layer_upper_tail_impl<real50>(i, delta, f, sigma);
}
RealResult lambert_w_upper(double x) { return impl::lambert_w_upper_impl<real50>(x); }
double lambert_w_newton(double x) {
    if (!(x > std::exp(-1.0)))
        throw std::domain_error("lambert_w_newton: requires x > 1/e");
    return static_cast<double>(detail::lambert_newton_core<real50>(real50(x)));
}
ProbBound p_error(double c, double d, double sigma) { return impl::p_error_impl<real50>(c, d, sigma); }
ProbBound independence_failure_bound(double mu, double sigma, double d, IndependenceVariant v,
                                     double n, double c) {
    return impl::independence_impl<real50>(mu, sigma, d, v, n, c);
}
SymbolTable symbol_table(double p, double mu, double sigma, double c, double d, double sel_bits,
                         const SymbolTableOptions& opt) {
    return impl::symbol_table_impl<real50>(p, mu, sigma, c, d, sel_bits, opt);
}
UglyBound ugly_bound(double p, double mu, double sigma, double c, double d, double sel_bits,
                     const SymbolTableOptions& opt) {
    return impl::ugly_bound_impl<real50>(p, mu, sigma, c, d, sel_bits, opt);
}

} // namespace tornadohash::bounds::hp

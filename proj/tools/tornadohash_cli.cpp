// tornadohash command-line tool.
//
// Subcommands:
//   experiment run --config FILE.json     run a Monte Carlo experiment
//   experiment list                       list experiment kinds
//   bounds eval --formula NAME ...        evaluate a probability bound
//   hash --scheme tornado --keys FILE     hash keys, `hex_key hex_hash` lines
//   sketch build|merge|estimate ...       sketch utilities
//   independence --check FILE ...         linear-independence check
//
// Exit codes: 0 = ran, 1 = acceptance assertion failed, 2 = config error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tornadohash/bounds.hpp"
#include "tornadohash/gf2.hpp"
#include "tornadohash/harness.hpp"
#include "tornadohash/sketches.hpp"

namespace th = tornadohash;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw th::harness::ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<th::Key> read_hex_keys(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw th::harness::ConfigError("cannot open key file: " + path);
    std::vector<th::Key> keys;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        keys.push_back(th::Key{std::stoull(tok, nullptr, 16)});
    }
    return keys;
}

json bound_to_json(const th::bounds::ProbBound& b) {
    return json{{"value", b.value},
                {"raw", b.raw},
                {"exp_term", b.exp_term},
                {"additive_term", b.additive_term},
                {"vacuous", b.vacuous},
                {"warnings", b.warnings}};
}

json symbols_to_json(const th::bounds::SymbolTable& t) {
    return json{{"s_sec", t.s_sec},       {"s_all", t.s_all},
                {"p_reg", t.p_reg},       {"i_nr", t.i_nr},
                {"i_max", t.i_max},       {"i_max_ceil", t.i_max_ceil()},
                {"n_top", t.n_top},       {"p_top", t.p_top},
                {"eps3", t.eps3},         {"delta_reg", t.delta_reg},
                {"delta_inr", t.delta_inr}, {"delta_top", t.delta_top},
                {"delta_nonreg", t.delta_nonreg}, {"gamma1", t.gamma1},
                {"gamma2", t.gamma2},     {"warnings", t.warnings}};
}

void print_bound(const th::bounds::ProbBound& b, bool as_json) {
    if (as_json) {
        std::cout << bound_to_json(b).dump(2) << "\n";
        return;
    }
    std::cout << "value=" << th::harness::format_double(b.value)
              << " raw=" << th::harness::format_double(b.raw)
              << (b.vacuous ? " (vacuous)" : "") << "\n";
    for (const auto& w : b.warnings) std::cout << "warning: " << w << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tornado tabulation hashing toolkit"};
    app.require_subcommand(1);

    // ---- experiment ----
    auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiment runner");
    experiment->require_subcommand(1);
    auto* exp_run = experiment->add_subcommand("run", "run an experiment from a JSON config");
    std::string config_path, output_override;
    exp_run->add_option("--config", config_path, "experiment config JSON")->required();
    exp_run->add_option("--output", output_override, "override the output path stem");
    auto* exp_list = experiment->add_subcommand("list", "list experiment kinds");

    // ---- bounds ----
    auto* bounds_cmd = app.add_subcommand("bounds", "probability bound calculator");
    auto* bounds_eval = bounds_cmd->add_subcommand("eval", "evaluate a formula");
    std::string formula;
    double f_delta = 0.1, f_mu = 16384, f_sigma = 65536, f_b = 1, f_c = 4, f_d = 4;
    double f_t = 0, f_var = 0, f_m = 1, f_i = 1, f_f = 0.5, f_x = 3.0, f_p = 0.001, f_sel = 0,
           f_n = 0, f_sall = 160;
    bool f_json = false, f_prose = false, f_new = false;
    bounds_eval->add_option("--formula", formula,
                            "pretty1|subsampling|classic|upper_tail|generalized|local_uniformity|"
                            "bernstein|mu_bar|layer_upper_tail|lambert_w|p_error|independence|"
                            "symbols|ugly")
        ->required();
    bounds_eval->add_option("--delta", f_delta);
    bounds_eval->add_option("--mu", f_mu);
    bounds_eval->add_option("--sigma", f_sigma);
    bounds_eval->add_option("--b", f_b);
    bounds_eval->add_option("--c", f_c);
    bounds_eval->add_option("--d", f_d);
    bounds_eval->add_option("--t", f_t);
    bounds_eval->add_option("--variance", f_var);
    bounds_eval->add_option("--m", f_m);
    bounds_eval->add_option("--i", f_i);
    bounds_eval->add_option("--f", f_f);
    bounds_eval->add_option("--x", f_x);
    bounds_eval->add_option("--p", f_p);
    bounds_eval->add_option("--sel-bits", f_sel);
    bounds_eval->add_option("--n", f_n);
    bounds_eval->add_option("--s-all", f_sall);
    bounds_eval->add_flag("--prose-preg", f_prose, "prose p_reg variant (inner ln(1/p))");
    bounds_eval->add_flag("--new-variant", f_new, "new independence-failure bound");
    bounds_eval->add_flag("--json", f_json);

    // ---- hash ----
    auto* hash_cmd = app.add_subcommand("hash", "hash keys from a file");
    std::string scheme = "tornado", keys_path;
    std::uint64_t h_seed = 0;
    th::HashParams hp;
    hash_cmd->add_option("--scheme", scheme, "tornado|simple|oracle");
    hash_cmd->add_option("--c", hp.c);
    hash_cmd->add_option("--d", hp.d);
    hash_cmd->add_option("--char-bits", hp.char_bits);
    hash_cmd->add_option("--range-bits", hp.range_bits);
    hash_cmd->add_option("--seed", h_seed);
    hash_cmd->add_option("--keys", keys_path, "file of hex keys, one per line")->required();

    // ---- sketch ----
    auto* sketch_cmd = app.add_subcommand("sketch", "sketch utilities");
    sketch_cmd->require_subcommand(1);
    std::string sk_type = "bottomk", sk_keys, sk_out, sk_a, sk_b, sk_in;
    std::uint64_t sk_k = 256, sk_seed = 0;
    th::HashParams sk_hp;
    auto* sk_build = sketch_cmd->add_subcommand("build", "build a sketch from keys");
    sk_build->add_option("--type", sk_type, "bottomk|kpm");
    sk_build->add_option("--k", sk_k);
    sk_build->add_option("--keys", sk_keys)->required();
    sk_build->add_option("--seed", sk_seed);
    sk_build->add_option("--c", sk_hp.c);
    sk_build->add_option("--d", sk_hp.d);
    sk_build->add_option("--char-bits", sk_hp.char_bits);
    sk_build->add_option("--range-bits", sk_hp.range_bits);
    sk_build->add_option("--out", sk_out)->required();
    auto* sk_merge = sketch_cmd->add_subcommand("merge", "merge two sketches");
    sk_merge->add_option("--a", sk_a)->required();
    sk_merge->add_option("--b", sk_b)->required();
    sk_merge->add_option("--out", sk_out)->required();
    auto* sk_est = sketch_cmd->add_subcommand("estimate", "distinct-count estimate of a sketch");
    sk_est->add_option("--in", sk_in)->required();

    // ---- independence ----
    auto* indep = app.add_subcommand("independence", "GF(2) linear independence check");
    std::string indep_file;
    bool indep_derived = false;
    std::uint64_t indep_seed = 0;
    th::HashParams ind_hp;
    indep->add_option("--check", indep_file, "file of hex keys")->required();
    indep->add_option("--c", ind_hp.c);
    indep->add_option("--d", ind_hp.d);
    indep->add_option("--char-bits", ind_hp.char_bits);
    indep->add_option("--range-bits", ind_hp.range_bits);
    indep->add_flag("--derived", indep_derived, "check derived keys under a tornado hasher");
    indep->add_option("--seed", indep_seed, "seed for --derived");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exp_run->parsed()) {
            auto cfg = th::harness::config_from_json(read_file(config_path));
            th::harness::apply_env_overrides(cfg);
            if (!output_override.empty()) cfg.output = output_override;
            std::string csv;
            const int rc = th::harness::run_experiment(cfg, &csv, nullptr);
            std::cout << csv;
            return rc;
        }
        if (exp_list->parsed()) {
            std::cout << "lower_tail        empirical Pr[|X| < (1-delta)mu] vs the lower-tail bound\n"
                         "upper_tail        empirical Pr[|X| >= (1+delta)mu ^ independent] vs the upper-tail bound\n"
                         "layers            layer sizes S_i vs mu_bar_i and the layer tail bound\n"
                         "cond_translation  Pr[E[S_i|hbar] >= lambda+1] <= 2 Pr[S_i >= lambda]\n"
                         "independence      dependence frequency of derived selected keys vs bounds\n"
                         "sketch_accuracy   bottom-k / Jaccard / frequency estimator accuracy\n"
                         "coupling_count    tornado on A vs oracle on A' count coupling\n";
            return 0;
        }
        if (bounds_eval->parsed()) {
            namespace bd = th::bounds;
            if (formula == "pretty1")
                print_bound(bd::pretty1_bound({f_delta, f_mu, f_sigma, f_b, f_c}), f_json);
            else if (formula == "subsampling")
                print_bound(bd::subsampling_bound({f_delta, f_mu, f_sigma, f_b, f_c}), f_json);
            else if (formula == "classic")
                print_bound(bd::classic_chernoff(f_delta, f_mu), f_json);
            else if (formula == "upper_tail")
                print_bound(bd::upper_tail_tornado(f_delta, f_mu), f_json);
            else if (formula == "generalized")
                print_bound(bd::generalized_chernoff(f_delta, f_mu), f_json);
            else if (formula == "local_uniformity")
                print_bound(bd::local_uniformity_error(f_sigma, f_b), f_json);
            else if (formula == "bernstein")
                print_bound(bd::bernstein_tail(f_t, f_var, f_m), f_json);
            else if (formula == "mu_bar") {
                const auto r = bd::mu_bar(f_i, f_f, f_sigma);
                std::cout << (f_json ? json{{"value", r.value}, {"warnings", r.warnings}}.dump(2)
                                     : th::harness::format_double(r.value))
                          << "\n";
            } else if (formula == "layer_upper_tail")
                print_bound(bd::layer_upper_tail(f_i, f_delta, f_f, f_sigma), f_json);
            else if (formula == "lambert_w") {
                const auto r = bd::lambert_w_upper(f_x);
                json j{{"upper_bound", r.value},
                       {"newton_reference", bd::lambert_w_newton(f_x)},
                       {"warnings", r.warnings}};
                std::cout << (f_json ? j.dump(2) : j.dump()) << "\n";
            } else if (formula == "p_error")
                print_bound(bd::p_error(f_c, f_d, f_sigma), f_json);
            else if (formula == "independence")
                print_bound(bd::independence_failure_bound(
                                f_mu, f_sigma, f_d,
                                f_new ? bd::IndependenceVariant::new_bound
                                      : bd::IndependenceVariant::old_bound,
                                f_n, f_c),
                            f_json);
            else if (formula == "symbols") {
                const auto t = bd::symbol_table(f_p, f_mu, f_sigma, f_c, f_d, f_sel,
                                                {f_sall, f_prose});
                std::cout << symbols_to_json(t).dump(2) << "\n";
            } else if (formula == "ugly") {
                const auto u = bd::ugly_bound(f_p, f_mu, f_sigma, f_c, f_d, f_sel,
                                              {f_sall, f_prose});
                json j{{"deviation", u.deviation},
                       {"probability", u.probability},
                       {"symbols", symbols_to_json(u.symbols)},
                       {"p_error", bound_to_json(u.perror)}};
                std::cout << j.dump(2) << "\n";
            } else
                throw th::harness::ConfigError("unknown formula: " + formula);
            return 0;
        }
        if (hash_cmd->parsed()) {
            const auto keys = read_hex_keys(keys_path);
            char buf[64];
            const auto emit = [&](th::Key k, std::uint64_t h) {
                std::snprintf(buf, sizeof(buf), "%016llx %016llx",
                              static_cast<unsigned long long>(k.bits),
                              static_cast<unsigned long long>(h));
                std::cout << buf << "\n";
            };
            if (scheme == "tornado") {
                th::TornadoHasher h(h_seed, hp);
                for (auto k : keys) emit(k, h.hash(k));
            } else if (scheme == "simple") {
                th::SimpleTabulation h(h_seed, hp);
                for (auto k : keys) emit(k, h.hash(k));
            } else if (scheme == "oracle") {
                th::RandomOracle h(h_seed, hp);
                for (auto k : keys) emit(k, h.hash(k));
            } else
                throw th::harness::ConfigError("unknown scheme: " + scheme);
            return 0;
        }
        if (sk_build->parsed()) {
            const auto keys = read_hex_keys(sk_keys);
            th::TornadoHasher h(sk_seed, sk_hp);
            std::vector<std::uint8_t> bytes;
            if (sk_type == "bottomk")
                bytes = th::sketch::bottomk_build(std::span<const th::Key>(keys), sk_k, h).serialize();
            else if (sk_type == "kpm")
                bytes = th::sketch::kpm_build(std::span<const th::Key>(keys), sk_k, h).serialize();
            else
                throw th::harness::ConfigError("unknown sketch type: " + sk_type);
            std::ofstream(sk_out, std::ios::binary)
                .write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
            return 0;
        }
        if (sk_merge->parsed() || sk_est->parsed()) {
            const auto load = [](const std::string& path) {
                const std::string raw = read_file(path);
                return std::vector<std::uint8_t>(raw.begin(), raw.end());
            };
            if (sk_est->parsed()) {
                const auto bytes = load(sk_in);
                try {
                    const auto s = th::sketch::BottomKSketch::deserialize(bytes);
                    std::cout << th::harness::format_double(s.distinct_estimate()) << "\n";
                } catch (const std::invalid_argument&) {
                    const auto s = th::sketch::KPartitionMinSketch::deserialize(bytes);
                    std::cout << th::harness::format_double(s.estimate()) << "\n";
                }
                return 0;
            }
            const auto ab = load(sk_a);
            const auto bb = load(sk_b);
            std::vector<std::uint8_t> merged;
            try {
                merged = th::sketch::bottomk_union(th::sketch::BottomKSketch::deserialize(ab),
                                                   th::sketch::BottomKSketch::deserialize(bb))
                             .serialize();
            } catch (const std::invalid_argument&) {
                merged = th::sketch::kpm_union(th::sketch::KPartitionMinSketch::deserialize(ab),
                                               th::sketch::KPartitionMinSketch::deserialize(bb))
                             .serialize();
            }
            std::ofstream(sk_out, std::ios::binary)
                .write(reinterpret_cast<const char*>(merged.data()), merged.size());
            return 0;
        }
        if (indep->parsed()) {
            const auto keys = read_hex_keys(indep_file);
            th::gf2::IndependenceResult res;
            if (indep_derived) {
                th::TornadoHasher h(indep_seed, ind_hp);
                res = th::gf2::derived_independent(h, keys);
            } else {
                th::gf2::KeyFamily fam;
                for (auto k : keys) fam.members.push_back(th::gf2::to_generalized(k, ind_hp));
                res = th::gf2::is_linearly_independent(fam);
            }
            if (res.independent) {
                std::cout << "independent\n";
            } else {
                std::cout << "dependent witness_size=" << res.witness.size() << " witness=";
                for (std::size_t i = 0; i < res.witness.size(); ++i)
                    std::cout << (i ? "," : "") << res.witness[i];
                std::cout << "\n";
            }
            return 0;
        }
    } catch (const th::harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

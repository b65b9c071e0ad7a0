#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "tornadohash/gf2.hpp"
#include "tornadohash/harness.hpp"
#include "tornadohash/sketches.hpp"

namespace tornadohash::harness {

using jdoc = nlohmann::json;

namespace {

// Oracle-baseline trials run on a disjoint seed stream from the tornado
// trials of the same experiment.
constexpr std::uint64_t kOracleIdOffset = 0x100;

std::uint32_t effective_threads(const ExperimentConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

template <class F>
void parallel_trials(std::uint64_t trials, std::uint32_t threads, F&& fn) {
    threads = std::max<std::uint32_t>(1, std::min<std::uint64_t>(threads, trials ? trials : 1));
    if (threads == 1) {
        for (std::uint64_t r = 0; r < trials; ++r) fn(r);
        return;
    }
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::uint32_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::uint64_t r = t; r < trials; r += threads) fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string csv_prelude(const ExperimentConfig& cfg) {
    return "# config_sha256=" + config_sha256(cfg) + "\n";
}

jdoc report_meta(const ExperimentConfig& cfg) {
    jdoc j;
    j["config"] = jdoc::parse(config_to_json(cfg));
    j["config_sha256"] = config_sha256(cfg);
    return j;
}

bool theorem_regime(const ExperimentConfig& cfg, long double mu) {
    const double s = static_cast<double>(cfg.hash.sigma());
    const double b = static_cast<double>(cfg.hash.d) - 3.0;
    return b >= 1.0 && s >= 65536.0 * b * b && mu >= s / 4.0L && mu <= s / 2.0L &&
           cfg.hash.c <= std::log(s);
}

struct TailTrial {
    std::uint64_t count = 0;
    bool independent = true;
};

// Shared engine for the lower/upper tail experiments.
TailReport run_tail(const ExperimentConfig& cfg, bool upper) {
    cfg.validate();
    const auto keys = generate_keys(cfg);
    const Selector sel{cfg.select_bits, cfg.mask};
    const Dyadic mu_exact{cfg.n, cfg.select_bits};
    const long double mu = mu_exact.value();
    const std::uint64_t id = experiment_id(upper ? ExperimentKind::upper_tail
                                                 : ExperimentKind::lower_tail);

    // Smallest upper-tail threshold in the grid; the (expensive) independence
    // check only runs when some grid event can actually fire.
    long double min_upper = mu + 1;
    for (double d : cfg.delta_grid) min_upper = std::min(min_upper, (1.0L + d) * mu);

    std::vector<TailTrial> tornado(cfg.trials);
    std::vector<std::uint64_t> oracle(cfg.trials);
    const std::uint32_t threads = effective_threads(cfg);

    parallel_trials(cfg.trials, threads, [&](std::uint64_t r) {
        const TornadoHasher h(trial_seed(cfg.master_seed, id, r), cfg.hash);
        TailTrial t;
        std::vector<Key> selected;
        for (Key k : keys)
            if (sel.selects(h.hash(k), cfg.hash)) {
                ++t.count;
                if (upper) selected.push_back(k);
            }
        if (upper && static_cast<long double>(t.count) >= min_upper)
            t.independent = static_cast<bool>(gf2::derived_independent(h, selected));
        tornado[r] = t;
    });
    parallel_trials(cfg.trials, threads, [&](std::uint64_t r) {
        const RandomOracle o(trial_seed(cfg.master_seed, id + kOracleIdOffset, r), cfg.hash);
        std::uint64_t count = 0;
        for (Key k : keys)
            if (sel.selects(o.hash(k), cfg.hash)) ++count;
        oracle[r] = count;
    });

    TailReport rep;
    rep.cfg = cfg;
    rep.mu = mu;
    rep.in_theorem_regime = theorem_regime(cfg, mu);
    const double s = static_cast<double>(cfg.hash.sigma());
    const double b = static_cast<double>(cfg.hash.d) - 3.0;
    for (double delta : cfg.delta_grid) {
        TailRow row;
        row.delta = delta;
        const long double thr = upper ? (1.0L + delta) * mu : (1.0L - delta) * mu;
        for (std::uint64_t r = 0; r < cfg.trials; ++r) {
            const long double c = static_cast<long double>(tornado[r].count);
            const bool event = upper ? (c >= thr && tornado[r].independent) : (c < thr);
            if (event) ++row.hits;
            const long double oc = static_cast<long double>(oracle[r]);
            if (upper ? (oc >= thr) : (oc < thr)) ++row.oracle_hits;
        }
        row.ci = stats::wilson99(row.hits, cfg.trials);
        row.oracle_ci = stats::wilson99(row.oracle_hits, cfg.trials);
        row.bound_pretty1 =
            bounds::pretty1_bound({delta, static_cast<double>(mu), s, b, double(cfg.hash.c)}).value;
        row.bound_classic = bounds::classic_chernoff(delta, static_cast<double>(mu)).value;
        row.bound_upper = bounds::upper_tail_tornado(delta, static_cast<double>(mu)).value;
        if (upper) {
            row.ok = row.ci.freq <= row.bound_upper + 4.0 * row.ci.half_width;
        } else {
            const bool vs_bound = row.ci.freq <= row.bound_pretty1 + 4.0 * row.ci.half_width;
            const bool vs_oracle = row.ci.freq <= 3.0 * row.oracle_ci.freq +
                                                      4.0 * (row.ci.half_width +
                                                             3.0 * row.oracle_ci.half_width);
            row.ok = vs_bound && vs_oracle;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace

TailReport run_lower_tail(const ExperimentConfig& cfg) { return run_tail(cfg, false); }
TailReport run_upper_tail(const ExperimentConfig& cfg) { return run_tail(cfg, true); }

bool TailReport::ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const TailRow& r) { return r.ok; });
}

std::string TailReport::csv() const {
    std::string out = csv_prelude(cfg);
    out += "delta,hits,freq,wilson_low,wilson_high,bound_pretty1,bound_classic,bound_upper,"
           "oracle_hits,oracle_freq,oracle_wilson_low,oracle_wilson_high,ok\n";
    for (const TailRow& r : rows) {
        out += format_double(r.delta) + "," + std::to_string(r.hits) + "," +
               format_double(r.ci.freq) + "," + format_double(r.ci.low) + "," +
               format_double(r.ci.high) + "," + format_double(r.bound_pretty1) + "," +
               format_double(r.bound_classic) + "," + format_double(r.bound_upper) + "," +
               std::to_string(r.oracle_hits) + "," + format_double(r.oracle_ci.freq) + "," +
               format_double(r.oracle_ci.low) + "," + format_double(r.oracle_ci.high) + "," +
               (r.ok ? "1" : "0") + "\n";
    }
    return out;
}

std::string TailReport::json() const {
    jdoc j = report_meta(cfg);
    j["mu"] = static_cast<double>(mu);
    j["in_theorem_regime"] = in_theorem_regime;
    auto& rows_j = j["rows"] = jdoc::array();
    for (const TailRow& r : rows) {
        rows_j.push_back({{"delta", r.delta},
                          {"hits", r.hits},
                          {"freq", r.ci.freq},
                          {"wilson", {r.ci.low, r.ci.high}},
                          {"bound_pretty1", r.bound_pretty1},
                          {"bound_classic", r.bound_classic},
                          {"bound_upper", r.bound_upper},
                          {"oracle_hits", r.oracle_hits},
                          {"oracle_freq", r.oracle_ci.freq},
                          {"oracle_wilson", {r.oracle_ci.low, r.oracle_ci.high}},
                          {"ok", r.ok}});
    }
    return j.dump(2);
}

LayerReport run_layers(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto keys = generate_keys(cfg);
    const Selector sel{cfg.select_bits, cfg.mask};
    const long double mu = Dyadic{cfg.n, cfg.select_bits}.value();
    const double f = static_cast<double>(mu / static_cast<long double>(cfg.hash.sigma()));
    const std::uint64_t id = experiment_id(ExperimentKind::layers);

    struct Trial {
        std::vector<std::uint64_t> s;
        bool j_ok = true;
    };
    std::vector<Trial> trials(cfg.trials);
    parallel_trials(cfg.trials, effective_threads(cfg), [&](std::uint64_t r) {
        const TornadoHasher h(trial_seed(cfg.master_seed, id, r), cfg.hash);
        std::vector<std::uint64_t> bucket_count(cfg.hash.sigma(), 0);
        gf2::KeyFamily prefixes;
        const std::uint32_t nd = cfg.hash.derived_chars();
        const std::uint64_t sigma = cfg.hash.sigma();
        for (Key k : keys) {
            const DerivedKey dk = h.derive(k);
            std::uint64_t hash = 0;
            for (std::uint32_t pos = 0; pos < nd; ++pos)
                hash ^= h.top_table(pos)[dk.chars[pos]];
            if (!sel.selects(hash, cfg.hash)) continue;
            ++bucket_count[dk.chars[nd - 1]];
            prefixes.members.push_back(gf2::to_generalized(dk.prefix(nd - 1)));
        }
        Trial t;
        std::vector<std::uint64_t> sizes;
        for (std::uint64_t a = 0; a < sigma; ++a)
            if (bucket_count[a]) sizes.push_back(bucket_count[a]);
        t.s = layer_profile_from_sizes(sizes).s;
        t.j_ok = static_cast<bool>(gf2::is_linearly_independent(prefixes));
        trials[r] = std::move(t);
    });

    LayerReport rep;
    rep.cfg = cfg;
    std::uint64_t max_i = cfg.max_layer;
    for (const auto& t : trials) max_i = std::max<std::uint64_t>(max_i, t.s.size());
    for (const auto& t : trials)
        if (!t.j_ok) ++rep.j_failures;

    for (std::uint64_t i = 1; i <= max_i; ++i) {
        LayerRow row;
        row.i = i;
        stats::MeanVar mv;
        for (const auto& t : trials) {
            const double v = t.j_ok && i <= t.s.size() ? static_cast<double>(t.s[i - 1]) : 0.0;
            mv.add(v);
        }
        row.mean_si_j = mv.mean;
        row.se = mv.std_error();
        row.mu_bar = bounds::mu_bar(static_cast<double>(i), f, double(cfg.hash.sigma())).value;
        row.ok = row.mean_si_j <= row.mu_bar + 4.0 * row.se;
        for (double delta : cfg.delta_grid) {
            std::uint64_t hits = 0;
            const double thr = (1.0 + delta) * row.mu_bar;
            for (const auto& t : trials) {
                const double v = i <= t.s.size() ? static_cast<double>(t.s[i - 1]) : 0.0;
                if (t.j_ok && v > thr) ++hits;
            }
            row.tail_freq.push_back(static_cast<double>(hits) / static_cast<double>(cfg.trials));
            row.tail_bound.push_back(
                bounds::layer_upper_tail(double(i), delta, f, double(cfg.hash.sigma())).value);
        }
        rep.rows.push_back(std::move(row));
    }

    if (!cfg.layer_profiles_output.empty()) {
        std::vector<LayerProfile> profiles;
        profiles.reserve(trials.size());
        for (const auto& t : trials) {
            LayerProfile p;
            p.s = t.s;
            p.max_bucket = t.s.size();
            profiles.push_back(std::move(p));
        }
        namespace fs = std::filesystem;
        const fs::path path(cfg.layer_profiles_output);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream(path, std::ios::binary) << layer_profiles_csv(profiles);
    }
    return rep;
}

bool LayerReport::ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const LayerRow& r) { return r.ok; });
}

std::string LayerReport::csv() const {
    std::string out = csv_prelude(cfg);
    out += "i,mean_si_j,se,mu_bar,ok,delta,tail_freq,tail_bound\n";
    for (const LayerRow& r : rows) {
        const std::string base = std::to_string(r.i) + "," + format_double(r.mean_si_j) + "," +
                                 format_double(r.se) + "," + format_double(r.mu_bar) + "," +
                                 (r.ok ? "1" : "0");
        if (cfg.delta_grid.empty()) {
            out += base + ",,,\n";
        } else {
            for (std::size_t di = 0; di < cfg.delta_grid.size(); ++di)
                out += base + "," + format_double(cfg.delta_grid[di]) + "," +
                       format_double(r.tail_freq[di]) + "," + format_double(r.tail_bound[di]) + "\n";
        }
    }
    return out;
}

std::string LayerReport::json() const {
    jdoc j = report_meta(cfg);
    j["j_failures"] = j_failures;
    auto& rows_j = j["rows"] = jdoc::array();
    for (const LayerRow& r : rows)
        rows_j.push_back({{"i", r.i},
                          {"mean_si_j", r.mean_si_j},
                          {"se", r.se},
                          {"mu_bar", r.mu_bar},
                          {"tail_freq", r.tail_freq},
                          {"tail_bound", r.tail_bound},
                          {"ok", r.ok}});
    return j.dump(2);
}

CondTranslationReport run_cond_translation(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto keys = generate_keys(cfg);
    const Selector sel{cfg.select_bits, cfg.mask};
    const std::uint64_t id = experiment_id(ExperimentKind::cond_translation);
    const std::uint32_t layer = cfg.layer_index;

    std::vector<double> cond_exp(cfg.trials, 0.0);
    std::vector<std::uint64_t> realized(cfg.trials, 0);
    parallel_trials(cfg.trials, effective_threads(cfg), [&](std::uint64_t r) {
        const TornadoHasher h(trial_seed(cfg.master_seed, id, r), cfg.hash);
        // Realized S_i under the full hash function (its own last table is the
        // random draw), and the exact conditional expectation given hbar.
        const SelectionResult selres = select(std::span<const Key>(keys), h, sel);
        const LayerProfile prof = layer_profile(buckets_by_last_char(selres, h));
        realized[r] = prof.layer(layer);
        const HbarFixture fixture = HbarFixture::freeze(h, keys, sel);
        const CondExpectation exact = cond_expectation_exact(fixture);
        cond_exp[r] = layer <= exact.mean_s.size() ? exact.mean_s[layer - 1] : 0.0;
    });

    std::uint64_t lambda_max = 2;
    for (std::uint64_t r = 0; r < cfg.trials; ++r) {
        lambda_max = std::max(lambda_max, realized[r] + 2);
        lambda_max = std::max(lambda_max, static_cast<std::uint64_t>(std::ceil(cond_exp[r])) + 2);
    }

    CondTranslationReport rep;
    rep.cfg = cfg;
    rep.layer = layer;
    const double nt = static_cast<double>(cfg.trials);
    for (std::uint64_t lambda = 0; lambda <= lambda_max; ++lambda) {
        CondTranslationRow row;
        row.lambda = lambda;
        std::uint64_t lhs = 0, rhs = 0;
        for (std::uint64_t r = 0; r < cfg.trials; ++r) {
            if (cond_exp[r] >= static_cast<double>(lambda) + 1.0) ++lhs;
            if (realized[r] >= lambda) ++rhs;
        }
        row.freq_lhs = static_cast<double>(lhs) / nt;
        row.freq_rhs = static_cast<double>(rhs) / nt;
        const double var_lhs = row.freq_lhs * (1.0 - row.freq_lhs) / nt;
        const double var_rhs = row.freq_rhs * (1.0 - row.freq_rhs) / nt;
        row.slack = 4.0 * std::sqrt(var_lhs + 4.0 * var_rhs);
        row.ok = row.freq_lhs <= 2.0 * row.freq_rhs + row.slack;
        rep.rows.push_back(row);
    }
    return rep;
}

bool CondTranslationReport::ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const CondTranslationRow& r) { return r.ok; });
}

std::string CondTranslationReport::csv() const {
    std::string out = csv_prelude(cfg);
    out += "lambda,freq_lhs,freq_rhs,slack,ok\n";
    for (const CondTranslationRow& r : rows)
        out += std::to_string(r.lambda) + "," + format_double(r.freq_lhs) + "," +
               format_double(r.freq_rhs) + "," + format_double(r.slack) + "," +
               (r.ok ? "1" : "0") + "\n";
    return out;
}

std::string CondTranslationReport::json() const {
    jdoc j = report_meta(cfg);
    j["layer"] = layer;
    auto& rows_j = j["rows"] = jdoc::array();
    for (const CondTranslationRow& r : rows)
        rows_j.push_back({{"lambda", r.lambda},
                          {"freq_lhs", r.freq_lhs},
                          {"freq_rhs", r.freq_rhs},
                          {"slack", r.slack},
                          {"ok", r.ok}});
    return j.dump(2);
}

IndependenceReport run_independence(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto keys = generate_keys(cfg);
    const Selector sel{cfg.select_bits, cfg.mask};
    const std::uint64_t id = experiment_id(ExperimentKind::independence);

    std::vector<std::uint8_t> fail_full(cfg.trials, 0), fail_prefix(cfg.trials, 0);
    parallel_trials(cfg.trials, effective_threads(cfg), [&](std::uint64_t r) {
        const TornadoHasher h(trial_seed(cfg.master_seed, id, r), cfg.hash);
        const SelectionResult selres = select(std::span<const Key>(keys), h, sel);
        fail_full[r] = !gf2::derived_independent(h, selres.selected, false).independent;
        fail_prefix[r] = !gf2::derived_independent(h, selres.selected, true).independent;
    });

    IndependenceReport rep;
    rep.cfg = cfg;
    for (std::uint64_t r = 0; r < cfg.trials; ++r) {
        rep.failures_full += fail_full[r];
        rep.failures_prefix += fail_prefix[r];
    }
    rep.ci_full = stats::wilson99(rep.failures_full, cfg.trials);
    rep.ci_prefix = stats::wilson99(rep.failures_prefix, cfg.trials);
    const double mu = static_cast<double>(Dyadic{cfg.n, cfg.select_bits}.value());
    const double sigma = static_cast<double>(cfg.hash.sigma());
    rep.bound_old = bounds::independence_failure_bound(mu, sigma, cfg.hash.d,
                                                       bounds::IndependenceVariant::old_bound)
                        .value;
    // empty key sets are never dependent; the new bound needs n > 0
    rep.bound_new = cfg.n == 0
                        ? 0.0
                        : bounds::independence_failure_bound(
                              mu, sigma, cfg.hash.d, bounds::IndependenceVariant::new_bound,
                              static_cast<double>(cfg.n), cfg.hash.c)
                              .value;
    return rep;
}

bool IndependenceReport::ok() const {
    const double bound = cfg.variant == "new" ? bound_new : bound_old;
    return ci_full.freq <= bound + 4.0 * ci_full.half_width;
}

std::string IndependenceReport::csv() const {
    std::string out = csv_prelude(cfg);
    out += "trials,failures_full,freq_full,wilson_high_full,failures_prefix,freq_prefix,"
           "wilson_high_prefix,bound_old,bound_new,ok\n";
    out += std::to_string(cfg.trials) + "," + std::to_string(failures_full) + "," +
           format_double(ci_full.freq) + "," + format_double(ci_full.high) + "," +
           std::to_string(failures_prefix) + "," + format_double(ci_prefix.freq) + "," +
           format_double(ci_prefix.high) + "," + format_double(bound_old) + "," +
           format_double(bound_new) + "," + (ok() ? "1" : "0") + "\n";
    return out;
}

std::string IndependenceReport::json() const {
    jdoc j = report_meta(cfg);
    j["failures_full"] = failures_full;
    j["failures_prefix"] = failures_prefix;
    j["freq_full"] = ci_full.freq;
    j["freq_prefix"] = ci_prefix.freq;
    j["wilson_high_full"] = ci_full.high;
    j["wilson_high_prefix"] = ci_prefix.high;
    j["bound_old"] = bound_old;
    j["bound_new"] = bound_new;
    j["ok"] = ok();
    return j.dump(2);
}

namespace {

SketchAccuracyRow accuracy_bottomk(const ExperimentConfig& cfg, std::uint64_t trials) {
    const std::uint64_t n = 10000, k = 256;
    const std::uint64_t id = experiment_id(ExperimentKind::sketch_accuracy);
    std::vector<Key> keys;
    keys.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) keys.push_back(Key{i});
    std::vector<double> est(trials, 0.0);
    parallel_trials(trials, effective_threads(cfg), [&](std::uint64_t r) {
        const TornadoHasher h(trial_seed(cfg.master_seed, id, r), cfg.hash);
        est[r] = sketch::bottomk_build(std::span<const Key>(keys), k, h).distinct_estimate();
    });
    stats::MeanVar mv;
    for (double e : est) mv.add(e);
    SketchAccuracyRow row;
    row.name = "bottomk_distinct";
    row.truth = static_cast<double>(n);
    row.mean = mv.mean;
    row.stddev = mv.stddev();
    row.trials = trials;
    // 4 * (n / sqrt(k)) / sqrt(trials): order-statistics error per trial.
    row.tol = 4.0 * (static_cast<double>(n) / std::sqrt(double(k))) / std::sqrt(double(trials));
    row.ok = std::abs(row.mean - row.truth) <= row.tol;
    return row;
}

SketchAccuracyRow accuracy_jaccard(const ExperimentConfig& cfg, std::uint64_t trials) {
    // |A ^ B| = 100, |A u B| = 300, true Jaccard 1/3. Keys use c-1 characters;
    // the hasher's extra character carries the replication index.
    const std::uint64_t k = 64;
    const double target_p = 0.01;
    const std::uint64_t id = experiment_id(ExperimentKind::sketch_accuracy) + 1;
    std::vector<Key> a, b;
    for (std::uint64_t i = 0; i < 200; ++i) a.push_back(Key{i});
    for (std::uint64_t i = 100; i < 300; ++i) b.push_back(Key{i});
    const std::uint32_t J = sketch::vectork_replication(200, k, target_p);
    std::vector<double> est(trials, 0.0);
    parallel_trials(trials, effective_threads(cfg), [&](std::uint64_t r) {
        const TornadoHasher h(trial_seed(cfg.master_seed, id, r), cfg.hash);
        const auto va = sketch::vectork_build(std::span<const Key>(a), k, target_p, h, J);
        const auto vb = sketch::vectork_build(std::span<const Key>(b), k, target_p, h, J);
        est[r] = sketch::jaccard_estimate(va, vb);
    });
    stats::MeanVar mv;
    for (double e : est) mv.add(e);
    SketchAccuracyRow row;
    row.name = "jaccard_vectork";
    row.truth = 1.0 / 3.0;
    row.mean = mv.mean;
    row.stddev = mv.stddev();
    row.trials = trials;
    row.tol = 4.0 * std::sqrt(row.truth * (1.0 - row.truth) / double(k)) / std::sqrt(double(trials));
    row.ok = std::abs(row.mean - row.truth) <= row.tol;
    return row;
}

SketchAccuracyRow accuracy_frequency(const ExperimentConfig& cfg, std::uint64_t trials) {
    // B = even keys, half of A; threshold sample with p = 1/8.
    const std::uint64_t n = 1ULL << 14;
    const std::uint64_t id = experiment_id(ExperimentKind::sketch_accuracy) + 2;
    std::vector<Key> keys;
    keys.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) keys.push_back(Key{i});
    std::vector<double> est(trials, 0.0);
    parallel_trials(trials, effective_threads(cfg), [&](std::uint64_t r) {
        const TornadoHasher h(trial_seed(cfg.master_seed, id, r), cfg.hash);
        const auto sample = sketch::threshold_sample(std::span<const Key>(keys), h, Dyadic{1, 3});
        est[r] = sketch::frequency_estimate(sample, [](Key k) { return (k.bits & 1) == 0; });
    });
    stats::MeanVar mv;
    for (double e : est) mv.add(e);
    SketchAccuracyRow row;
    row.name = "frequency_threshold";
    row.truth = 0.5;
    row.mean = mv.mean;
    row.stddev = mv.stddev();
    row.trials = trials;
    row.tol = 4.0 * mv.std_error();
    row.ok = std::abs(row.mean - row.truth) <= row.tol;
    return row;
}

} // namespace

SketchAccuracyReport run_sketch_accuracy(const ExperimentConfig& cfg) {
    cfg.validate();
    SketchAccuracyReport rep;
    rep.cfg = cfg;
    // trials == 0 selects the per-estimator reference counts.
    rep.rows.push_back(accuracy_bottomk(cfg, cfg.trials ? cfg.trials : 200));
    rep.rows.push_back(accuracy_jaccard(cfg, cfg.trials ? cfg.trials : 500));
    rep.rows.push_back(accuracy_frequency(cfg, cfg.trials ? cfg.trials : 200));
    return rep;
}

bool SketchAccuracyReport::ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const SketchAccuracyRow& r) { return r.ok; });
}

std::string SketchAccuracyReport::csv() const {
    std::string out = csv_prelude(cfg);
    out += "name,truth,mean,stddev,tol,trials,ok\n";
    for (const SketchAccuracyRow& r : rows)
        out += r.name + "," + format_double(r.truth) + "," + format_double(r.mean) + "," +
               format_double(r.stddev) + "," + format_double(r.tol) + "," +
               std::to_string(r.trials) + "," + (r.ok ? "1" : "0") + "\n";
    return out;
}

std::string SketchAccuracyReport::json() const {
    jdoc j = report_meta(cfg);
    auto& rows_j = j["rows"] = jdoc::array();
    for (const SketchAccuracyRow& r : rows)
        rows_j.push_back({{"name", r.name},
                          {"truth", r.truth},
                          {"mean", r.mean},
                          {"stddev", r.stddev},
                          {"tol", r.tol},
                          {"trials", r.trials},
                          {"ok", r.ok}});
    return j.dump(2);
}

CouplingReport run_coupling_count(const ExperimentConfig& cfg) {
    cfg.validate();
    const double P = cfg.coupling_p;
    const double s = static_cast<double>(cfg.hash.sigma());
    const double root = std::sqrt(std::log(1.0 / P) / s);
    const double nd = static_cast<double>(cfg.n);
    const std::uint64_t a_upper = static_cast<std::uint64_t>(std::ceil(nd * (1.0 + 8.0 * root)));
    const double lower_raw = std::floor(nd * (1.0 - 9.0 * root));
    const std::uint64_t a_lower = lower_raw > 0 ? static_cast<std::uint64_t>(lower_raw) : 0;
    const Selector sel{cfg.select_bits, cfg.mask};
    const std::uint64_t id = experiment_id(ExperimentKind::coupling_count);
    // Local uniformity of the full selection: b = d - 2 extra tables.
    const double lu_err =
        bounds::local_uniformity_error(s, static_cast<double>(cfg.hash.d) - 2.0).value;

    const auto make_keys = [&](std::uint64_t count) {
        ExperimentConfig kc = cfg;
        kc.n = count;
        return generate_keys(kc);
    };
    const auto keys_a = generate_keys(cfg);

    CouplingReport rep;
    rep.cfg = cfg;
    struct Dir {
        const char* name;
        std::uint64_t a_prime;
        double bound;
        bool upper;
    };
    for (const Dir dir : {Dir{"upper", a_upper, 2.0 * P + lu_err, true},
                          Dir{"lower", a_lower, 3.0 * P + lu_err, false}}) {
        const auto keys_prime = make_keys(dir.a_prime);
        std::vector<std::uint8_t> viol(cfg.trials, 0);
        parallel_trials(cfg.trials, effective_threads(cfg), [&](std::uint64_t r) {
            const TornadoHasher h(trial_seed(cfg.master_seed, id, r), cfg.hash);
            std::uint64_t x = 0;
            for (Key k : keys_a)
                if (sel.selects(h.hash(k), cfg.hash)) ++x;
            const RandomOracle o(trial_seed(cfg.master_seed, id + kOracleIdOffset, r), cfg.hash);
            std::uint64_t xp = 0;
            for (Key k : keys_prime)
                if (sel.selects(o.hash(k), cfg.hash)) ++xp;
            viol[r] = dir.upper ? (x > xp) : (x < xp);
        });
        CouplingRow row;
        row.direction = dir.name;
        row.a_prime = dir.a_prime;
        for (auto v : viol) row.violations += v;
        row.ci = stats::wilson99(row.violations, cfg.trials);
        row.prob_bound = dir.bound;
        row.ok = row.ci.freq <= row.prob_bound + 4.0 * row.ci.half_width;
        rep.rows.push_back(row);
    }
    return rep;
}

bool CouplingReport::ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const CouplingRow& r) { return r.ok; });
}

std::string CouplingReport::csv() const {
    std::string out = csv_prelude(cfg);
    out += "direction,a_prime,violations,freq,wilson_high,prob_bound,ok\n";
    for (const CouplingRow& r : rows)
        out += r.direction + "," + std::to_string(r.a_prime) + "," + std::to_string(r.violations) +
               "," + format_double(r.ci.freq) + "," + format_double(r.ci.high) + "," +
               format_double(r.prob_bound) + "," + (r.ok ? "1" : "0") + "\n";
    return out;
}

std::string CouplingReport::json() const {
    jdoc j = report_meta(cfg);
    auto& rows_j = j["rows"] = jdoc::array();
    for (const CouplingRow& r : rows)
        rows_j.push_back({{"direction", r.direction},
                          {"a_prime", r.a_prime},
                          {"violations", r.violations},
                          {"freq", r.ci.freq},
                          {"wilson_high", r.ci.high},
                          {"prob_bound", r.prob_bound},
                          {"ok", r.ok}});
    return j.dump(2);
}

} // namespace tornadohash::harness

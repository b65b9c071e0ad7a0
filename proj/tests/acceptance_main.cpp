// Acceptance suite: one checked criterion per entry, each printing a single
// PASS/FAIL line with the measured numbers. Run all with no arguments or one
// with --criterion N. Exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "tornadohash/bounds.hpp"
#include "tornadohash/gf2.hpp"
#include "tornadohash/harness.hpp"
#include "tornadohash/prng.hpp"
#include "tornadohash/selection.hpp"
#include "tornadohash/sketches.hpp"
#include "tornadohash/stats.hpp"

using namespace tornadohash;
namespace hn = tornadohash::harness;
namespace bd = tornadohash::bounds;
namespace sk = tornadohash::sketch;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Criterion = Outcome (*)();

// ---- 1: split identity at the 64-bit reference profile ------------------

Outcome criterion_split_identity() {
    const HashParams p{4, 3, 16, 64};
    const TornadoHasher h(20260810, p);
    SplitMix64 rng(1);
    std::uint64_t violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const Key k{rng.next()};
        const auto s = h.split(k);
        if (h.hash(k) != (s.hbar0 ^ h.top_table(6)[s.hbar1])) ++violations;
    }
    Outcome o;
    o.pass = violations == 0;
    o.detail = "violations=" + std::to_string(violations) + "/100000";
    return o;
}

// ---- 2: GF(2) rank test vs subset enumeration ---------------------------

Outcome criterion_gf2_oracle() {
    SplitMix64 rng(2);
    std::uint64_t disagreements = 0;
    for (int inst = 0; inst < 1000; ++inst) {
        const std::size_t k = 1 + rng.next_below(12);
        gf2::KeyFamily fam;
        const std::uint32_t positions = 2 + static_cast<std::uint32_t>(rng.next_below(3));
        const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.next_below(3));
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<std::uint32_t> chars(positions);
            for (auto& c : chars) c = static_cast<std::uint32_t>(rng.next_below(alphabet));
            fam.members.push_back(gf2::to_generalized(std::span<const std::uint32_t>(chars)));
        }
        const bool fast = gf2::is_linearly_independent(fam).independent;
        bool slow = true;
        for (std::uint64_t mask = 1; mask < (1ULL << k) && slow; ++mask) {
            gf2::KeyFamily sub;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (1ULL << i)) sub.members.push_back(fam.members[i]);
            if (gf2::is_zero_set(sub)) slow = false;
        }
        if (fast != slow) ++disagreements;
    }
    Outcome o;
    o.pass = disagreements == 0;
    o.detail = "disagreements=" + std::to_string(disagreements) + "/1000";
    return o;
}

// ---- 3: zero-tuple counting bound ----------------------------------------

Outcome criterion_zero_tuple_bound() {
    SplitMix64 rng(3);
    std::uint64_t violations = 0;
    for (int inst = 0; inst < 200; ++inst) {
        const std::uint32_t c = 1 + static_cast<std::uint32_t>(rng.next_below(3));
        const std::uint32_t alphabet = 4;
        std::uint64_t universe = 1;
        for (std::uint32_t j = 0; j < c; ++j) universe *= alphabet;
        const std::uint64_t n = 1 + rng.next_below(std::min<std::uint64_t>(8, universe));
        std::set<std::vector<std::uint32_t>> seen;
        std::vector<gf2::GeneralizedKey> S;
        while (S.size() < n && seen.size() < universe) {
            std::vector<std::uint32_t> chars(c);
            for (auto& ch : chars) ch = static_cast<std::uint32_t>(rng.next_below(alphabet));
            if (seen.insert(chars).second)
                S.push_back(gf2::to_generalized(std::span<const std::uint32_t>(chars)));
        }
        if (S.empty()) continue;
        const auto count = gf2::count_zero_ktuples(S, 4);
        const auto bound = gf2::zero_bound(S.size(), c, 4);
        if (boost::multiprecision::cpp_int(count) > bound) ++violations;
    }
    Outcome o;
    o.pass = violations == 0;
    o.detail = "violations=" + std::to_string(violations) + "/200";
    return o;
}

// ---- 4 & 5: tail domination at theorem scale -----------------------------

hn::ExperimentConfig theorem_scale_config(hn::ExperimentKind kind) {
    hn::ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.hash = HashParams{4, 4, 16, 64}; // s = 2^16, b = d - 3 = 1
    cfg.n = 1ULL << 15;
    cfg.select_bits = 0; // mu = n = 2^15 in [s/4, s/2]
    cfg.delta_grid = {0.02, 0.05, 0.1};
    cfg.trials = 10000;
    cfg.master_seed = 4;
    return cfg;
}

Outcome criterion_lower_tail() {
    const auto rep = hn::run_lower_tail(theorem_scale_config(hn::ExperimentKind::lower_tail));
    Outcome o;
    std::ostringstream ss;
    for (const auto& row : rep.rows) {
        const bool vs_bound = row.ci.freq <= row.bound_pretty1 + 4.0 * row.ci.half_width;
        const bool vs_oracle =
            row.ci.freq <=
            3.0 * row.oracle_ci.freq + 4.0 * (row.ci.half_width + 3.0 * row.oracle_ci.half_width);
        o.pass = o.pass && vs_bound && vs_oracle;
        ss << " d=" << row.delta << ":freq=" << row.ci.freq << "<=bound=" << row.bound_pretty1
           << (vs_bound && vs_oracle ? "" : " VIOLATED");
        if (row.delta == 0.05 && row.oracle_hits > 3) {
            o.pass = false;
            ss << " oracle_hits=" << row.oracle_hits << ">3";
        }
    }
    o.detail = ss.str();
    return o;
}

Outcome criterion_upper_tail() {
    const auto rep = hn::run_upper_tail(theorem_scale_config(hn::ExperimentKind::upper_tail));
    Outcome o;
    std::ostringstream ss;
    for (const auto& row : rep.rows) {
        const bool okrow = row.ci.freq <= row.bound_upper + 4.0 * row.ci.half_width;
        o.pass = o.pass && okrow;
        ss << " d=" << row.delta << ":freq=" << row.ci.freq << "<=bound=" << row.bound_upper
           << (okrow ? "" : " VIOLATED");
    }
    o.detail = ss.str();
    return o;
}

// ---- 6: layer means against mu_bar ---------------------------------------

Outcome criterion_layer_means() {
    hn::ExperimentConfig cfg;
    cfg.kind = hn::ExperimentKind::layers;
    cfg.hash = HashParams{2, 5, 8, 16}; // |Sigma| = 256, d = 5
    cfg.n = 256;
    cfg.select_bits = 1; // mu = 128 = |Sigma|/2
    cfg.trials = 10000;
    cfg.master_seed = 6;
    cfg.max_layer = 6;
    const auto rep = hn::run_layers(cfg);
    Outcome o;
    std::ostringstream ss;
    ss << "j_failures=" << rep.j_failures;
    for (const auto& row : rep.rows) {
        if (row.i > 6) break;
        const bool okrow = row.mean_si_j <= row.mu_bar + 4.0 * row.se;
        o.pass = o.pass && okrow;
        ss << " S" << row.i << "=" << row.mean_si_j << "<=" << row.mu_bar << "+4se"
           << (okrow ? "" : " VIOLATED");
    }
    o.detail = ss.str();
    return o;
}

// ---- 7: conditional translation inequality --------------------------------

Outcome criterion_cond_translation() {
    hn::ExperimentConfig cfg;
    cfg.kind = hn::ExperimentKind::cond_translation;
    cfg.hash = HashParams{2, 2, 3, 3}; // |Sigma| = 8, 3-bit range
    cfg.n = 16;
    cfg.select_bits = 1;
    cfg.trials = 1000;
    cfg.master_seed = 7;
    cfg.layer_index = 1;
    const auto rep = hn::run_cond_translation(cfg);
    Outcome o;
    std::ostringstream ss;
    for (const auto& row : rep.rows) {
        o.pass = o.pass && row.ok;
        if (!row.ok)
            ss << " lambda=" << row.lambda << ":" << row.freq_lhs << ">2*" << row.freq_rhs << "+"
               << row.slack;
    }
    ss << (o.pass ? " all lambda hold" : "");
    o.detail = "lambdas=" + std::to_string(rep.rows.size()) + ss.str();
    return o;
}

// ---- 8: independence failures vs the theorem bound ------------------------

Outcome criterion_independence() {
    hn::ExperimentConfig cfg;
    cfg.kind = hn::ExperimentKind::independence;
    cfg.hash = HashParams{2, 5, 8, 16}; // |Sigma| = 256, c = 2, d = 5
    cfg.n = 64;
    cfg.select_bits = 0; // mu = 64
    cfg.trials = 10000;
    cfg.master_seed = 8;
    const auto rep = hn::run_independence(cfg);
    const bool zero_failures = rep.failures_full == 0;
    const bool bound_dominates_ci = rep.bound_old > rep.ci_full.high;
    Outcome o;
    o.pass = zero_failures && bound_dominates_ci;
    std::ostringstream ss;
    ss << "failures=" << rep.failures_full << "/10000, bound=" << rep.bound_old
       << (bound_dominates_ci ? " > " : " <= ") << "wilson_high=" << rep.ci_full.high;
    if (!bound_dominates_ci) {
        // The comparison is deterministic at this trial count: with zero
        // observed failures the 99% Wilson upper limit is z^2/(N+z^2), so the
        // stated bound can only exceed it once N >~ z^2/bound trials.
        const double z2 = 2.5758293035489004 * 2.5758293035489004;
        ss << " (attainable only for trials >= "
           << static_cast<std::uint64_t>(z2 / rep.bound_old) << ")";
    }
    o.detail = ss.str();
    return o;
}

// ---- 9: exact sketch laws --------------------------------------------------

Outcome criterion_sketch_laws() {
    const HashParams p{4, 3, 16, 64};
    SplitMix64 rng(9);
    std::uint64_t violations = 0;
    for (int inst = 0; inst < 1000; ++inst) {
        const TornadoHasher h(500000 + inst, p);
        std::set<std::uint64_t> sa, sb;
        while (sa.size() < 60) sa.insert(rng.next());
        while (sb.size() < 60) sb.insert(rng.next());
        std::vector<Key> a, b, merged;
        std::set<std::uint64_t> all;
        for (auto v : sa) {
            a.push_back(Key{v});
            all.insert(v);
        }
        for (auto v : sb) {
            b.push_back(Key{v});
            all.insert(v);
        }
        for (auto v : all) merged.push_back(Key{v});

        const std::uint64_t k = 16;
        const auto ska = sk::bottomk_build(std::span<const Key>(a), k, h);
        const auto skb = sk::bottomk_build(std::span<const Key>(b), k, h);
        const auto skm = sk::bottomk_build(std::span<const Key>(merged), k, h);
        if (!(skm == sk::bottomk_union(ska, skb))) ++violations;

        // p > h_(k+1) <=> |S_p| > k for a spread of dyadic thresholds
        const std::uint64_t thr = *skm.threshold();
        for (std::uint32_t t : {2u, 6u, 11u, 17u}) {
            const Dyadic pr{1 + rng.next_below((1ULL << t) - 1), t};
            const auto sample = sk::threshold_sample(std::span<const Key>(merged), h, pr);
            const bool p_above = pr.scaled(64) > static_cast<unsigned __int128>(thr);
            if (p_above != (sample.size() > k)) ++violations;
        }
    }
    Outcome o;
    o.pass = violations == 0;
    o.detail = "violations=" + std::to_string(violations) + "/1000 instances";
    return o;
}

// ---- 10: estimator accuracy ------------------------------------------------

Outcome criterion_estimators() {
    hn::ExperimentConfig cfg;
    cfg.kind = hn::ExperimentKind::sketch_accuracy;
    cfg.hash = HashParams{4, 3, 16, 64};
    cfg.trials = 0; // per-estimator reference counts: 200 / 500 / 200
    cfg.master_seed = 10;
    const auto rep = hn::run_sketch_accuracy(cfg);
    Outcome o;
    std::ostringstream ss;
    for (const auto& row : rep.rows) {
        o.pass = o.pass && row.ok;
        ss << " " << row.name << ":|" << row.mean << "-" << row.truth << "|<=" << row.tol
           << (row.ok ? "" : " VIOLATED");
    }
    o.detail = ss.str();
    return o;
}

// ---- 11: double precision matches the >= 50-digit oracle -------------------

Outcome criterion_bounds_conformance() {
    SplitMix64 rng(11);
    std::uint64_t checked = 0, failures = 0;
    const auto close = [&](double a, double b) {
        ++checked;
        // below double's normal range the 1e-9 relative target is not
        // representable; require agreement that the value is sub-normal
        const bool subnormal = std::abs(a) < 2.3e-308 && std::abs(b) < 2.3e-308;
        const bool ok = subnormal || (b == 0.0 && a == 0.0) ||
                        (b != 0.0 && std::abs(a - b) <= 1e-9 * std::abs(b));
        if (!ok) ++failures;
    };
    for (int i = 0; i < 1000; ++i) {
        const double delta = 0.01 + 0.99 * rng.next_unit();
        const double mu = 4.0 + static_cast<double>(rng.next_below(60000));
        const double sigma = 2048.0 * static_cast<double>(1ULL << rng.next_below(6));
        const double b = 1.0 + static_cast<double>(rng.next_below(4));
        const double c = 2.0 + static_cast<double>(rng.next_below(4));
        const double d = 4.0 + static_cast<double>(rng.next_below(3));

        close(bd::classic_chernoff(delta, mu).raw, bd::hp::classic_chernoff(delta, mu).raw);
        close(bd::upper_tail_tornado(delta, mu).raw, bd::hp::upper_tail_tornado(delta, mu).raw);
        close(bd::local_uniformity_error(sigma, b).raw,
              bd::hp::local_uniformity_error(sigma, b).raw);
        const bd::TheoremInputs in{delta, mu, sigma, b, c};
        close(bd::pretty1_bound(in).raw, bd::hp::pretty1_bound(in).raw);
        close(bd::subsampling_bound(in).raw, bd::hp::subsampling_bound(in).raw);
        const double t = rng.next_unit() * 40.0;
        const double var = rng.next_unit() * 100.0;
        const double m = 1.0 + rng.next_unit() * 4.0;
        close(bd::bernstein_tail(t, var, m).raw, bd::hp::bernstein_tail(t, var, m).raw);
        const double f = 0.01 + 0.49 * rng.next_unit();
        const double layer = 1.0 + static_cast<double>(rng.next_below(8));
        close(bd::mu_bar(layer, f, sigma).value, bd::hp::mu_bar(layer, f, sigma).value);
        close(bd::layer_upper_tail(layer, delta, f, sigma).raw,
              bd::hp::layer_upper_tail(layer, delta, f, sigma).raw);
        const double x = std::exp(-1.0) * 1.01 + rng.next_unit() * 1000.0;
        close(bd::lambert_w_upper(x).value, bd::hp::lambert_w_upper(x).value);
        close(bd::p_error(c, d, sigma).raw, bd::hp::p_error(c, d, sigma).raw);
        const double mu_i = 1.0 + rng.next_unit() * sigma / 2.0;
        close(bd::independence_failure_bound(mu_i, sigma, d,
                                             bd::IndependenceVariant::old_bound)
                  .raw,
              bd::hp::independence_failure_bound(mu_i, sigma, d,
                                                 bd::IndependenceVariant::old_bound)
                  .raw);

        // symbol table: keep the inputs in the non-degenerate regime
        const double sp = std::pow(2.0, -1.0 - static_cast<double>(rng.next_below(24)));
        const double smu = sigma / 4.0 + rng.next_unit() * sigma / 4.0;
        const double sel = static_cast<double>(rng.next_below(10));
        const auto td = bd::symbol_table(sp, smu, sigma, c, d, sel);
        const auto th = bd::hp::symbol_table(sp, smu, sigma, c, d, sel);
        if (td.i_nr != th.i_nr) ++failures;
        close(td.p_reg, th.p_reg);
        close(td.i_max, th.i_max);
        close(td.n_top, th.n_top);
        close(td.p_top, th.p_top);
        close(td.eps3, th.eps3);
        close(td.delta_reg, th.delta_reg);
        close(td.delta_inr, th.delta_inr);
        close(td.delta_top, th.delta_top);
        close(td.delta_nonreg, th.delta_nonreg);
        close(td.gamma1, th.gamma1);
        close(td.gamma2, th.gamma2);
        const auto ud = bd::ugly_bound(sp, smu, sigma, c, d, sel);
        const auto uh = bd::hp::ugly_bound(sp, smu, sigma, c, d, sel);
        close(ud.deviation, uh.deviation);
        close(ud.probability, uh.probability);
    }
    Outcome o;
    o.pass = failures == 0;
    o.detail = "mismatches=" + std::to_string(failures) + "/" + std::to_string(checked) +
               " comparisons";
    return o;
}

// ---- 12: byte-identical reruns ---------------------------------------------

Outcome criterion_reproducibility() {
    namespace fs = std::filesystem;
    hn::ExperimentConfig cfg;
    cfg.kind = hn::ExperimentKind::lower_tail;
    cfg.hash = HashParams{2, 2, 8, 16};
    cfg.n = 512;
    cfg.select_bits = 1;
    cfg.delta_grid = {0.05, 0.1, 0.25};
    cfg.trials = 300;
    cfg.master_seed = 12;
    cfg.threads = 2;
    cfg.output = "acceptance_out/rep_a";

    const auto read_back = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    setenv("MASTER_SEED", "9999", 1);
    auto cfg_a = cfg;
    hn::apply_env_overrides(cfg_a);
    hn::run_experiment(cfg_a);
    const std::string a = read_back("acceptance_out/rep_a.csv");

    auto cfg_b = cfg;
    cfg_b.output = "acceptance_out/rep_b";
    cfg_b.threads = 1; // worker count must not matter
    hn::apply_env_overrides(cfg_b);
    hn::run_experiment(cfg_b);
    std::string b = read_back("acceptance_out/rep_b.csv");
    unsetenv("MASTER_SEED");

    // reports embed the config hash, which covers the output path; compare
    // data rows across configs and require byte equality on the re-run
    hn::run_experiment(cfg_a);
    const std::string a2 = read_back("acceptance_out/rep_a.csv");
    fs::remove_all("acceptance_out");

    Outcome o;
    const auto rows_of = [](const std::string& s) { return s.substr(s.find('\n') + 1); };
    o.pass = (a == a2) && !a.empty() && rows_of(a) == rows_of(b);
    o.detail = o.pass ? "re-run byte-identical, worker count irrelevant" : "re-run differs";
    return o;
}

struct Entry {
    int id;
    const char* name;
    Criterion fn;
};

const Entry kCriteria[] = {
    {1, "split identity (c=4, d=3, 16-bit chars, 1e5 keys)", criterion_split_identity},
    {2, "gf2 rank vs subset enumeration (1e3 families, k<=12)", criterion_gf2_oracle},
    {3, "zero 4-tuple count <= 3^c n^2 (200 instances)", criterion_zero_tuple_bound},
    {4, "lower-tail domination at s=2^16, mu=2^15, 1e4 trials", criterion_lower_tail},
    {5, "upper-tail domination, same setup", criterion_upper_tail},
    {6, "layer means <= mu_bar_i + 4se (|Sigma|=256, d=5, 1e4 trials)", criterion_layer_means},
    {7, "conditional translation inequality (|Sigma|=8, 1e3 seeds)", criterion_cond_translation},
    {8, "independence failures (|Sigma|=256, c=2, d=5, mu=64)", criterion_independence},
    {9, "bottom-k union identity + threshold consistency (1e3)", criterion_sketch_laws},
    {10, "estimator accuracy: bottom-k / jaccard / frequency", criterion_estimators},
    {11, "bounds: double vs >=50-digit oracle, rel 1e-9", criterion_bounds_conformance},
    {12, "reproducibility: byte-identical reruns", criterion_reproducibility},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

    int failures = 0;
    for (const auto& entry : kCriteria) {
        if (only != 0 && entry.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = entry.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL", entry.id,
                    entry.name, secs, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}

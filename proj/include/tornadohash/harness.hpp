#pragma once
// Monte Carlo experiment runner: measures empirical tail probabilities, layer
// statistics, independence-failure frequencies, estimator accuracy and the
// tornado-vs-oracle coupling, and writes CSV/JSON reports.
//
// Reproducibility contract: a run is a pure function of (config, master
// seed). Trial r of experiment E uses hasher seed trial_seed(master, E, r);
// aggregation happens in trial order regardless of the worker count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tornadohash/bounds.hpp"
#include "tornadohash/hashing.hpp"
#include "tornadohash/selection.hpp"
#include "tornadohash/stats.hpp"

namespace tornadohash::harness {

enum class ExperimentKind {
    lower_tail,
    upper_tail,
    layers,
    cond_translation,
    independence,
    sketch_accuracy,
    coupling_count,
};

// Stable per-experiment ids for seed derivation.
std::uint64_t experiment_id(ExperimentKind k);
std::string to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

enum class KeyGen { sequential, random, adversarial_prefix };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::lower_tail;
    HashParams hash;
    std::uint64_t n = 0;
    KeyGen keygen = KeyGen::sequential;
    std::uint32_t select_bits = 0;
    std::uint64_t mask = 0;
    std::vector<double> delta_grid;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    std::uint32_t threads = 0; // 0 = hardware concurrency
    std::string output;        // path stem for CSV/JSON; empty = no files

    // kind-specific
    double coupling_p = 0.01;          // coupling_count
    std::uint32_t layer_index = 1;     // cond_translation
    std::uint64_t max_layer = 8;       // layers: report at least up to here
    std::string layer_profiles_output; // layers: optional per-trial CSV
    std::string variant = "both";      // independence: old | new | both

    void validate() const; // throws ConfigError
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON round trip; unknown fields are rejected.
ExperimentConfig config_from_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);
std::string config_sha256(const ExperimentConfig& cfg);

// Applies MASTER_SEED / THREADS env overrides in place.
void apply_env_overrides(ExperimentConfig& cfg);

std::vector<Key> generate_keys(const ExperimentConfig& cfg);

// ---- reports ----------------------------------------------------------

struct TailRow {
    double delta = 0;
    std::uint64_t hits = 0;
    stats::Wilson ci;
    double bound_pretty1 = 0;
    double bound_classic = 0;
    double bound_upper = 0;
    std::uint64_t oracle_hits = 0;
    stats::Wilson oracle_ci;
    bool ok = true;
};

struct TailReport {
    ExperimentConfig cfg;
    long double mu = 0;
    bool in_theorem_regime = true;
    std::vector<TailRow> rows;
    bool ok() const;
    std::string csv() const;
    std::string json() const;
};

TailReport run_lower_tail(const ExperimentConfig& cfg);
TailReport run_upper_tail(const ExperimentConfig& cfg);

struct LayerRow {
    std::uint64_t i = 0;
    double mean_si_j = 0;  // empirical mean of S_i * [J]
    double se = 0;         // standard error of that mean
    double mu_bar = 0;
    std::vector<double> tail_freq;  // per delta: Pr[S_i > (1+delta) mu_bar ^ J]
    std::vector<double> tail_bound; // per delta: layer upper-tail bound
    bool ok = true;                 // mean_si_j <= mu_bar + 4 se
};

struct LayerReport {
    ExperimentConfig cfg;
    std::uint64_t j_failures = 0;
    std::vector<LayerRow> rows;
    bool ok() const;
    std::string csv() const;
    std::string json() const;
};

LayerReport run_layers(const ExperimentConfig& cfg);

struct CondTranslationRow {
    std::uint64_t lambda = 0;
    double freq_lhs = 0; // Pr[E[S_i | hbar] >= lambda + 1]
    double freq_rhs = 0; // Pr[S_i >= lambda]
    double slack = 0;    // 4 sigma of (lhs - 2 rhs)
    bool ok = true;      // lhs <= 2 rhs + slack
};

struct CondTranslationReport {
    ExperimentConfig cfg;
    std::uint32_t layer = 1;
    std::vector<CondTranslationRow> rows;
    bool ok() const;
    std::string csv() const;
    std::string json() const;
};

CondTranslationReport run_cond_translation(const ExperimentConfig& cfg);

struct IndependenceReport {
    ExperimentConfig cfg;
    std::uint64_t failures_full = 0;   // derived keys of length c+d dependent
    std::uint64_t failures_prefix = 0; // length c+d-1 prefixes dependent
    stats::Wilson ci_full;
    stats::Wilson ci_prefix;
    double bound_old = 0;
    double bound_new = 0;
    bool ok() const; // empirical full-failure frequency <= bound + CI slack
    std::string csv() const;
    std::string json() const;
};

IndependenceReport run_independence(const ExperimentConfig& cfg);

struct SketchAccuracyRow {
    std::string name;
    double truth = 0;
    double mean = 0;
    double stddev = 0;
    double tol = 0; // 4 standard errors (frozen analytic form where specified)
    std::uint64_t trials = 0;
    bool ok = true;
};

struct SketchAccuracyReport {
    ExperimentConfig cfg;
    std::vector<SketchAccuracyRow> rows;
    bool ok() const;
    std::string csv() const;
    std::string json() const;
};

SketchAccuracyReport run_sketch_accuracy(const ExperimentConfig& cfg);

struct CouplingRow {
    std::string direction; // "upper" or "lower"
    std::uint64_t a_prime = 0;
    std::uint64_t violations = 0;
    stats::Wilson ci;
    double prob_bound = 0; // 2P or 3P plus the local-uniformity error
    bool ok = true;
};

struct CouplingReport {
    ExperimentConfig cfg;
    std::vector<CouplingRow> rows;
    bool ok() const;
    std::string csv() const;
    std::string json() const;
};

CouplingReport run_coupling_count(const ExperimentConfig& cfg);

// Runs the configured experiment and writes <output>.csv / <output>.json when
// an output stem is set. Returns the process exit code contract:
// 0 = ran and all row acceptance checks passed, 1 = some check failed.
int run_experiment(const ExperimentConfig& cfg, std::string* csv_out = nullptr,
                   std::string* json_out = nullptr);

// Deterministic shortest-round-trip formatting used in all reports.
std::string format_double(double v);
std::string sha256_hex(std::string_view data);

} // namespace tornadohash::harness

#include "tornadohash/harness.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include <openssl/evp.h>
#include <json.hpp>

#include "tornadohash/prng.hpp"

namespace tornadohash::harness {

using nlohmann::json;

std::uint64_t experiment_id(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::lower_tail: return 1;
        case ExperimentKind::upper_tail: return 2;
        case ExperimentKind::layers: return 3;
        case ExperimentKind::cond_translation: return 4;
        case ExperimentKind::independence: return 5;
        case ExperimentKind::sketch_accuracy: return 6;
        case ExperimentKind::coupling_count: return 7;
    }
    return 0;
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::lower_tail: return "lower_tail";
        case ExperimentKind::upper_tail: return "upper_tail";
        case ExperimentKind::layers: return "layers";
        case ExperimentKind::cond_translation: return "cond_translation";
        case ExperimentKind::independence: return "independence";
        case ExperimentKind::sketch_accuracy: return "sketch_accuracy";
        case ExperimentKind::coupling_count: return "coupling_count";
    }
    return "?";
}

ExperimentKind experiment_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::lower_tail, ExperimentKind::upper_tail, ExperimentKind::layers,
                   ExperimentKind::cond_translation, ExperimentKind::independence,
                   ExperimentKind::sketch_accuracy, ExperimentKind::coupling_count})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown experiment kind: " + s);
}

void ExperimentConfig::validate() const {
    try {
        hash.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (kind != ExperimentKind::sketch_accuracy && trials < 1)
        throw ConfigError("trials must be >= 1");
    if (select_bits > hash.range_bits) throw ConfigError("select_bits exceeds range_bits");
    if (select_bits < 64 && mask >= (1ULL << select_bits) && select_bits > 0)
        throw ConfigError("mask does not fit in select_bits");
    if (select_bits == 0 && mask != 0) throw ConfigError("mask must be 0 when select_bits is 0");
    for (double d : delta_grid)
        if (!(d >= 0.0) || d > 1.0) throw ConfigError("delta grid values must lie in [0, 1]");
    if (hash.key_bits() < 64 && n > (1ULL << hash.key_bits()))
        throw ConfigError("n exceeds the key universe");
    if (kind == ExperimentKind::coupling_count && (!(coupling_p > 0.0) || !(coupling_p < 1.0)))
        throw ConfigError("coupling_p must be in (0, 1)");
    if (kind == ExperimentKind::cond_translation && layer_index < 1)
        throw ConfigError("layer_index must be >= 1");
    if ((kind == ExperimentKind::layers || kind == ExperimentKind::cond_translation ||
         kind == ExperimentKind::upper_tail || kind == ExperimentKind::independence) &&
        hash.d < 1)
        throw ConfigError("this experiment requires d >= 1");
}

namespace {

const std::unordered_set<std::string> kCommonFields = {
    "experiment", "hash", "n", "keyset", "select_bits", "mask",
    "delta_grid", "trials", "master_seed", "threads", "output"};

const std::unordered_set<std::string> kHashFields = {"c", "d", "char_bits", "range_bits"};

std::unordered_set<std::string> kind_fields(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::coupling_count: return {"coupling_p"};
        case ExperimentKind::cond_translation: return {"layer_index"};
        case ExperimentKind::layers: return {"max_layer", "layer_profiles_output"};
        case ExperimentKind::independence: return {"variant"};
        default: return {};
    }
}

KeyGen keygen_from_string(const std::string& s) {
    if (s == "sequential") return KeyGen::sequential;
    if (s == "random") return KeyGen::random;
    if (s == "adversarial-prefix") return KeyGen::adversarial_prefix;
    throw ConfigError("unknown keyset generator: " + s);
}

std::string keygen_to_string(KeyGen g) {
    switch (g) {
        case KeyGen::sequential: return "sequential";
        case KeyGen::random: return "random";
        case KeyGen::adversarial_prefix: return "adversarial-prefix";
    }
    return "?";
}

} // namespace

ExperimentConfig config_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig cfg;
    if (!j.contains("experiment")) throw ConfigError("config missing 'experiment'");
    cfg.kind = experiment_from_string(j.at("experiment").get<std::string>());

    const auto kind_extra = kind_fields(cfg.kind);
    for (const auto& [key, value] : j.items()) {
        if (!kCommonFields.contains(key) && !kind_extra.contains(key))
            throw ConfigError("unknown config field: " + key);
    }
    try {
        if (j.contains("hash")) {
            const json& h = j.at("hash");
            if (!h.is_object()) throw ConfigError("'hash' must be an object");
            for (const auto& [key, value] : h.items())
                if (!kHashFields.contains(key)) throw ConfigError("unknown hash field: " + key);
            cfg.hash.c = h.value("c", cfg.hash.c);
            cfg.hash.d = h.value("d", cfg.hash.d);
            cfg.hash.char_bits = h.value("char_bits", cfg.hash.char_bits);
            cfg.hash.range_bits = h.value("range_bits", cfg.hash.range_bits);
        }
        cfg.n = j.value("n", cfg.n);
        if (j.contains("keyset")) cfg.keygen = keygen_from_string(j.at("keyset").get<std::string>());
        cfg.select_bits = j.value("select_bits", cfg.select_bits);
        cfg.mask = j.value("mask", cfg.mask);
        if (j.contains("delta_grid")) cfg.delta_grid = j.at("delta_grid").get<std::vector<double>>();
        cfg.trials = j.value("trials", cfg.trials);
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        cfg.threads = j.value("threads", cfg.threads);
        cfg.output = j.value("output", cfg.output);
        cfg.coupling_p = j.value("coupling_p", cfg.coupling_p);
        cfg.layer_index = j.value("layer_index", cfg.layer_index);
        cfg.max_layer = j.value("max_layer", cfg.max_layer);
        cfg.layer_profiles_output = j.value("layer_profiles_output", cfg.layer_profiles_output);
        cfg.variant = j.value("variant", cfg.variant);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = to_string(cfg.kind);
    j["hash"] = {{"c", cfg.hash.c},
                 {"d", cfg.hash.d},
                 {"char_bits", cfg.hash.char_bits},
                 {"range_bits", cfg.hash.range_bits}};
    j["n"] = cfg.n;
    j["keyset"] = keygen_to_string(cfg.keygen);
    j["select_bits"] = cfg.select_bits;
    j["mask"] = cfg.mask;
    j["delta_grid"] = cfg.delta_grid;
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    j["output"] = cfg.output;
    const auto extra = kind_fields(cfg.kind);
    if (extra.contains("coupling_p")) j["coupling_p"] = cfg.coupling_p;
    if (extra.contains("layer_index")) j["layer_index"] = cfg.layer_index;
    if (extra.contains("max_layer")) j["max_layer"] = cfg.max_layer;
    if (extra.contains("layer_profiles_output"))
        j["layer_profiles_output"] = cfg.layer_profiles_output;
    if (extra.contains("variant")) j["variant"] = cfg.variant;
    return j.dump();
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

std::string config_sha256(const ExperimentConfig& cfg) { return sha256_hex(config_to_json(cfg)); }

void apply_env_overrides(ExperimentConfig& cfg) {
    if (const char* s = std::getenv("MASTER_SEED")) {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(s, s + std::strlen(s), v);
        if (ec != std::errc() || *p != '\0')
            throw ConfigError("MASTER_SEED must be an unsigned integer");
        cfg.master_seed = v;
    }
    if (const char* s = std::getenv("THREADS")) {
        std::uint32_t v = 0;
        auto [p, ec] = std::from_chars(s, s + std::strlen(s), v);
        if (ec != std::errc() || *p != '\0')
            throw ConfigError("THREADS must be an unsigned integer");
        cfg.threads = v;
    }
}

std::vector<Key> generate_keys(const ExperimentConfig& cfg) {
    constexpr std::uint64_t kKeysetStream = 100;
    std::vector<Key> keys;
    keys.reserve(cfg.n);
    switch (cfg.keygen) {
        case KeyGen::sequential:
            for (std::uint64_t i = 0; i < cfg.n; ++i) keys.push_back(Key{i});
            break;
        case KeyGen::random: {
            const std::uint32_t kb = cfg.hash.key_bits();
            const std::uint64_t kmask = kb >= 64 ? ~0ULL : (1ULL << kb) - 1;
            std::unordered_set<std::uint64_t> seen;
            std::uint64_t counter = 0;
            while (keys.size() < cfg.n) {
                const std::uint64_t v = stream_word(cfg.master_seed, kKeysetStream, counter++) & kmask;
                if (seen.insert(v).second) keys.push_back(Key{v});
                if (counter > 64 * cfg.n + 1024)
                    throw ConfigError("random keyset: universe too small for n distinct keys");
            }
            break;
        }
        case KeyGen::adversarial_prefix: {
            // Densely enumerate only the low characters needed to cover n and
            // share a fixed random prefix above them; for n <= sigma the keys
            // differ in a single character position.
            const std::uint32_t cb = cfg.hash.char_bits;
            std::uint32_t vary = 1;
            while (vary < cfg.hash.c && (vary * cb < 64 ? (1ULL << (vary * cb)) : ~0ULL) < cfg.n)
                ++vary;
            const std::uint32_t kb = cfg.hash.key_bits();
            std::uint64_t prefix = 0;
            if (vary < cfg.hash.c) {
                const std::uint32_t hi_bits = kb - vary * cb;
                prefix = (stream_word(cfg.master_seed, kKeysetStream, 0xADA) &
                          ((hi_bits >= 64 ? ~0ULL : (1ULL << hi_bits) - 1)))
                         << (vary * cb);
            }
            for (std::uint64_t i = 0; i < cfg.n; ++i) keys.push_back(Key{prefix | i});
            break;
        }
    }
    return keys;
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

int run_experiment(const ExperimentConfig& cfg, std::string* csv_out, std::string* json_out) {
    std::string csv, js;
    bool ok = true;
    switch (cfg.kind) {
        case ExperimentKind::lower_tail: {
            auto r = run_lower_tail(cfg);
            csv = r.csv();
            js = r.json();
            ok = r.ok();
            break;
        }
        case ExperimentKind::upper_tail: {
            auto r = run_upper_tail(cfg);
            csv = r.csv();
            js = r.json();
            ok = r.ok();
            break;
        }
        case ExperimentKind::layers: {
            auto r = run_layers(cfg);
            csv = r.csv();
            js = r.json();
            ok = r.ok();
            break;
        }
        case ExperimentKind::cond_translation: {
            auto r = run_cond_translation(cfg);
            csv = r.csv();
            js = r.json();
            ok = r.ok();
            break;
        }
        case ExperimentKind::independence: {
            auto r = run_independence(cfg);
            csv = r.csv();
            js = r.json();
            ok = r.ok();
            break;
        }
        case ExperimentKind::sketch_accuracy: {
            auto r = run_sketch_accuracy(cfg);
            csv = r.csv();
            js = r.json();
            ok = r.ok();
            break;
        }
        case ExperimentKind::coupling_count: {
            auto r = run_coupling_count(cfg);
            csv = r.csv();
            js = r.json();
            ok = r.ok();
            break;
        }
    }
    if (!cfg.output.empty()) {
        namespace fs = std::filesystem;
        const fs::path stem(cfg.output);
        if (stem.has_parent_path()) fs::create_directories(stem.parent_path());
        std::ofstream(cfg.output + ".csv", std::ios::binary) << csv;
        std::ofstream(cfg.output + ".json", std::ios::binary) << js;
    }
    if (csv_out) *csv_out = std::move(csv);
    if (json_out) *json_out = std::move(js);
    return ok ? 0 : 1;
}

} // namespace tornadohash::harness

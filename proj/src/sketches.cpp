#include "tornadohash/sketches.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace tornadohash::sketch {
namespace {

constexpr std::uint32_t kMagic = 0x5454534B; // "TTSK"
constexpr std::uint16_t kVersion = 1;
enum SketchType : std::uint16_t { kBottomK = 1, kKpm = 2, kVectorK = 3 };

struct Writer {
    std::vector<std::uint8_t> out;
    template <class T>
    void put(T v) {
        std::uint8_t buf[sizeof(T)];
        std::memcpy(buf, &v, sizeof(T));
        out.insert(out.end(), buf, buf + sizeof(T));
    }
};

struct Reader {
    std::span<const std::uint8_t> in;
    std::size_t pos = 0;
    template <class T>
    T get() {
        if (pos + sizeof(T) > in.size())
            throw std::invalid_argument("sketch deserialize: truncated input");
        T v;
        std::memcpy(&v, in.data() + pos, sizeof(T));
        pos += sizeof(T);
        return v;
    }
};

void write_header(Writer& w, std::uint16_t type, std::uint64_t k, std::uint32_t range_bits,
                  std::uint64_t fingerprint) {
    w.put(kMagic);
    w.put(kVersion);
    w.put(type);
    w.put(k);
    w.put(range_bits);
    w.put(fingerprint);
}

void read_header(Reader& r, std::uint16_t expect_type, std::uint64_t& k, std::uint32_t& range_bits,
                 std::uint64_t& fingerprint) {
    if (r.get<std::uint32_t>() != kMagic)
        throw std::invalid_argument("sketch deserialize: bad magic");
    if (r.get<std::uint16_t>() != kVersion)
        throw std::invalid_argument("sketch deserialize: unsupported version");
    if (r.get<std::uint16_t>() != expect_type)
        throw std::invalid_argument("sketch deserialize: wrong sketch type");
    k = r.get<std::uint64_t>();
    range_bits = r.get<std::uint32_t>();
    fingerprint = r.get<std::uint64_t>();
}

std::uint32_t checked_log2(std::uint64_t k, const char* what) {
    if (k == 0 || (k & (k - 1)) != 0)
        throw std::invalid_argument(std::string(what) + ": k must be a power of two");
    return static_cast<std::uint32_t>(std::countr_zero(k));
}

double hll_alpha(std::uint64_t k) {
    if (k <= 16) return 0.673;
    if (k <= 32) return 0.697;
    if (k <= 64) return 0.709;
    return 0.7213 / (1.0 + 1.079 / static_cast<double>(k));
}

} // namespace

BottomKSketch::BottomKSketch(std::uint64_t k, std::uint32_t range_bits, std::uint64_t fingerprint)
    : k_(k), range_bits_(range_bits), fingerprint_(fingerprint) {
    if (k_ < 1) throw std::invalid_argument("BottomKSketch: k must be >= 1");
    store_.reserve(k_ + 1);
}

void BottomKSketch::insert(std::uint64_t hash, Key key) {
    const Entry e{hash, key.bits};
    auto it = std::lower_bound(store_.begin(), store_.end(), e);
    if (it != store_.end() && *it == e) return; // repeated key
    if (store_.size() > k_ && e > store_.back()) return;
    store_.insert(it, e);
    if (store_.size() > k_ + 1) store_.pop_back();
}

std::span<const BottomKSketch::Entry> BottomKSketch::entries() const {
    return {store_.data(), std::min<std::size_t>(store_.size(), k_)};
}

std::optional<std::uint64_t> BottomKSketch::threshold() const {
    if (store_.size() > k_) return store_[k_].hash;
    return std::nullopt;
}

double BottomKSketch::distinct_estimate() const {
    if (store_.size() <= k_) return static_cast<double>(store_.size());
    const std::uint64_t t = store_[k_].hash;
    if (t == 0) return std::numeric_limits<double>::infinity();
    const double range = std::ldexp(1.0, static_cast<int>(range_bits_));
    return static_cast<double>(k_) * range / static_cast<double>(t);
}

BottomKSketch bottomk_union(const BottomKSketch& a, const BottomKSketch& b) {
    if (a.k_ != b.k_ || a.range_bits_ != b.range_bits_ || a.fingerprint_ != b.fingerprint_)
        throw std::invalid_argument("bottomk_union: mismatched sketch parameters");
    BottomKSketch out(a.k_, a.range_bits_, a.fingerprint_);
    std::merge(a.store_.begin(), a.store_.end(), b.store_.begin(), b.store_.end(),
               std::back_inserter(out.store_));
    out.store_.erase(std::unique(out.store_.begin(), out.store_.end()), out.store_.end());
    if (out.store_.size() > a.k_ + 1) out.store_.resize(a.k_ + 1);
    return out;
}

std::vector<std::uint8_t> BottomKSketch::serialize() const {
    Writer w;
    write_header(w, kBottomK, k_, range_bits_, fingerprint_);
    w.put(static_cast<std::uint64_t>(store_.size()));
    for (const Entry& e : store_) {
        w.put(e.hash);
        w.put(e.key_bits);
    }
    return std::move(w.out);
}

BottomKSketch BottomKSketch::deserialize(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    std::uint64_t k, fp;
    std::uint32_t rb;
    read_header(r, kBottomK, k, rb, fp);
    BottomKSketch s(k, rb, fp);
    const std::uint64_t n = r.get<std::uint64_t>();
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t h = r.get<std::uint64_t>();
        const std::uint64_t kb = r.get<std::uint64_t>();
        s.store_.push_back({h, kb});
    }
    if (!std::is_sorted(s.store_.begin(), s.store_.end()) || s.store_.size() > k + 1)
        throw std::invalid_argument("bottomk deserialize: malformed entry list");
    return s;
}

KPartitionMinSketch::KPartitionMinSketch(std::uint64_t k, std::uint32_t range_bits,
                                         std::uint64_t fingerprint)
    : k_(k), log2k_(checked_log2(k, "KPartitionMinSketch")), range_bits_(range_bits),
      fingerprint_(fingerprint), regs_(k, -1) {
    if (log2k_ >= range_bits_)
        throw std::invalid_argument("KPartitionMinSketch: k leaves no local hash bits");
}

void KPartitionMinSketch::insert(std::uint64_t hash) {
    const std::uint32_t local_bits = range_bits_ - log2k_;
    const std::uint64_t bucket = log2k_ ? hash >> local_bits : 0;
    const std::uint64_t local = hash & ((local_bits >= 64) ? ~0ULL : (1ULL << local_bits) - 1);
    const std::int8_t lz = static_cast<std::int8_t>(
        local == 0 ? local_bits : local_bits - std::bit_width(local));
    regs_[bucket] = std::max(regs_[bucket], lz);
}

double KPartitionMinSketch::estimate() const {
    const double kd = static_cast<double>(k_);
    std::uint64_t empty = 0;
    double denom = 0;
    for (std::int8_t r : regs_) {
        const int rank = r < 0 ? 0 : r + 1; // leading zeros + 1, 0 when empty
        denom += std::ldexp(1.0, -rank);
        if (r < 0) ++empty;
    }
    // Linear counting for small cardinalities, raw harmonic mean otherwise.
    // The branch is gated on the linear-counting value itself (monotone in
    // the registers) and the raw estimate is clamped from below at the gate,
    // which keeps the estimator monotone across the switch.
    const double gate = 2.5 * kd;
    if (empty > 0) {
        const double lc = kd * std::log(kd / static_cast<double>(empty));
        if (lc <= gate) return lc;
    }
    const double raw = hll_alpha(k_) * kd * kd / denom;
    return std::max(raw, gate);
}

KPartitionMinSketch kpm_union(const KPartitionMinSketch& a, const KPartitionMinSketch& b) {
    if (a.k_ != b.k_ || a.range_bits_ != b.range_bits_ || a.fingerprint_ != b.fingerprint_)
        throw std::invalid_argument("kpm_union: mismatched sketch parameters");
    KPartitionMinSketch out = a;
    for (std::size_t i = 0; i < out.regs_.size(); ++i)
        out.regs_[i] = std::max(out.regs_[i], b.regs_[i]);
    return out;
}

std::vector<std::uint8_t> KPartitionMinSketch::serialize() const {
    Writer w;
    write_header(w, kKpm, k_, range_bits_, fingerprint_);
    for (std::int8_t r : regs_) w.put(r);
    return std::move(w.out);
}

KPartitionMinSketch KPartitionMinSketch::deserialize(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    std::uint64_t k, fp;
    std::uint32_t rb;
    read_header(r, kKpm, k, rb, fp);
    KPartitionMinSketch s(k, rb, fp);
    for (std::uint64_t i = 0; i < k; ++i) s.regs_[i] = r.get<std::int8_t>();
    return s;
}

VectorKSample::VectorKSample(std::uint64_t k, std::uint32_t j_rep, std::uint32_t range_bits,
                             std::uint64_t fingerprint)
    : k_(k), log2k_(checked_log2(k, "VectorKSample")), j_rep_(j_rep), range_bits_(range_bits),
      fingerprint_(fingerprint), slots_(k) {
    if (log2k_ >= range_bits_)
        throw std::invalid_argument("VectorKSample: k leaves no local hash bits");
    if (j_rep_ < 1) throw std::invalid_argument("VectorKSample: replication must be >= 1");
}

void VectorKSample::insert(std::uint64_t hash, std::uint64_t indexed_key_bits) {
    const std::uint32_t local_bits = range_bits_ - log2k_;
    const std::uint64_t bucket = log2k_ ? hash >> local_bits : 0;
    const std::uint64_t local = hash & ((local_bits >= 64) ? ~0ULL : (1ULL << local_bits) - 1);
    Slot& s = slots_[bucket];
    if (!s.occupied || std::pair(local, indexed_key_bits) < std::pair(s.local_hash, s.indexed_key))
        s = Slot{local, indexed_key_bits, true};
}

std::vector<std::uint64_t> VectorKSample::holes() const {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < slots_.size(); ++i)
        if (!slots_[i].occupied) out.push_back(i);
    return out;
}

std::uint32_t vectork_replication(std::uint64_t n, std::uint64_t k, double target_error_p) {
    if (n == 0) return 1;
    if (!(target_error_p > 0.0) || !(target_error_p < 1.0))
        throw std::invalid_argument("vectork_replication: target_error_p must be in (0, 1)");
    const double need = static_cast<double>(k) * std::log(static_cast<double>(k) / target_error_p);
    const double j = std::ceil(need / static_cast<double>(n));
    return static_cast<std::uint32_t>(std::max(1.0, j));
}

VectorKSample vectork_union(const VectorKSample& a, const VectorKSample& b) {
    if (a.k_ != b.k_ || a.range_bits_ != b.range_bits_ || a.fingerprint_ != b.fingerprint_ ||
        a.j_rep_ != b.j_rep_)
        throw std::invalid_argument("vectork_union: mismatched sketch parameters");
    VectorKSample out = a;
    // Coordinatewise min by (local hash, indexed key); holes lose to anything.
    for (std::size_t i = 0; i < out.slots_.size(); ++i) {
        const VectorKSample::Slot& x = a.slots_[i];
        const VectorKSample::Slot& y = b.slots_[i];
        if (!x.occupied)
            out.slots_[i] = y;
        else if (!y.occupied)
            out.slots_[i] = x;
        else
            out.slots_[i] = std::pair(x.local_hash, x.indexed_key) <=
                                    std::pair(y.local_hash, y.indexed_key)
                                ? x
                                : y;
    }
    return out;
}

std::vector<std::uint8_t> VectorKSample::serialize() const {
    Writer w;
    write_header(w, kVectorK, k_, range_bits_, fingerprint_);
    w.put(j_rep_);
    for (const Slot& s : slots_) {
        w.put(static_cast<std::uint8_t>(s.occupied ? 1 : 0));
        if (s.occupied) {
            w.put(s.local_hash);
            w.put(s.indexed_key);
        }
    }
    return std::move(w.out);
}

VectorKSample VectorKSample::deserialize(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    std::uint64_t k, fp;
    std::uint32_t rb;
    read_header(r, kVectorK, k, rb, fp);
    const std::uint32_t j = r.get<std::uint32_t>();
    VectorKSample s(k, j, rb, fp);
    for (std::uint64_t i = 0; i < k; ++i) {
        if (r.get<std::uint8_t>()) {
            const std::uint64_t local = r.get<std::uint64_t>();
            const std::uint64_t ikey = r.get<std::uint64_t>();
            s.slots_[i] = Slot{local, ikey, true};
        }
    }
    return s;
}

std::string BottomKSketch::debug_json() const {
    nlohmann::json j{{"type", "bottomk"}, {"k", k_}, {"range_bits", range_bits_},
                     {"fingerprint", fingerprint_}, {"threshold_known", threshold_known()}};
    auto& e = j["entries"] = nlohmann::json::array();
    for (const Entry& s : store_) e.push_back({{"hash", s.hash}, {"key", s.key_bits}});
    return j.dump();
}

std::string KPartitionMinSketch::debug_json() const {
    nlohmann::json j{{"type", "kpm"}, {"k", k_}, {"range_bits", range_bits_},
                     {"fingerprint", fingerprint_}};
    j["registers"] = regs_;
    return j.dump();
}

std::string VectorKSample::debug_json() const {
    nlohmann::json j{{"type", "vectork"}, {"k", k_}, {"j", j_rep_}, {"range_bits", range_bits_},
                     {"fingerprint", fingerprint_}};
    auto& s = j["slots"] = nlohmann::json::array();
    for (const Slot& x : slots_) {
        if (x.occupied)
            s.push_back({{"local", x.local_hash}, {"key", x.indexed_key}});
        else
            s.push_back(nullptr);
    }
    return j.dump();
}

double jaccard_estimate(const VectorKSample& a, const VectorKSample& b) {
    if (a.k() != b.k() || a.fingerprint() != b.fingerprint() || a.j_rep() != b.j_rep())
        throw std::invalid_argument("jaccard_estimate: mismatched sketch parameters");
    std::uint64_t comparable = 0, matches = 0;
    for (std::size_t i = 0; i < a.slots().size(); ++i) {
        const auto& x = a.slots()[i];
        const auto& y = b.slots()[i];
        if (!x.occupied || !y.occupied) continue;
        ++comparable;
        if (x.indexed_key == y.indexed_key) ++matches;
    }
    if (comparable == 0) return 0.0;
    return static_cast<double>(matches) / static_cast<double>(comparable);
}

double SignedProjection::value(std::size_t i) const {
    return static_cast<double>(signs[i]) / std::sqrt(static_cast<double>(k));
}

SignedProjection signed_projection(const VectorKSample& v) {
    SignedProjection p;
    p.k = v.k();
    p.signs.reserve(v.k());
    for (const auto& s : v.slots()) {
        if (!s.occupied)
            throw std::invalid_argument("signed_projection: sample has holes");
        p.signs.push_back((s.local_hash & 1) ? std::int8_t{1} : std::int8_t{-1});
    }
    return p;
}

double dot(const SignedProjection& a, const SignedProjection& b) {
    if (a.k != b.k) throw std::invalid_argument("dot: mismatched projections");
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < a.signs.size(); ++i)
        sum += static_cast<std::int64_t>(a.signs[i]) * b.signs[i];
    return static_cast<double>(sum) / static_cast<double>(a.k);
}

double frequency_estimate(std::span<const Key> sample, const std::function<bool(Key)>& pred) {
    if (sample.empty()) throw std::invalid_argument("frequency_estimate: empty sample");
    std::uint64_t hits = 0;
    for (Key k : sample)
        if (pred(k)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(sample.size());
}

} // namespace tornadohash::sketch

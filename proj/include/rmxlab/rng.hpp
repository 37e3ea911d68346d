#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rmxlab {

/// Deterministic random stream keyed by a seed and a labeled path such as
/// {ensemble, realization, layer}. The same key always yields the same
/// sequence, so parallel tasks that each own a derived stream produce
/// schedule-independent results. Streams are not thread-safe; never share one.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::vector<std::uint64_t> path)
        : seed_(seed), path_(std::move(path)), engine_(make_engine(seed_, path_)) {}

    std::uint64_t seed() const { return seed_; }
    const std::vector<std::uint64_t>& path() const { return path_; }

    /// Child stream whose path extends this one's.
    RngStream derive(std::uint64_t label) const {
        auto p = path_;
        p.push_back(label);
        return RngStream(seed_, std::move(p));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform on (0, 1]; safe under log and fractional powers.
    double uniform_open_low() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    /// Poisson variate by inversion on exponential gaps (mean <= a few thousand).
    std::uint64_t poisson(double mean) {
        std::uint64_t k = 0;
        double acc = 0.0;
        for (;;) {
            acc += -std::log(uniform_open_low());
            if (acc > mean) return k;
            ++k;
        }
    }

private:
    static std::mt19937_64 make_engine(std::uint64_t seed, const std::vector<std::uint64_t>& path) {
        std::vector<std::uint32_t> words;
        words.reserve(2 * path.size() + 3);
        words.push_back(static_cast<std::uint32_t>(seed));
        words.push_back(static_cast<std::uint32_t>(seed >> 32));
        words.push_back(static_cast<std::uint32_t>(path.size()));
        for (auto v : path) {
            words.push_back(static_cast<std::uint32_t>(v));
            words.push_back(static_cast<std::uint32_t>(v >> 32));
        }
        std::seed_seq seq(words.begin(), words.end());
        return std::mt19937_64(seq);
    }

    std::uint64_t seed_;
    std::vector<std::uint64_t> path_;
    std::mt19937_64 engine_;
};

inline RngStream derive_stream(std::uint64_t seed, std::vector<std::uint64_t> path) {
    return RngStream(seed, std::move(path));
}

/// Stable 64-bit label for a string path component (FNV-1a).
constexpr std::uint64_t label(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace rmxlab

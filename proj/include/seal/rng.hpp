#pragma once

#include <cstdint>
#include <string_view>

namespace seal {

/// Counter-based random stream. Draw i is a pure function of (seed, i), and
/// named substreams re-key the seed, so adding a new consumer of randomness
/// never perturbs existing ones.
class RngStream {
public:
    static constexpr std::string_view kAlgorithm = "splitmix64";

    RngStream() = default;
    explicit RngStream(uint64_t seed) : seed_(seed) {}

    uint64_t seed() const { return seed_; }
    uint64_t counter() const { return counter_; }

    /// Independent stream keyed by (seed, label). Does not consume draws.
    RngStream substream(std::string_view label) const;
    /// Indexed variant for families of streams ("curve-0", "curve-1", ...).
    RngStream substream(std::string_view label, uint64_t index) const;

    uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    /// Unbiased index in [0, n). n must be > 0.
    size_t uniform_index(size_t n);

private:
    uint64_t seed_ = 0;
    uint64_t counter_ = 0;
};

/// Splitmix64 finalizer; also used to derive seeds from tuples of ids.
uint64_t mix64(uint64_t z);
uint64_t hash_combine(uint64_t a, uint64_t b);

}  // namespace seal

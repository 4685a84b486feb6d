#include "seal/rng.hpp"

#include <cassert>

namespace seal {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}
}  // namespace

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t hash_combine(uint64_t a, uint64_t b) {
    return mix64(a ^ (b + kGolden + (a << 6) + (a >> 2)));
}

RngStream RngStream::substream(std::string_view label) const {
    return RngStream(hash_combine(seed_, fnv1a(label)));
}

RngStream RngStream::substream(std::string_view label, uint64_t index) const {
    return RngStream(hash_combine(hash_combine(seed_, fnv1a(label)), mix64(index + 1)));
}

uint64_t RngStream::next_u64() {
    ++counter_;
    return mix64(seed_ + counter_ * kGolden);
}

double RngStream::uniform() {
    // 53 mantissa bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

size_t RngStream::uniform_index(size_t n) {
    assert(n > 0);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t r;
    do {
        r = next_u64();
    } while (r >= limit);
    return static_cast<size_t>(r % n);
}

}  // namespace seal

#include "fdboot/rng.hpp"

#include <cmath>

namespace fdboot {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

__extension__ using uint128 = unsigned __int128;

}  // namespace

std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
    std::uint64_t state = 0x6A09E667F3BCC908ULL;
    std::uint64_t h = splitmix64(state);
    for (const std::uint64_t w : words) {
        state ^= w;
        h = rotl(h, 23) ^ splitmix64(state);
    }
    return h;
}

std::uint64_t stream_id(StreamRole role, std::uint64_t replication, std::uint64_t b,
                        std::uint64_t eta) {
    return hash_words({static_cast<std::uint64_t>(role), replication, b, eta});
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), id_(stream_id) {
    std::uint64_t sm = hash_words({seed, stream_id});
    for (auto& word : state_) word = splitmix64(sm);
}

RngStream RngStream::derive(StreamRole role) const {
    return RngStream(seed_, hash_words({id_, static_cast<std::uint64_t>(role)}));
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::uniform_index(std::size_t bound) {
    const auto range = static_cast<std::uint64_t>(bound);
    uint128 product = static_cast<uint128>(next_u64()) * range;
    auto low = static_cast<std::uint64_t>(product);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            product = static_cast<uint128>(next_u64()) * range;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::size_t>(product >> 64);
}

double RngStream::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

}  // namespace fdboot

// Reproducible random streams.
//
// A stream is identified by (seed, stream id). Stream ids are derived by
// hashing a role tag with replication and bootstrap indices, so every
// resample owns an independent stream and results do not depend on the order
// or thread in which work is scheduled. The generator is xoshiro256** seeded
// through SplitMix64; uniform integers use Lemire's nearly-divisionless
// rejection method and normals use the Marsaglia polar method, so draws are
// identical on every IEEE-754 platform.

#ifndef FDBOOT_RNG_HPP
#define FDBOOT_RNG_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace fdboot {

enum class StreamRole : std::uint64_t {
    Simulation = 1,
    LevelOne = 2,
    LevelTwo = 3,
    SmoothingNoise = 4,
};

/// Order-sensitive 64-bit hash of the given words.
std::uint64_t hash_words(std::initializer_list<std::uint64_t> words);

std::uint64_t stream_id(StreamRole role, std::uint64_t replication, std::uint64_t b = 0,
                        std::uint64_t eta = 0);

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t id() const noexcept { return id_; }

    /// Independent stream for a sub-task, a pure function of (seed, id, role).
    RngStream derive(StreamRole role) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform on {0, ..., bound - 1}; bound must be positive.
    std::size_t uniform_index(std::size_t bound);
    double standard_normal();

private:
    std::uint64_t seed_;
    std::uint64_t id_;
    std::array<std::uint64_t, 4> state_{};
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fdboot

#endif  // FDBOOT_RNG_HPP

#pragma once

#include <cstdint>
#include <string_view>

namespace nis {

// Deterministic, platform-independent PRNG (splitmix64).
//
// Recurrence, for 64-bit state s:
//   s += 0x9E3779B97F4A7C15
//   z  = s
//   z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
//   z ^= z >> 27;  z *= 0x94D049BB133111EB
//   z ^= z >> 31
//   output z
//
// All arithmetic is mod 2^64. Same seed => same sequence on every platform;
// the trace determinism guarantee rests on this plus ordered event execution.
class Rng {
public:
    Rng() = default;
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform over [0, 2^48): candidate IDs / forged addresses
    std::uint64_t next_u48() { return next_u64() & 0xFFFF'FFFF'FFFFull; }

private:
    std::uint64_t state_ = 0;
};

// FNV-1a 64-bit self
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

// Per-entity stream: the scenario seed mixed with a hash of the entity name.
// Each entity draws only from its own stream, so adding or removing one
// entity (e.g. the attacker) never shifts another entity's draws.
inline Rng entity_stream(std::uint64_t seed, std::string_view entity) {
    Rng mixer(seed ^ fnv1a64(entity));
    return Rng(mixer.next_u64());
}

// registration backoff: uniform over [0, 65535] (mask of a 2^16-aligned draw)
inline std::uint32_t draw_backoff(Rng& rng) {
    return static_cast<std::uint32_t>(rng.next_u64() & 0xFFFFull);
}

} // namespace nis

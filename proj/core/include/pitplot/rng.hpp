#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace pitplot {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
/// A pure function of (counter, key); any draw can be produced independently,
/// so parallel and sequential consumers see identical numbers.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) noexcept;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Independent random stream addressed by (iteration, draw index).
class RandomSubstream {
public:
    explicit RandomSubstream(std::uint64_t key) noexcept : key_(key) {}

    /// Substream for a labelled entity (e.g. a project id) under `seed`.
    static RandomSubstream derive(std::uint64_t seed, std::string_view label) noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform(std::uint64_t iteration, std::uint32_t draw) const noexcept;

    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
};

} // namespace pitplot

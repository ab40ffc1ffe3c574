#pragma once

#include <array>
#include <cstdint>

namespace arcov {

/// Philox4x64 counter-based generator, 10 rounds (Random123 constants,
/// bit-compatible with numpy.random.Philox). Stateless apart from the
/// counter: block i of stream s under seed k is a pure function of
/// (k, s, i), which gives reproducible, non-overlapping substreams.
class Philox4x64 {
public:
    using Block = std::array<std::uint64_t, 4>;

    Philox4x64(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

    /// Four 64-bit words for the given block index.
    Block operator()(std::uint64_t block_index) const;

private:
    std::array<std::uint64_t, 2> key_;
};

/// Stream of standard-normal deviates: Box-Muller over Philox uniforms.
/// One block yields four normals; draws are sequential and deterministic
/// for a given (seed, stream) pair.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream)
        : gen_(seed, stream) {}

    double next();

private:
    Philox4x64 gen_;
    std::uint64_t block_ = 0;
    std::array<double, 4> buf_{};
    int avail_ = 0;

    void refill();
};

} // namespace arcov

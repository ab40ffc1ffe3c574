#include "arcov/rng.hpp"

#include <cmath>

namespace arcov {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo)
{
    const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(prod >> 64);
    lo = static_cast<std::uint64_t>(prod);
}

// Uniform in (0, 1]: top 53 bits, shifted away from zero for log().
inline double to_unit_open(std::uint64_t x)
{
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

} // namespace

Philox4x64::Block Philox4x64::operator()(std::uint64_t block_index) const
{
    Block ctr{block_index, 0, 0, 0};
    std::uint64_t k0 = key_[0];
    std::uint64_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMult0, ctr[0], hi0, lo0);
        mulhilo(kMult1, ctr[2], hi1, lo1);
        ctr = Block{hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

void NormalStream::refill()
{
    const Philox4x64::Block words = gen_(block_++);
    for (int pair = 0; pair < 2; ++pair) {
        const double u1 = to_unit_open(words[static_cast<std::size_t>(2 * pair)]);
        const double u2 = to_unit_open(words[static_cast<std::size_t>(2 * pair + 1)]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        buf_[static_cast<std::size_t>(2 * pair)] = r * std::cos(2.0 * M_PI * u2);
        buf_[static_cast<std::size_t>(2 * pair + 1)] = r * std::sin(2.0 * M_PI * u2);
    }
    avail_ = 4;
}

double NormalStream::next()
{
    if (avail_ == 0)
        refill();
    return buf_[static_cast<std::size_t>(4 - avail_--)];
}

} // namespace arcov

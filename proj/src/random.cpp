#include "wurn/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wurn {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo)
{
    std::uint64_t const product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

void RandomStream::refill()
{
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_),
                          static_cast<std::uint32_t>(block_ >> 32), 0u, 0u},
                         {static_cast<std::uint32_t>(key_),
                          static_cast<std::uint32_t>(key_ >> 32)});
    ++block_;
    used_ = 0;
}

std::uint32_t RandomStream::next_u32()
{
    if (used_ == 4)
        refill();
    return buffer_[used_++];
}

std::uint64_t RandomStream::next_u64()
{
    std::uint64_t const hi = next_u32();
    return (hi << 32) | next_u32();
}

double RandomStream::normal()
{
    double const radius = std::sqrt(-2.0 * std::log(uniform_pos()));
    return radius * std::cos(2.0 * std::numbers::pi * uniform());
}

double RandomStream::log_gamma_variate(double shape)
{
    if (!(shape > 0.0))
        throw std::invalid_argument("gamma shape must be positive");
    if (shape < 1.0)
    {
        // Gamma(a) = Gamma(a + 1) * U^(1/a)
        return log_gamma_variate(shape + 1.0) + std::log(uniform_pos()) / shape;
    }
    // Marsaglia & Tsang (2000)
    double const d = shape - 1.0 / 3.0;
    double const c = 1.0 / std::sqrt(9.0 * d);
    for (;;)
    {
        double const x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0)
            continue;
        v = v * v * v;
        double const log_u = std::log(uniform_pos());
        if (log_u < 0.5 * x * x + d - d * v + d * std::log(v))
            return std::log(d * v);
    }
}

std::vector<double> sample_dirichlet(int dim, double alpha, RandomStream& rng)
{
    if (dim < 1)
        throw std::invalid_argument("Dirichlet dimension must be positive");
    std::vector<double> out(static_cast<std::size_t>(dim));
    for (auto& v : out)
        v = rng.log_gamma_variate(alpha);

    double const top = *std::max_element(out.begin(), out.end());
    double total = 0.0;
    for (auto& v : out)
    {
        v = std::max(std::exp(v - top), std::numeric_limits<double>::min());
        total += v;
    }
    for (auto& v : out)
        v /= total;
    return out;
}

}  // namespace wurn

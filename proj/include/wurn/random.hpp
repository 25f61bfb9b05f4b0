#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace wurn {

/// SplitMix64 finalizer. Used to derive stream keys from seeds.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Combine a parent key with a child identifier into a new key.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t id)
{
    return mix64(parent ^ mix64(id + 0x632be59bd9b4e019ull));
}

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/*!
 * Counter-based random stream.
 *
 * Output is a pure function of (key, position), so a stream can be split
 * into independent children by identifier without any shared state. Two
 * streams constructed from the same seed produce identical sequences
 * regardless of which thread consumes them.
 */
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed) : key_(mix64(seed)) {}

    /// Independent child stream identified by `id`.
    RandomStream substream(std::uint64_t id) const
    {
        return RandomStream(Key{derive_key(key_, id)});
    }

    std::uint64_t key() const { return key_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform double on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    /// Standard normal variate (Box-Muller, two uniforms per call).
    double normal();

    /// Logarithm of a Gamma(shape, 1) variate. Stays finite for tiny shapes.
    double log_gamma_variate(double shape);

  private:
    struct Key
    {
        std::uint64_t value;
    };
    explicit RandomStream(Key k) : key_(k.value) {}

    void refill();

    std::uint64_t key_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned used_ = 4;
};

/// Draw from a symmetric Dirichlet(alpha, ..., alpha) on `dim` components.
/// Every component is strictly positive and the vector sums to one.
std::vector<double> sample_dirichlet(int dim, double alpha, RandomStream& rng);

}  // namespace wurn

#pragma once
// Test-only reference computations. Deliberately naive and independent of
// the library's own oracle paths.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "wurn/random.hpp"
#include "wurn/urn.hpp"

namespace wurn::test {

/// Exact distribution by walking every ordered draw sequence and multiplying
/// the sequential draw probabilities along each path.
inline std::map<std::vector<int>, double>
pmf_by_paths(std::vector<int> const& m, std::vector<double> const& omega, int n)
{
    std::map<std::vector<int>, double> out;
    std::vector<int> drawn(m.size(), 0);
    auto walk = [&](auto&& self, int left, double prob) -> void {
        if (left == 0)
        {
            out[drawn] += prob;
            return;
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j)
            denom += (m[j] - drawn[j]) * omega[j];
        for (std::size_t j = 0; j < m.size(); ++j)
        {
            double const num = (m[j] - drawn[j]) * omega[j];
            if (num <= 0.0)
                continue;
            ++drawn[j];
            self(self, left - 1, prob * num / denom);
            --drawn[j];
        }
    };
    walk(walk, n, 1.0);
    return out;
}

/// Binomial coefficient by exact integer multiplication (small arguments).
inline std::uint64_t choose(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// Multivariate hypergeometric mass from exact integer binomials.
inline double hypergeom_exact(std::vector<int> const& m, std::vector<int> const& x)
{
    int total = 0;
    int n = 0;
    std::uint64_t num = 1;
    for (std::size_t j = 0; j < m.size(); ++j)
    {
        total += m[j];
        n += x[j];
        num *= choose(m[j], x[j]);
    }
    return static_cast<double>(num) / static_cast<double>(choose(total, n));
}

/// Random small urn: c in [1, max_c], m_j in [0, max_m] (N >= 1), omega in
/// (lo, hi) log-uniformly.
struct SmallUrn
{
    UrnSpec spec;
    int n;
};

inline SmallUrn random_small_urn(RandomStream& rng, int max_c, int max_m,
                                 double lo, double hi, bool uniform_omega)
{
    SmallUrn u;
    int const c = 1 + static_cast<int>(rng.uniform() * max_c);
    u.spec.colours = c;
    int total = 0;
    for (int j = 0; j < c; ++j)
    {
        int const mj = static_cast<int>(rng.uniform() * (max_m + 1));
        u.spec.m.push_back(mj);
        total += mj;
    }
    if (total == 0)
    {
        u.spec.m[0] = 1;
        total = 1;
    }
    double const shared = std::exp(std::log(lo) + rng.uniform() * std::log(hi / lo));
    for (int j = 0; j < c; ++j)
    {
        u.spec.omega.push_back(
            uniform_omega ? shared
                          : std::exp(std::log(lo) + rng.uniform() * std::log(hi / lo)));
    }
    u.n = 1 + static_cast<int>(rng.uniform() * total);
    return u;
}

}  // namespace wurn::test

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "wurn/random.hpp"

namespace wurn {

/// Parameters of a Wallenius biased urn.
struct UrnSpec
{
    int colours = 0;
    std::vector<int> m;          // balls per colour
    std::vector<double> omega;   // priority weight per colour

    int total() const;
};

/// Colour counts of one sample drawn from an urn.
struct FrequencyVector
{
    std::vector<int> counts;
    int n = 0;

    /// Build from counts with n set to their sum.
    static FrequencyVector from_counts(std::vector<int> counts);

    int colours() const { return static_cast<int>(counts.size()); }
    bool operator==(FrequencyVector const&) const = default;
};

/// Balls already removed per colour during a sequential draw.
struct DrawState
{
    std::vector<int> drawn;
};

/// Upper bound on the number of states the exact oracles will visit.
inline constexpr std::size_t kDefaultStateCap = 1'000'000;

/// Check all UrnSpec invariants. Throws ValidationError naming the offending
/// (1-based) index.
UrnSpec const& validate_urn(UrnSpec const& spec);

/// Probability that the next ball is of each colour, given what has been
/// drawn. Exhausted colours get exactly zero.
std::vector<double> next_draw_probs(UrnSpec const& spec, DrawState const& state);

/// Draw n balls sequentially without replacement.
FrequencyVector sample_draw(UrnSpec const& spec, int n, RandomStream& rng);

/*!
 * Unchecked sequential draw used by the simulation hot paths.
 *
 * Consumes exactly one uniform per ball and chooses a colour by inverse CDF
 * over the current weights (remaining_j * omega_j), breaking cumulative-sum
 * ties toward the lower index. `counts` receives the result.
 */
void draw_into(std::span<int const> m, std::span<double const> omega, int n,
               RandomStream& rng, std::span<int> counts);

/*!
 * Wallenius probability mass of x, by adaptive quadrature of
 *
 *   prod_j C(m_j, x_j) * int_0^1 prod_j (1 - t^(omega_j / d))^(x_j) dt,
 *   d = sum_j omega_j (m_j - x_j).
 *
 * Infeasible x (some x_j outside [0, m_j]) has probability zero. Intended
 * for moderate urns; inference never evaluates it.
 */
double wallenius_pmf(UrnSpec const& spec, FrequencyVector const& x);

/// Multivariate hypergeometric mass prod_j C(m_j, x_j) / C(N, n); omega is
/// ignored.
double hypergeom_pmf(UrnSpec const& spec, FrequencyVector const& x);

/// log C(n, k) via log-gamma.
double log_binomial(int n, int k);

/// All x with 0 <= x_j <= m_j and sum x_j = n, in lexicographic order.
std::vector<FrequencyVector> enumerate_support(UrnSpec const& spec, int n,
                                               std::size_t cap = kDefaultStateCap);

/// Exact distribution of the counts after n draws, obtained by pushing
/// probability mass through the draw-state lattice one ball at a time.
std::map<std::vector<int>, double>
exact_pmf_by_enumeration(UrnSpec const& spec, int n,
                         std::size_t cap = kDefaultStateCap);

}  // namespace wurn

#include "wurn/urn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "wurn/error.hpp"
#include "wurn/quadrature.hpp"

namespace wurn {
namespace {

std::string at_index(char const* what, std::size_t j)
{
    return std::string(what) + " at index " + std::to_string(j + 1);
}

void check_frequency_vector(UrnSpec const& spec, FrequencyVector const& x)
{
    if (x.colours() != spec.colours)
        throw ValidationError("dimension mismatch: urn has "
                              + std::to_string(spec.colours)
                              + " colours, frequency vector has "
                              + std::to_string(x.colours()));
    std::int64_t const sum
        = std::accumulate(x.counts.begin(), x.counts.end(), std::int64_t{0});
    if (sum != x.n)
        throw ValidationError("frequency counts sum to " + std::to_string(sum)
                              + " but n = " + std::to_string(x.n));
}

bool feasible(UrnSpec const& spec, FrequencyVector const& x)
{
    for (std::size_t j = 0; j < x.counts.size(); ++j)
    {
        if (x.counts[j] < 0 || x.counts[j] > spec.m[j])
            return false;
    }
    return true;
}

// log(1 - exp(y)) for y <= 0 without cancellation (Maechler 2012).
double log1mexp(double y)
{
    return y > -std::numbers::ln2 ? std::log(-std::expm1(y))
                                  : std::log1p(-std::exp(y));
}

}  // namespace

int UrnSpec::total() const
{
    return std::accumulate(m.begin(), m.end(), 0);
}

FrequencyVector FrequencyVector::from_counts(std::vector<int> counts)
{
    int const n = std::accumulate(counts.begin(), counts.end(), 0);
    return FrequencyVector{std::move(counts), n};
}

UrnSpec const& validate_urn(UrnSpec const& spec)
{
    if (spec.colours < 1)
        throw ValidationError("colour count must be at least 1");
    auto const c = static_cast<std::size_t>(spec.colours);
    if (spec.m.size() != c || spec.omega.size() != c)
        throw ValidationError("dimension mismatch: c = " + std::to_string(c)
                              + ", length(m) = " + std::to_string(spec.m.size())
                              + ", length(omega) = "
                              + std::to_string(spec.omega.size()));
    std::int64_t total = 0;
    for (std::size_t j = 0; j < c; ++j)
    {
        if (spec.m[j] < 0)
            throw ValidationError(at_index("negative multiplicity", j));
        if (!std::isfinite(spec.omega[j]))
            throw ValidationError(at_index("non-finite weight", j));
        if (!(spec.omega[j] > 0.0))
            throw ValidationError(at_index("non-positive weight", j));
        total += spec.m[j];
    }
    if (total == 0)
        throw ValidationError("empty urn: total number of balls is 0");
    if (total > std::numeric_limits<int>::max())
        throw ValidationError("urn too large");
    return spec;
}

std::vector<double> next_draw_probs(UrnSpec const& spec, DrawState const& state)
{
    validate_urn(spec);
    if (state.drawn.size() != spec.m.size())
        throw ValidationError("dimension mismatch between urn and draw state");

    std::vector<double> probs(spec.m.size());
    double total = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j)
    {
        int const remaining = spec.m[j] - state.drawn[j];
        if (state.drawn[j] < 0 || remaining < 0)
            throw ValidationError(at_index("infeasible draw state", j));
        probs[j] = remaining * spec.omega[j];
        total += probs[j];
    }
    if (total == 0.0)
        throw ValidationError("urn exhausted: every colour has been drawn");
    for (auto& p : probs)
        p /= total;
    return probs;
}

void draw_into(std::span<int const> m, std::span<double const> omega, int n,
               RandomStream& rng, std::span<int> counts)
{
    std::size_t const c = m.size();
    std::fill(counts.begin(), counts.end(), 0);
    for (int ball = 0; ball < n; ++ball)
    {
        double total = 0.0;
        for (std::size_t j = 0; j < c; ++j)
            total += (m[j] - counts[j]) * omega[j];

        double const target = rng.uniform() * total;
        double cumulative = 0.0;
        std::size_t chosen = c;
        std::size_t last_live = c;
        for (std::size_t j = 0; j < c; ++j)
        {
            double const w = (m[j] - counts[j]) * omega[j];
            if (w > 0.0)
                last_live = j;
            cumulative += w;
            if (target < cumulative)
            {
                chosen = j;
                break;
            }
        }
        // Rounding can leave target == total; fall back to the last colour
        // that still has balls.
        if (chosen == c)
            chosen = last_live;
        ++counts[chosen];
    }
}

FrequencyVector sample_draw(UrnSpec const& spec, int n, RandomStream& rng)
{
    validate_urn(spec);
    if (n < 1)
        throw ValidationError("draw size must be positive");
    if (n > spec.total())
        throw ValidationError("draw size " + std::to_string(n)
                              + " exceeds number of balls "
                              + std::to_string(spec.total()));
    FrequencyVector out{std::vector<int>(spec.m.size()), n};
    draw_into(spec.m, spec.omega, n, rng, out.counts);
    return out;
}

double log_binomial(int n, int k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double wallenius_pmf(UrnSpec const& spec, FrequencyVector const& x)
{
    validate_urn(spec);
    check_frequency_vector(spec, x);
    if (!feasible(spec, x))
        return 0.0;

    double d = 0.0;
    for (std::size_t j = 0; j < x.counts.size(); ++j)
        d += spec.omega[j] * (spec.m[j] - x.counts[j]);
    // Exhaustive draw: the outcome is certain.
    if (d == 0.0)
        return 1.0;

    double log_coef = 0.0;
    std::vector<double> rate;
    std::vector<int> power;
    for (std::size_t j = 0; j < x.counts.size(); ++j)
    {
        log_coef += log_binomial(spec.m[j], x.counts[j]);
        if (x.counts[j] > 0)
        {
            rate.push_back(spec.omega[j] / d);
            power.push_back(x.counts[j]);
        }
    }

    auto integrand = [&](double t) {
        double const log_t = std::log(t);
        double log_f = 0.0;
        for (std::size_t i = 0; i < rate.size(); ++i)
            log_f += power[i] * log1mexp(rate[i] * log_t);
        return std::exp(log_f);
    };
    QuadratureResult const integral = integrate_adaptive(integrand, 0.0, 1.0);
    if (integral.value <= 0.0)
        return 0.0;
    return std::exp(log_coef + std::log(integral.value));
}

double hypergeom_pmf(UrnSpec const& spec, FrequencyVector const& x)
{
    validate_urn(spec);
    check_frequency_vector(spec, x);
    if (!feasible(spec, x))
        return 0.0;
    double log_p = -log_binomial(spec.total(), x.n);
    for (std::size_t j = 0; j < x.counts.size(); ++j)
        log_p += log_binomial(spec.m[j], x.counts[j]);
    return std::exp(log_p);
}

std::vector<FrequencyVector> enumerate_support(UrnSpec const& spec, int n,
                                               std::size_t cap)
{
    validate_urn(spec);
    if (n < 0 || n > spec.total())
        throw ValidationError("draw size " + std::to_string(n)
                              + " outside [0, " + std::to_string(spec.total())
                              + "]");
    std::size_t const c = spec.m.size();
    // capacity_after[j] = balls in colours j+1..c-1
    std::vector<int> capacity_after(c, 0);
    for (std::size_t j = c - 1; j > 0; --j)
        capacity_after[j - 1] = capacity_after[j] + spec.m[j];

    std::vector<FrequencyVector> out;
    std::vector<int> current(c, 0);
    auto recurse = [&](auto&& self, std::size_t j, int remaining) -> void {
        if (j + 1 == c)
        {
            current[j] = remaining;
            if (out.size() >= cap)
                throw ValidationError("support size exceeds cap of "
                                      + std::to_string(cap));
            out.push_back(FrequencyVector{current, n});
            return;
        }
        int const lo = std::max(0, remaining - capacity_after[j]);
        int const hi = std::min(spec.m[j], remaining);
        for (int v = lo; v <= hi; ++v)
        {
            current[j] = v;
            self(self, j + 1, remaining - v);
        }
    };
    recurse(recurse, 0, n);
    return out;
}

std::map<std::vector<int>, double>
exact_pmf_by_enumeration(UrnSpec const& spec, int n, std::size_t cap)
{
    validate_urn(spec);
    if (n < 0 || n > spec.total())
        throw ValidationError("draw size " + std::to_string(n)
                              + " outside [0, " + std::to_string(spec.total())
                              + "]");
    std::size_t const c = spec.m.size();
    std::map<std::vector<int>, double> level{{std::vector<int>(c, 0), 1.0}};
    std::vector<double> weights(c);
    for (int step = 0; step < n; ++step)
    {
        std::map<std::vector<int>, double> next;
        for (auto const& [state, mass] : level)
        {
            double total = 0.0;
            for (std::size_t j = 0; j < c; ++j)
            {
                weights[j] = (spec.m[j] - state[j]) * spec.omega[j];
                total += weights[j];
            }
            for (std::size_t j = 0; j < c; ++j)
            {
                if (weights[j] <= 0.0)
                    continue;
                std::vector<int> child = state;
                ++child[j];
                next[std::move(child)] += mass * (weights[j] / total);
            }
            if (next.size() > cap)
                throw ValidationError("state space exceeds cap of "
                                      + std::to_string(cap));
        }
        level = std::move(next);
    }
    return level;
}

}  // namespace wurn

#include "wurn/abc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wurn/parallel.hpp"

namespace wurn {
namespace {

void check_simplex(std::span<double const> p, char const* which)
{
    double sum = 0.0;
    for (double v : p)
    {
        if (!(v >= -1e-9))
            throw ValidationError(std::string(which) + " has a negative component");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError(std::string(which) + " does not sum to one");
}

double half_l1(std::span<double const> p, std::span<double const> q)
{
    double sum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        sum += std::abs(p[j] - q[j]);
    return 0.5 * sum;
}

}  // namespace

double PosteriorSample::acceptance_rate() const
{
    return attempts == 0 ? 0.0
                         : static_cast<double>(draws.size()) / static_cast<double>(attempts);
}

std::vector<double> sample_prior(int colours, PriorConfig const& prior, RandomStream& rng)
{
    if (colours < 2)
        throw ValidationError("inference needs at least 2 categories");
    if (!(prior.alpha > 0.0) || !std::isfinite(prior.alpha))
        throw ValidationError("Dirichlet alpha must be positive");
    return sample_dirichlet(colours, prior.alpha, rng);
}

std::vector<double> summary_statistic(Dataset const& data)
{
    if (data.observations.empty())
        throw ValidationError("dataset has no observations");
    std::vector<double> out(data.m.size(), 0.0);
    for (auto const& obs : data.observations)
    {
        if (obs.n <= 0)
            throw ValidationError("observation with zero draw size");
        if (obs.counts.size() != out.size())
            throw ValidationError("dimension mismatch in dataset");
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] += obs.counts[j] / static_cast<double>(obs.n);
    }
    double const k = static_cast<double>(data.observations.size());
    for (auto& v : out)
        v /= k;
    return out;
}

double tv_distance(std::span<double const> p, std::span<double const> q)
{
    if (p.size() != q.size())
        throw ValidationError("length mismatch in distance");
    check_simplex(p, "first argument");
    check_simplex(q, "second argument");
    return half_l1(p, q);
}

Dataset simulate_dataset(std::vector<int> const& m, std::vector<double> const& omega,
                         std::vector<int> const& draw_sizes, RandomStream& rng)
{
    UrnSpec const spec{static_cast<int>(m.size()), m, omega};
    Dataset out;
    out.m = m;
    out.observations.reserve(draw_sizes.size());
    for (int n : draw_sizes)
        out.observations.push_back(sample_draw(spec, n, rng));
    return out;
}

// ProposalEvaluator ---------------------------------------------------------

ProposalEvaluator::ProposalEvaluator(Dataset const& data, PriorConfig const& prior)
    : m_(data.m), draw_sizes_(data.draw_sizes()), prior_(prior)
{
    validate_dataset(data);
    if (data.colours() < 2)
        throw ValidationError("inference needs at least 2 categories");
    if (!(prior.alpha > 0.0) || !std::isfinite(prior.alpha))
        throw ValidationError("Dirichlet alpha must be positive");
    observed_ = summary_statistic(data);
}

ProposalEvaluator::Outcome ProposalEvaluator::evaluate(std::uint64_t seed, Purpose purpose,
                                                       std::uint64_t index) const
{
    RandomStream rng = RandomStream(seed)
                           .substream(static_cast<std::uint64_t>(purpose))
                           .substream(index);
    Outcome out;
    out.omega = sample_dirichlet(static_cast<int>(m_.size()), prior_.alpha, rng);

    // Same accumulation order as summary_statistic so replays match exactly.
    std::vector<int> counts(m_.size());
    std::vector<double> summary(m_.size(), 0.0);
    for (int n : draw_sizes_)
    {
        draw_into(m_, out.omega, n, rng, counts);
        for (std::size_t j = 0; j < counts.size(); ++j)
            summary[j] += counts[j] / static_cast<double>(n);
    }
    double const k = static_cast<double>(draw_sizes_.size());
    for (auto& v : summary)
        v /= k;
    out.distance = half_l1(summary, observed_);
    return out;
}

// Calibration ----------------------------------------------------------------

CalibrationResult calibrate_tolerance(Dataset const& data, PriorConfig const& prior,
                                      std::size_t pilot_size, double quantile,
                                      std::uint64_t seed, unsigned threads)
{
    if (pilot_size < 100)
        throw ValidationError("pilot size must be at least 100");
    if (!(quantile > 0.0 && quantile <= 1.0))
        throw ValidationError("quantile must lie in (0, 1]");
    ProposalEvaluator const evaluator(data, prior);

    CalibrationResult result;
    result.quantile = quantile;
    result.pilot_size = pilot_size;
    result.distances.resize(pilot_size);
    parallel_for(pilot_size, threads, [&](std::size_t i) {
        result.distances[i]
            = evaluator.evaluate(seed, ProposalEvaluator::Purpose::pilot, i).distance;
    });
    std::sort(result.distances.begin(), result.distances.end());

    // The relative nudge keeps products such as 0.07 * 100 from rounding up a rank.
    auto rank = static_cast<std::size_t>(
        std::ceil(quantile * static_cast<double>(pilot_size) * (1.0 - 1e-12)));
    rank = std::clamp<std::size_t>(rank, 1, pilot_size);
    result.epsilon = result.distances[rank - 1];
    result.degenerate = result.distances.front() == result.distances.back();
    if (result.epsilon == 0.0)
    {
        // Strict acceptance needs epsilon > 0; the smallest positive distance
        // accepts exactly the zero-distance proposals.
        result.raised_from_zero = true;
        auto const positive = std::upper_bound(result.distances.begin(),
                                               result.distances.end(), 0.0);
        result.epsilon = positive != result.distances.end()
                             ? *positive
                             : std::numeric_limits<double>::denorm_min();
    }
    return result;
}

// Rejection ------------------------------------------------------------------

std::vector<PosteriorSample> abc_rejection_multi(Dataset const& data, PriorConfig const& prior,
                                                 std::span<double const> epsilons,
                                                 RejectionOptions const& options)
{
    if (epsilons.empty())
        throw ValidationError("no tolerance given");
    for (double eps : epsilons)
    {
        if (!(eps > 0.0) || !std::isfinite(eps))
            throw ValidationError("tolerance must be positive and finite");
    }
    if (options.accepted < 1)
        throw ValidationError("number of accepted draws must be at least 1");
    ProposalEvaluator const evaluator(data, prior);

    std::uint64_t const budget = options.max_attempts != 0
                                     ? options.max_attempts
                                     : 1000 * static_cast<std::uint64_t>(options.accepted);
    std::size_t const batch = std::max<std::size_t>(options.batch, 1);

    std::vector<PosteriorSample> samples(epsilons.size());
    std::vector<bool> done(epsilons.size(), false);
    for (std::size_t e = 0; e < epsilons.size(); ++e)
    {
        samples[e].epsilon = epsilons[e];
        samples[e].seed = options.seed;
        samples[e].draws.reserve(options.accepted);
    }
    std::size_t remaining = epsilons.size();

    std::vector<ProposalEvaluator::Outcome> outcomes;
    std::uint64_t next = 0;
    while (remaining > 0 && next < budget)
    {
        auto const count = static_cast<std::size_t>(std::min<std::uint64_t>(batch, budget - next));
        outcomes.assign(count, {});
        parallel_for(count, options.threads, [&](std::size_t i) {
            outcomes[i] = evaluator.evaluate(options.seed,
                                             ProposalEvaluator::Purpose::rejection, next + i);
        });
        // Merge strictly in proposal order.
        for (std::size_t i = 0; i < count && remaining > 0; ++i)
        {
            for (std::size_t e = 0; e < epsilons.size(); ++e)
            {
                if (done[e] || !(outcomes[i].distance < epsilons[e]))
                    continue;
                auto& s = samples[e];
                s.draws.push_back(outcomes[i].omega);
                s.proposal_ids.push_back(next + i);
                s.distances.push_back(outcomes[i].distance);
                if (s.draws.size() == options.accepted)
                {
                    s.attempts = next + i + 1;
                    done[e] = true;
                    --remaining;
                }
            }
        }
        next += count;
    }

    if (remaining > 0)
    {
        std::string message = "proposal budget of " + std::to_string(budget)
                              + " exhausted before " + std::to_string(options.accepted)
                              + " acceptances (";
        bool first = true;
        for (std::size_t e = 0; e < epsilons.size(); ++e)
        {
            if (done[e])
                continue;
            samples[e].attempts = budget;
            message += (first ? "" : ", ") + std::string("epsilon=")
                       + std::to_string(epsilons[e]) + ": "
                       + std::to_string(samples[e].draws.size()) + " accepted";
            first = false;
        }
        throw BudgetExhausted(message + ")", std::move(samples));
    }
    return samples;
}

PosteriorSample abc_rejection(Dataset const& data, PriorConfig const& prior, double epsilon,
                              RejectionOptions const& options)
{
    double const eps[] = {epsilon};
    return std::move(abc_rejection_multi(data, prior, eps, options).front());
}

// Summaries ------------------------------------------------------------------

PosteriorSummary summarize_draws(std::vector<std::vector<double>> const& draws)
{
    if (draws.size() < 2)
        throw ValidationError("posterior summaries need at least 2 draws");
    std::size_t const c = draws.front().size();
    for (auto const& d : draws)
    {
        if (d.size() != c)
            throw ValidationError("posterior draws have inconsistent lengths");
    }
    double const t = static_cast<double>(draws.size());

    PosteriorSummary out;
    out.draws = draws.size();
    out.mean.assign(c, 0.0);
    out.sd.assign(c, 0.0);
    out.exceedance.assign(c, std::vector<double>(c, 0.0));
    for (auto const& d : draws)
    {
        for (std::size_t j = 0; j < c; ++j)
            out.mean[j] += d[j];
    }
    for (auto& v : out.mean)
        v /= t;
    for (auto const& d : draws)
    {
        for (std::size_t j = 0; j < c; ++j)
            out.sd[j] += (d[j] - out.mean[j]) * (d[j] - out.mean[j]);
        for (std::size_t i = 0; i < c; ++i)
        {
            for (std::size_t j = i + 1; j < c; ++j)
            {
                if (d[i] >= d[j])
                    out.exceedance[i][j] += 1.0;
                else
                    out.exceedance[j][i] += 1.0;
            }
        }
    }
    for (auto& v : out.sd)
        v = std::sqrt(v / (t - 1.0));
    for (auto& row : out.exceedance)
    {
        for (auto& v : row)
            v /= t;
    }
    return out;
}

PosteriorSummary posterior_summaries(PosteriorSample const& sample)
{
    return summarize_draws(sample.draws);
}

}  // namespace wurn

#include "wurn/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "wurn/csv.hpp"
#include "wurn/error.hpp"
#include "wurn/random.hpp"

namespace wurn {

std::string_view to_string(Configuration config)
{
    switch (config)
    {
    case Configuration::Uniform:
        return "uniform";
    case Configuration::IncreasingIncreasing:
        return "increasing-increasing";
    case Configuration::IncreasingDecreasing:
        return "increasing-decreasing";
    }
    return "unknown";
}

std::optional<Configuration> parse_configuration(std::string_view name)
{
    for (auto c : {Configuration::Uniform, Configuration::IncreasingIncreasing,
                   Configuration::IncreasingDecreasing})
    {
        if (name == to_string(c))
            return c;
    }
    return std::nullopt;
}

void validate_scenario(ScenarioConfig const& config)
{
    if (config.c < 2)
        throw ValidationError(fmt::format("scenario needs c >= 2, got {}", config.c));
    if (config.k < 1)
        throw ValidationError(fmt::format("scenario needs k >= 1, got {}", config.k));
    if (config.replications < 1)
        throw ValidationError("scenario needs at least one replication");
    if (config.accepted < 2)
        throw ValidationError("scenario needs at least two accepted draws per fit");
    if (config.uniform_m < 1)
        throw ValidationError("uniform multiplicity must be positive");
    if (!(config.alpha > 0.0) || !std::isfinite(config.alpha))
        throw ValidationError("prior concentration must be positive");
}

ScenarioUrn scenario_urn(ScenarioConfig const& config)
{
    validate_scenario(config);
    int const c = config.c;
    ScenarioUrn urn;
    if (config.config == Configuration::Uniform)
    {
        urn.m.assign(c, config.uniform_m);
        urn.omega.assign(c, 1.0 / c);
        return urn;
    }
    double const total = c * (c + 1) / 2.0;
    for (int j = 1; j <= c; ++j)
    {
        urn.m.push_back(j);
        int const w = config.config == Configuration::IncreasingIncreasing ? j : c + 1 - j;
        urn.omega.push_back(w / total);
    }
    return urn;
}

bool ranking_matches(std::vector<double> const& estimate, std::vector<double> const& truth)
{
    for (std::size_t i = 0; i < truth.size(); ++i)
    {
        for (std::size_t j = 0; j < truth.size(); ++j)
        {
            if (truth[i] > truth[j] && !(estimate[i] > estimate[j]))
                return false;
        }
    }
    return true;
}

std::uint64_t replication_seed(std::uint64_t scenario_seed, int replication)
{
    return derive_key(scenario_seed, static_cast<std::uint64_t>(replication));
}

ScenarioResult run_scenario(ScenarioConfig const& config)
{
    ScenarioResult result;
    result.config = config;
    result.truth = scenario_urn(config);
    int const total = std::accumulate(result.truth.m.begin(), result.truth.m.end(), 0);
    result.draw_size = std::max(1, total / 2);
    std::vector<int> const sizes(static_cast<std::size_t>(config.k), result.draw_size);
    PriorConfig const prior{config.alpha};

    double error_sum = 0.0;
    double rate_sum = 0.0;
    for (int r = 0; r < config.replications; ++r)
    {
        ReplicationRecord rec;
        rec.replication = r + 1;
        rec.seed = replication_seed(config.seed, r);

        RandomStream data_rng = RandomStream(rec.seed).substream(0);
        Dataset const data = simulate_dataset(result.truth.m, result.truth.omega, sizes, data_rng);

        auto const cal = calibrate_tolerance(data, prior, config.pilot_size, config.quantile,
                                             derive_key(rec.seed, 1), config.threads);
        rec.epsilon = cal.epsilon;
        rec.epsilon_raised = cal.raised_from_zero;

        RejectionOptions opts;
        opts.accepted = config.accepted;
        opts.seed = derive_key(rec.seed, 2);
        opts.threads = config.threads;
        auto const sample = abc_rejection(data, prior, cal.epsilon, opts);
        rec.accepted = sample.accepted();
        rec.attempts = sample.attempts;
        rec.omega_hat = posterior_summaries(sample).mean;

        double sq = 0.0;
        for (std::size_t j = 0; j < rec.omega_hat.size(); ++j)
        {
            double const d = rec.omega_hat[j] - result.truth.omega[j];
            sq += d * d;
        }
        rec.error = std::sqrt(sq);
        rec.ranking_ok = ranking_matches(rec.omega_hat, result.truth.omega);

        error_sum += rec.error;
        rate_sum += rec.acceptance_rate();
        result.records.push_back(std::move(rec));
    }
    result.rmse = error_sum / config.replications;
    result.mean_acceptance_rate = rate_sum / config.replications;
    return result;
}

std::uint64_t cell_seed(std::uint64_t grid_seed, int c, int k, Configuration config)
{
    std::uint64_t s = derive_key(grid_seed, static_cast<std::uint64_t>(config));
    s = derive_key(s, static_cast<std::uint64_t>(c));
    return derive_key(s, static_cast<std::uint64_t>(k));
}

std::vector<ScenarioResult> run_grid(GridSpec const& grid,
                                     std::function<void(ScenarioResult const&)> const& on_cell)
{
    std::vector<ScenarioResult> results;
    for (auto config : grid.configs)
    {
        for (int c : grid.colours)
        {
            for (int k : grid.sizes)
            {
                ScenarioConfig cell = grid.base;
                cell.c = c;
                cell.k = k;
                cell.config = config;
                cell.seed = cell_seed(grid.base.seed, c, k, config);
                results.push_back(run_scenario(cell));
                if (on_cell)
                    on_cell(results.back());
            }
        }
    }
    return results;
}

void write_replication_csv(std::ostream& out, ScenarioResult const& result)
{
    int const c = result.config.c;
    out << "replication,seed,epsilon,epsilon_raised,accepted,attempts,acceptance_rate,error,"
           "ranking_ok";
    for (int j = 1; j <= c; ++j)
        fmt::print(out, ",omega_hat_{}", j);
    for (int j = 1; j <= c; ++j)
        fmt::print(out, ",omega_true_{}", j);
    out << '\n';
    for (auto const& rec : result.records)
    {
        fmt::print(out, "{},{},{:.17g},{},{},{},{:.17g},{:.17g},{}", rec.replication, rec.seed,
                   rec.epsilon, rec.epsilon_raised ? 1 : 0, rec.accepted, rec.attempts,
                   rec.acceptance_rate(), rec.error, rec.ranking_ok ? 1 : 0);
        for (double v : rec.omega_hat)
            fmt::print(out, ",{:.17g}", v);
        for (double v : result.truth.omega)
            fmt::print(out, ",{:.17g}", v);
        out << '\n';
    }
}

void write_grid_csv(std::ostream& out, std::vector<ScenarioResult> const& results,
                    std::vector<std::string> const& details)
{
    out << "c,k,config,rmse,acc_rate,replications,attempts,detail\n";
    for (std::size_t i = 0; i < results.size(); ++i)
    {
        auto const& r = results[i];
        std::uint64_t attempts = 0;
        for (auto const& rec : r.records)
            attempts += rec.attempts;
        fmt::print(out, "{},{},{},{:.17g},{:.17g},{},{},{}\n", r.config.c, r.config.k,
                   to_string(r.config.config), r.rmse, r.mean_acceptance_rate,
                   r.records.size(), attempts,
                   csv::quote(i < details.size() ? details[i] : std::string()));
    }
}

void write_grid_table(std::ostream& out, std::vector<ScenarioResult> const& results)
{
    fmt::print(out, "{}\n", kRmseConvention);

    std::vector<Configuration> configs;
    for (auto const& r : results)
    {
        if (std::find(configs.begin(), configs.end(), r.config.config) == configs.end())
            configs.push_back(r.config.config);
    }
    for (auto config : configs)
    {
        std::map<std::pair<int, int>, ScenarioResult const*> cell;
        std::set<int> cs;
        std::set<int> ks;
        int replications = 0;
        for (auto const& r : results)
        {
            if (r.config.config != config)
                continue;
            cell[{r.config.c, r.config.k}] = &r;
            cs.insert(r.config.c);
            ks.insert(r.config.k);
            replications = std::max(replications, r.config.replications);
        }

        fmt::print(out, "\n{} (replications = {})\n", to_string(config), replications);
        fmt::print(out, "{:>4} |", "");
        for (int k : ks)
            fmt::print(out, " {:^19} |", fmt::format("k={}", k));
        fmt::print(out, "\n{:>4} |", "c");
        for (std::size_t i = 0; i < ks.size(); ++i)
            fmt::print(out, " {:>8} {:>10} |", "RMSE", "acc. rate");
        out << '\n';
        for (int c : cs)
        {
            fmt::print(out, "{:>4} |", c);
            for (int k : ks)
            {
                auto const it = cell.find({c, k});
                if (it == cell.end())
                    fmt::print(out, " {:>8} {:>10} |", "-", "-");
                else
                    fmt::print(out, " {:>8.4f} {:>10.4f} |", it->second->rmse,
                               it->second->mean_acceptance_rate);
            }
            out << '\n';
        }
    }
}

}  // namespace wurn

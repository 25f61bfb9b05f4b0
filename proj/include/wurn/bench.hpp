#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "wurn/abc.hpp"

namespace wurn {

enum class Configuration
{
    Uniform,
    IncreasingIncreasing,
    IncreasingDecreasing,
};

std::string_view to_string(Configuration config);
/// Accepts the names produced by to_string; nullopt otherwise.
std::optional<Configuration> parse_configuration(std::string_view name);

struct ScenarioConfig
{
    int c = 2;
    int k = 50;
    Configuration config = Configuration::Uniform;
    int replications = 20;
    double quantile = kDefaultQuantile;
    std::size_t accepted = 1000;
    std::size_t pilot_size = kDefaultPilotSize;
    int uniform_m = 5;   // balls per colour in the uniform configuration
    double alpha = 1.0;  // Dirichlet concentration
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

/// Throws ValidationError for c < 2, k < 1, replications < 1 and the like.
void validate_scenario(ScenarioConfig const& config);

struct ScenarioUrn
{
    std::vector<int> m;
    std::vector<double> omega;
};

ScenarioUrn scenario_urn(ScenarioConfig const& config);

struct ReplicationRecord
{
    int replication = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    bool epsilon_raised = false;
    std::size_t accepted = 0;
    std::uint64_t attempts = 0;
    std::vector<double> omega_hat;  // posterior mean
    double error = 0.0;             // Euclidean distance to the true weights
    bool ranking_ok = false;

    double acceptance_rate() const
    {
        return attempts ? static_cast<double>(accepted) / attempts : 0.0;
    }
};

struct ScenarioResult
{
    ScenarioConfig config;
    ScenarioUrn truth;
    int draw_size = 0;  // n_h, shared by every respondent
    std::vector<ReplicationRecord> records;
    double rmse = 0.0;
    double mean_acceptance_rate = 0.0;
};

/// True when every strict order between true weights is reproduced strictly
/// by the estimate. Ties in the truth impose nothing.
bool ranking_matches(std::vector<double> const& estimate, std::vector<double> const& truth);

/// Seed of replication r of a scenario.
std::uint64_t replication_seed(std::uint64_t scenario_seed, int replication);

ScenarioResult run_scenario(ScenarioConfig const& config);

/// Report RMSE as the mean over replications of the Euclidean norm of the
/// error in posterior mean, both weight vectors normalized to sum to one.
inline constexpr std::string_view kRmseConvention =
    "RMSE = mean over replications of ||omega_hat - omega_true||_2 (weights summing to 1)";

struct GridSpec
{
    std::vector<int> colours{2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20};
    std::vector<int> sizes{5, 50, 1000};
    std::vector<Configuration> configs{Configuration::Uniform,
                                       Configuration::IncreasingIncreasing,
                                       Configuration::IncreasingDecreasing};
    ScenarioConfig base;  // c, k, config and seed are overridden per cell
};

/// Seed of one grid cell, derived from the grid seed and the cell coordinates
/// so that a cell's result does not depend on which other cells are run.
std::uint64_t cell_seed(std::uint64_t grid_seed, int c, int k, Configuration config);

/// Runs every cell in configuration, c, k order. `on_cell` is called after
/// each cell finishes, e.g. to write detail files as the grid progresses.
std::vector<ScenarioResult> run_grid(
    GridSpec const& grid, std::function<void(ScenarioResult const&)> const& on_cell = {});

/// One row per replication.
void write_replication_csv(std::ostream& out, ScenarioResult const& result);

/// Columns c,k,config,rmse,acc_rate,replications,attempts,detail; `details`
/// holds the detail file path for each result (may be empty).
void write_grid_csv(std::ostream& out, std::vector<ScenarioResult> const& results,
                    std::vector<std::string> const& details = {});

/// One block per configuration: rows are c, column pairs are k.
void write_grid_table(std::ostream& out, std::vector<ScenarioResult> const& results);

}  // namespace wurn

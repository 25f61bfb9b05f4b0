#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wurn/dataset.hpp"
#include "wurn/error.hpp"
#include "wurn/random.hpp"

namespace wurn {

/// Symmetric Dirichlet prior on the normalized weight vector.
struct PriorConfig
{
    double alpha = 1.0;

    /// The alpha = 1/c alternative for many categories.
    static PriorConfig reference(int colours) { return {1.0 / colours}; }
};

/// Accepted ABC draws together with the bookkeeping needed to audit them.
struct PosteriorSample
{
    std::vector<std::vector<double>> draws;    // each on the unit simplex
    std::vector<std::uint64_t> proposal_ids;   // index of each accepted proposal
    std::vector<double> distances;             // distance of each accepted proposal
    std::uint64_t attempts = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;

    std::size_t accepted() const { return draws.size(); }
    double acceptance_rate() const;
};

/// Raised when the proposal budget runs out before enough draws are
/// accepted. Carries whatever was accepted, one sample per tolerance.
class BudgetExhausted : public Error
{
  public:
    BudgetExhausted(std::string const& what, std::vector<PosteriorSample> partial)
        : Error(what), partial_(std::move(partial))
    {
    }
    std::vector<PosteriorSample> const& partial() const { return partial_; }

  private:
    std::vector<PosteriorSample> partial_;
};

/// Weight vector drawn from the prior; requires c >= 2.
std::vector<double> sample_prior(int colours, PriorConfig const& prior,
                                 RandomStream& rng);

/// Mean over respondents of the relative frequencies x_h / n_h.
std::vector<double> summary_statistic(Dataset const& data);

/// Total variation distance: half the L1 distance between two probability
/// vectors. Both inputs must sum to one within 1e-9.
double tv_distance(std::span<double const> p, std::span<double const> q);

/// One Wallenius draw per entry of `draw_sizes`, all from the same urn.
Dataset simulate_dataset(std::vector<int> const& m, std::vector<double> const& omega,
                         std::vector<int> const& draw_sizes, RandomStream& rng);

/*!
 * Prior-predictive proposal machinery shared by calibration and rejection.
 *
 * Proposal `i` under master seed `s` draws its weights and pseudo-data from
 * a stream keyed by (s, purpose, i) only, so its outcome never depends on
 * which worker evaluates it or in what order.
 */
class ProposalEvaluator
{
  public:
    enum class Purpose : std::uint64_t
    {
        pilot = 1,
        rejection = 2,
    };

    ProposalEvaluator(Dataset const& data, PriorConfig const& prior);

    struct Outcome
    {
        std::vector<double> omega;
        double distance;
    };

    /// Generate proposal `index` and its distance to the observed summary.
    Outcome evaluate(std::uint64_t seed, Purpose purpose, std::uint64_t index) const;

    std::vector<double> const& observed_summary() const { return observed_; }

  private:
    std::vector<int> m_;
    std::vector<int> draw_sizes_;
    std::vector<double> observed_;
    PriorConfig prior_;
};

struct CalibrationResult
{
    double epsilon = 0.0;
    double quantile = 0.0;
    std::size_t pilot_size = 0;
    /// Every pilot distance was identical.
    bool degenerate = false;
    /// The quantile landed on a zero distance, so epsilon was raised to the
    /// smallest positive pilot distance.
    bool raised_from_zero = false;
    std::vector<double> distances;  // sorted pilot distances
};

inline constexpr std::size_t kDefaultPilotSize = 100'000;
inline constexpr double kDefaultQuantile = 0.05;

/*!
 * Choose epsilon as an empirical quantile of prior-predictive distances.
 *
 * Simulates `pilot_size` (weights, pseudo-data) pairs on a stream separate
 * from the rejection run and returns the order statistic with 1-based index
 * ceil(quantile * pilot_size).
 */
CalibrationResult calibrate_tolerance(Dataset const& data, PriorConfig const& prior,
                                      std::size_t pilot_size, double quantile,
                                      std::uint64_t seed, unsigned threads = 0);

struct RejectionOptions
{
    std::size_t accepted = 1000;  // T
    std::uint64_t max_attempts = 0;  // 0 means 1000 * T
    std::uint64_t seed = 1;
    unsigned threads = 0;            // 0 means default_thread_count()
    std::size_t batch = 4096;        // proposals evaluated per parallel round
};

/// ABC rejection: accept prior proposals whose pseudo-data summary lies
/// strictly within epsilon of the observed summary.
PosteriorSample abc_rejection(Dataset const& data, PriorConfig const& prior,
                              double epsilon, RejectionOptions const& options);

/*!
 * Rejection at several tolerances sharing one proposal stream.
 *
 * Sample i holds the first T proposals with distance < epsilons[i]. Because
 * proposals are identical across tolerances, each result equals a separate
 * abc_rejection call with the same seed, and accepted sets are nested.
 */
std::vector<PosteriorSample> abc_rejection_multi(Dataset const& data,
                                                 PriorConfig const& prior,
                                                 std::span<double const> epsilons,
                                                 RejectionOptions const& options);

/// Per-component posterior moments and pairwise exceedance probabilities.
struct PosteriorSummary
{
    std::vector<double> mean;
    std::vector<double> sd;  // unbiased (T - 1) denominator
    /// exceedance[i][j] = fraction of draws with omega_i > omega_j; ties count
    /// toward the lower index so that p_ij + p_ji = 1. Diagonal is zero.
    std::vector<std::vector<double>> exceedance;
    std::size_t draws = 0;
};

PosteriorSummary summarize_draws(std::vector<std::vector<double>> const& draws);
PosteriorSummary posterior_summaries(PosteriorSample const& sample);

// Reporting ------------------------------------------------------------------

/// Header `omega_1,...,omega_c` (or the given names), one row per draw.
void write_posterior_csv(std::ostream& out, std::vector<std::vector<double>> const& draws,
                         std::vector<std::string> const& names = {});
std::vector<std::vector<double>> read_posterior_csv(std::istream& in,
                                                    std::vector<std::string>* names = nullptr);

/// One block of a multi-tolerance report.
struct SummaryBlock
{
    PosteriorSummary summary;
    double epsilon = 0.0;           // NaN when unknown
    std::uint64_t attempts = 0;     // 0 when unknown
};

/// Human-readable table, three decimals, standard deviations in brackets.
void write_summary_table(std::ostream& out, std::vector<SummaryBlock> const& blocks,
                         std::vector<std::string> const& names);

/// Machine-readable `key=value` lines, full precision.
void write_summary_kv(std::ostream& out, std::vector<SummaryBlock> const& blocks,
                      std::vector<std::string> const& names);

}  // namespace wurn

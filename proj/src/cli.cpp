#include "wurn/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "wurn/abc.hpp"
#include "wurn/bench.hpp"
#include "wurn/error.hpp"
#include "wurn/ingest.hpp"
#include "wurn/random.hpp"

#ifndef WURN_VERSION
#define WURN_VERSION "0.0.0"
#endif

namespace wurn::cli {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state)
{
    for (unsigned char ch : bytes)
    {
        state ^= ch;
        state *= 0x100000001b3ULL;
    }
    return state;
}

std::uint64_t fnv1a64_file(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::uint64_t state = 0xcbf29ce484222325ULL;
    char buffer[1 << 14];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0)
        state = fnv1a64(std::string_view(buffer, static_cast<std::size_t>(in.gcount())), state);
    return state;
}

namespace {

namespace fs = std::filesystem;

void write_file(fs::path const& path, std::function<void(std::ostream&)> const& body)
{
    if (path.has_parent_path())
    {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec)
            throw IoError("cannot create directory " + path.parent_path().string() + ": "
                          + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    body(out);
    out.flush();
    if (!out)
        throw IoError("error writing " + path.string());
}

struct Inputs
{
    std::map<std::string, fs::path> files;  // option name -> path

    void add(std::string const& option, std::string const& path)
    {
        if (!path.empty())
            files[option] = path;
    }
};

/// Resolved options of the active subcommand, as a config file that
/// reproduces the run, followed by provenance that the parser ignores.
void write_manifest(fs::path const& path, CLI::App const& sub, std::uint64_t seed,
                    Inputs const& inputs)
{
    std::istringstream resolved(sub.config_to_str(true, false));
    std::string body;
    std::string line;
    while (std::getline(resolved, line))
    {
        if (line.empty() || line.ends_with("=\"\"") || line.rfind("threads=", 0) == 0)
            continue;
        body += line + '\n';
    }
    write_file(path, [&](std::ostream& out) {
        out << "# replay with: wurn --config <this file>\n";
        fmt::print(out, "[{}]\n{}", sub.get_name(), body);
        out << "\n[manifest]\n";
        fmt::print(out, "tool=\"wurn\"\nversion=\"{}\"\ncommand=\"{}\"\nseed={}\n", WURN_VERSION,
                   sub.get_name(), seed);
        for (auto const& [option, file] : inputs.files)
            fmt::print(out, "digest.{}=\"fnv1a64:{:016x}\"\n", option, fnv1a64_file(file));
    });
}

// Shared data options -------------------------------------------------------

struct DataOptions
{
    std::string data;
    std::string ratings;
    std::string lists;
    std::string map;
    std::string movies;
    std::string priority;
    double threshold = 3.5;
    int min_length = 10;
    int max_length = 20;

    void attach(CLI::App* app)
    {
        auto* group = app->add_option_group("data", "Input data (choose one source)");
        group->add_option("--data", data, "Frequency CSV");
        group->add_option("--ratings", ratings, "Ratings CSV (user,item,rating[,timestamp])");
        group->add_option("--lists", lists, "Preference-list CSV (respondent,item)");
        group->add_option("--map", map, "Category map CSV (item,category)");
        group->add_option("--movies", movies, "MovieLens movies.csv used as the category map");
        group->add_option("--priority", priority, "Category priority file");
        group->add_option("--threshold", threshold, "Lowest rating that counts as a choice")
            ->capture_default_str();
        group->add_option("--min-length", min_length, "Shortest expected preference list")
            ->capture_default_str();
        group->add_option("--max-length", max_length, "Longest expected preference list")
            ->capture_default_str();
    }

    void record(Inputs& inputs) const
    {
        inputs.add("data", data);
        inputs.add("ratings", ratings);
        inputs.add("lists", lists);
        inputs.add("map", map);
        inputs.add("movies", movies);
        inputs.add("priority", priority);
    }

    Dataset load(std::ostream& err) const
    {
        int const sources = !data.empty() + !ratings.empty() + !lists.empty();
        if (sources != 1)
            throw CLI::ValidationError("data", "give exactly one of --data, --ratings, --lists");
        if (!data.empty())
            return load_frequency_csv(data);

        std::optional<PriorityOrder> order;
        if (!priority.empty())
            order = load_priority_order(priority);
        CategoryMap categories;
        if (!movies.empty() && !map.empty())
            throw CLI::ValidationError("map", "give either --map or --movies");
        if (!movies.empty())
        {
            if (!order)
                throw CLI::ValidationError("priority", "--movies needs --priority");
            categories = load_movielens_genres(movies, *order);
        }
        else if (!map.empty())
        {
            categories = load_category_map(map, order ? &*order : nullptr);
        }
        else
        {
            throw CLI::ValidationError("map", "--ratings and --lists need --map or --movies");
        }

        IngestReport report
            = !ratings.empty()
                  ? ratings_to_frequencies(load_ratings(ratings), categories, threshold)
                  : preference_lists_to_frequencies(load_preference_lists(lists), categories,
                                                    {min_length, max_length});
        for (auto const& w : report.warnings)
            err << "warning: " << w << '\n';
        return std::move(report.dataset);
    }
};

struct PriorOptions
{
    double alpha = 1.0;
    bool reference = false;

    void attach(CLI::App* app)
    {
        app->add_option("--alpha", alpha, "Dirichlet concentration")->capture_default_str();
        app->add_flag("--reference-prior", reference, "Use alpha = 1/c");
    }

    PriorConfig resolve(int colours) const
    {
        return reference ? PriorConfig::reference(colours) : PriorConfig{alpha};
    }
};

std::uint64_t calibration_seed(std::uint64_t seed) { return derive_key(seed, 1); }
std::uint64_t rejection_seed(std::uint64_t seed) { return derive_key(seed, 2); }

// simulate ------------------------------------------------------------------

struct SimulateCommand
{
    std::vector<int> m;
    std::vector<double> omega;
    std::vector<std::string> names;
    int k = 0;
    int n = 0;
    std::vector<int> sizes;
    std::uint64_t seed = 1;
    std::string out;

    CLI::App* attach(CLI::App& app)
    {
        auto* sub = app.add_subcommand("simulate", "Draw a synthetic dataset");
        sub->add_option("--m", m, "Balls per colour")->delimiter(',')->required();
        sub->add_option("--omega", omega, "Colour weights")->delimiter(',')->required();
        sub->add_option("--names", names, "Category names")->delimiter(',');
        sub->add_option("--k", k, "Number of respondents (with --n)");
        sub->add_option("--n", n, "Draw size of every respondent (with --k)");
        sub->add_option("--sizes", sizes, "Draw size of each respondent")->delimiter(',');
        sub->add_option("--seed", seed, "Master seed")->capture_default_str();
        sub->add_option("--out", out, "Output frequency CSV (stdout when omitted)");
        return sub;
    }

    int execute(CLI::App const& sub, std::ostream& stdout_)
    {
        std::vector<int> draw_sizes = sizes;
        if (draw_sizes.empty())
        {
            if (k < 1 || n == 0)
                throw CLI::ValidationError("sizes", "give --sizes or both --k and --n");
            draw_sizes.assign(static_cast<std::size_t>(k), n);
        }
        else if (k != 0 || n != 0)
        {
            throw CLI::ValidationError("sizes", "--sizes excludes --k and --n");
        }
        RandomStream rng = RandomStream(seed).substream(0);
        Dataset data = simulate_dataset(m, omega, draw_sizes, rng);
        if (!names.empty() && names.size() != m.size())
            throw ValidationError("--names needs one name per colour");
        data.categories = names;
        if (out.empty())
        {
            write_frequency_csv(stdout_, data);
            return kSuccess;
        }
        write_file(out, [&](std::ostream& o) { write_frequency_csv(o, data); });
        write_manifest(out + ".manifest.ini", sub, seed, {});
        return kSuccess;
    }
};

// calibrate -----------------------------------------------------------------

struct CalibrateCommand
{
    DataOptions input;
    PriorOptions prior;
    std::vector<double> quantiles;
    std::size_t pilot_size = kDefaultPilotSize;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    bool save_distances = false;

    CLI::App* attach(CLI::App& app)
    {
        auto* sub = app.add_subcommand("calibrate", "Choose tolerances from a pilot run");
        input.attach(sub);
        prior.attach(sub);
        sub->add_option("--quantile", quantiles, "Pilot quantile (repeatable)")
            ->delimiter(',')
            ->default_val(std::vector<double>{kDefaultQuantile});
        sub->add_option("--pilot-size", pilot_size, "Pilot proposals")->capture_default_str();
        sub->add_option("--seed", seed, "Master seed")->capture_default_str();
        sub->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
        sub->add_flag("--save-distances", save_distances, "Write sorted pilot distances");
        return sub;
    }

    int execute(CLI::App const& sub, unsigned threads, std::ostream& out, std::ostream& err)
    {
        Dataset const data = input.load(err);
        PriorConfig const p = prior.resolve(data.colours());
        std::vector<CalibrationResult> results;
        for (double q : quantiles)
            results.push_back(
                calibrate_tolerance(data, p, pilot_size, q, calibration_seed(seed), threads));

        auto const report = [&](std::ostream& o) {
            fmt::print(o, "pilot_size={}\nquantiles={}\n", pilot_size, results.size());
            for (std::size_t i = 0; i < results.size(); ++i)
            {
                auto const& r = results[i];
                std::string const prefix = fmt::format("q{}.", i + 1);
                fmt::print(o, "{}quantile={}\n{}epsilon={:.17g}\n", prefix, r.quantile,
                           prefix, r.epsilon);
                fmt::print(o, "{}raised_from_zero={}\n{}degenerate={}\n", prefix,
                           r.raised_from_zero ? 1 : 0, prefix, r.degenerate ? 1 : 0);
            }
        };
        report(out);
        fs::path const dir(out_dir);
        write_file(dir / "calibration.kv", report);
        if (save_distances)
        {
            write_file(dir / "pilot_distances.csv", [&](std::ostream& o) {
                o << "distance\n";
                for (double d : results.front().distances)
                    fmt::print(o, "{:.17g}\n", d);
            });
        }
        for (auto const& r : results)
        {
            if (r.degenerate)
                err << "warning: every pilot distance is equal\n";
        }
        Inputs inputs;
        input.record(inputs);
        write_manifest(dir / "manifest.ini", sub, seed, inputs);
        return kSuccess;
    }
};

// fit -----------------------------------------------------------------------

struct FitCommand
{
    DataOptions input;
    PriorOptions prior;
    std::vector<double> epsilons;
    double quantile = 0.0;
    std::size_t pilot_size = kDefaultPilotSize;
    std::size_t accepted = 1000;
    std::uint64_t max_attempts = 0;
    std::uint64_t seed = 1;
    std::string out_dir = ".";

    CLI::App* attach(CLI::App& app)
    {
        auto* sub = app.add_subcommand("fit", "ABC rejection fit of the colour weights");
        input.attach(sub);
        prior.attach(sub);
        sub->add_option("--epsilon", epsilons, "Tolerance (repeatable)")->delimiter(',');
        sub->add_option("--calibrate-quantile", quantile,
                        "Add the tolerance at this pilot quantile");
        sub->add_option("--pilot-size", pilot_size, "Pilot proposals")->capture_default_str();
        sub->add_option("--accepted", accepted, "Accepted draws per tolerance (T)")
            ->capture_default_str();
        sub->add_option("--max-attempts", max_attempts, "Proposal budget (0 means 1000 T)")
            ->capture_default_str();
        sub->add_option("--seed", seed, "Master seed")->capture_default_str();
        sub->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
        return sub;
    }

    int execute(CLI::App const& sub, unsigned threads, std::ostream& out, std::ostream& err)
    {
        if (epsilons.empty() && quantile == 0.0)
            throw CLI::ValidationError("epsilon", "give --epsilon or --calibrate-quantile");
        Dataset const data = input.load(err);
        PriorConfig const p = prior.resolve(data.colours());

        std::vector<double> eps = epsilons;
        if (quantile != 0.0)
        {
            auto const cal = calibrate_tolerance(data, p, pilot_size, quantile,
                                                 calibration_seed(seed), threads);
            fmt::print(err, "calibrated epsilon {:.6g} at quantile {}\n", cal.epsilon, quantile);
            if (cal.degenerate)
                err << "warning: every pilot distance is equal\n";
            eps.push_back(cal.epsilon);
        }

        RejectionOptions opts;
        opts.accepted = accepted;
        opts.max_attempts = max_attempts;
        opts.seed = rejection_seed(seed);
        opts.threads = threads;
        fs::path const dir(out_dir);
        Inputs inputs;
        input.record(inputs);

        std::vector<PosteriorSample> samples;
        try
        {
            samples = abc_rejection_multi(data, p, eps, opts);
        }
        catch (BudgetExhausted const& e)
        {
            for (auto const& s : e.partial())
                fmt::print(err, "epsilon {:.6g}: {} of {} draws accepted in {} attempts\n",
                           s.epsilon, s.accepted(), accepted, s.attempts);
            throw;
        }

        std::vector<SummaryBlock> blocks;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            auto const& s = samples[i];
            write_file(dir / fmt::format("posterior_{}.csv", i + 1), [&](std::ostream& o) {
                write_posterior_csv(o, s.draws, data.categories);
            });
            blocks.push_back({posterior_summaries(s), s.epsilon, s.attempts});
        }
        write_file(dir / "data.csv", [&](std::ostream& o) { write_frequency_csv(o, data); });
        write_file(dir / "summary.txt",
                   [&](std::ostream& o) { write_summary_table(o, blocks, data.categories); });
        write_file(dir / "summary.kv",
                   [&](std::ostream& o) { write_summary_kv(o, blocks, data.categories); });
        write_manifest(dir / "manifest.ini", sub, seed, inputs);
        write_summary_table(out, blocks, data.categories);
        return kSuccess;
    }
};

// bench ---------------------------------------------------------------------

struct BenchCommand
{
    std::vector<int> colours{2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20};
    std::vector<int> sizes{5, 50, 1000};
    std::vector<std::string> configs{"uniform", "increasing-increasing",
                                     "increasing-decreasing"};
    ScenarioConfig base;
    std::string out_dir = ".";

    CLI::App* attach(CLI::App& app)
    {
        auto* sub = app.add_subcommand("bench", "Simulation study over a grid of scenarios");
        sub->add_option("--c", colours, "Numbers of colours")->delimiter(',')
            ->capture_default_str();
        sub->add_option("--k", sizes, "Numbers of respondents")->delimiter(',')
            ->capture_default_str();
        sub->add_option("--configs", configs, "Scenario configurations")->delimiter(',')
            ->capture_default_str();
        sub->add_option("--reps", base.replications, "Replications per cell")
            ->capture_default_str();
        sub->add_option("--quantile", base.quantile, "Pilot quantile")->capture_default_str();
        sub->add_option("--pilot-size", base.pilot_size, "Pilot proposals")
            ->capture_default_str();
        sub->add_option("--accepted", base.accepted, "Accepted draws per fit (T)")
            ->capture_default_str();
        sub->add_option("--uniform-m", base.uniform_m, "Balls per colour, uniform scenario")
            ->capture_default_str();
        sub->add_option("--alpha", base.alpha, "Dirichlet concentration")->capture_default_str();
        sub->add_option("--seed", base.seed, "Master seed")->capture_default_str();
        sub->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
        return sub;
    }

    int execute(CLI::App const& sub, unsigned threads, std::ostream& out, std::ostream& err)
    {
        GridSpec grid;
        grid.colours = colours;
        grid.sizes = sizes;
        grid.configs.clear();
        for (auto const& name : configs)
        {
            auto const c = parse_configuration(name);
            if (!c)
                throw CLI::ValidationError("configs", "unknown configuration '" + name + "'");
            grid.configs.push_back(*c);
        }
        grid.base = base;
        grid.base.threads = threads;
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
                    validate_scenario(cell);
                }
            }
        }

        fs::path const dir(out_dir);
        std::vector<std::string> details;
        auto const results = run_grid(grid, [&](ScenarioResult const& r) {
            std::string const name = fmt::format("details/c{}_k{}_{}.csv", r.config.c,
                                                 r.config.k, to_string(r.config.config));
            write_file(dir / name, [&](std::ostream& o) { write_replication_csv(o, r); });
            details.push_back(name);
            fmt::print(err, "{} c={} k={}: rmse {:.4f} acc. rate {:.4f}\n",
                       to_string(r.config.config), r.config.c, r.config.k, r.rmse,
                       r.mean_acceptance_rate);
        });
        write_file(dir / "grid.csv",
                   [&](std::ostream& o) { write_grid_csv(o, results, details); });
        write_file(dir / "grid.txt", [&](std::ostream& o) { write_grid_table(o, results); });
        write_manifest(dir / "manifest.ini", sub, base.seed, {});
        write_grid_table(out, results);
        return kSuccess;
    }
};

// summarize -----------------------------------------------------------------

struct SummarizeCommand
{
    std::vector<std::string> posteriors;
    std::string out;
    std::string kv;

    CLI::App* attach(CLI::App& app)
    {
        auto* sub = app.add_subcommand("summarize", "Summaries of posterior CSV files");
        sub->add_option("posterior", posteriors, "Posterior CSV files")->required();
        sub->add_option("--out", out, "Write the table here as well as to stdout");
        sub->add_option("--kv", kv, "Write key=value summaries here");
        return sub;
    }

    int execute(std::ostream& stdout_)
    {
        std::vector<SummaryBlock> blocks;
        std::vector<std::string> names;
        for (auto const& path : posteriors)
        {
            std::ifstream in(path);
            if (!in)
                throw IoError("cannot open " + path);
            std::vector<std::string> header;
            auto const draws = read_posterior_csv(in, &header);
            if (!names.empty() && header != names)
                throw IngestError(path + ": columns differ from " + posteriors.front());
            names = header;
            SummaryBlock block;
            block.summary = summarize_draws(draws);
            block.epsilon = std::numeric_limits<double>::quiet_NaN();
            blocks.push_back(std::move(block));
        }
        write_summary_table(stdout_, blocks, names);
        if (!out.empty())
            write_file(out, [&](std::ostream& o) { write_summary_table(o, blocks, names); });
        if (!kv.empty())
            write_file(kv, [&](std::ostream& o) { write_summary_kv(o, blocks, names); });
        return kSuccess;
    }
};

}  // namespace

int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Wallenius urn inference by approximate Bayesian computation", "wurn"};
    app.set_version_flag("--version", WURN_VERSION);
    app.set_config("--config", "", "Read options from a config file (e.g. a run manifest)");
    app.allow_config_extras(CLI::config_extras_mode::ignore);
    app.fallthrough();
    app.require_subcommand(1);

    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: WURN_THREADS or all cores)");

    SimulateCommand simulate;
    FitCommand fit;
    CalibrateCommand calibrate;
    BenchCommand bench;
    SummarizeCommand summarize;
    std::vector<CLI::App*> subs{simulate.attach(app), fit.attach(app), calibrate.attach(app),
                                bench.attach(app), summarize.attach(app)};
    for (auto* sub : subs)
        sub->configurable();

    try
    {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i)
            args.emplace_back(argv[i]);
        app.parse(args);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try
    {
        if (*subs[0])
            return simulate.execute(*subs[0], out);
        if (*subs[1])
            return fit.execute(*subs[1], threads, out, err);
        if (*subs[2])
            return calibrate.execute(*subs[2], threads, out, err);
        if (*subs[3])
            return bench.execute(*subs[3], threads, out, err);
        return summarize.execute(out);
    }
    catch (CLI::ValidationError const& e)
    {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    catch (BudgetExhausted const& e)
    {
        err << "error: " << e.what() << '\n';
        return kBudget;
    }
    catch (ValidationError const& e)
    {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    catch (IngestError const& e)
    {
        err << "error: " << e.what() << '\n';
        return kIngest;
    }
    catch (IoError const& e)
    {
        err << "error: " << e.what() << '\n';
        return kIo;
    }
}

}  // namespace wurn::cli

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "wurn/abc.hpp"
#include "wurn/csv.hpp"

namespace wurn {
namespace {

std::vector<std::string> column_names(std::vector<std::string> const& names, std::size_t c)
{
    if (names.size() == c)
        return names;
    std::vector<std::string> out;
    for (std::size_t j = 0; j < c; ++j)
        out.push_back(fmt::format("omega_{}", j + 1));
    return out;
}

}  // namespace

void write_posterior_csv(std::ostream& out, std::vector<std::vector<double>> const& draws,
                         std::vector<std::string> const& names)
{
    std::size_t const c = draws.empty() ? names.size() : draws.front().size();
    auto const header = column_names(names, c);
    for (std::size_t j = 0; j < c; ++j)
        out << (j ? "," : "") << csv::quote(header[j]);
    out << '\n';
    for (auto const& d : draws)
    {
        for (std::size_t j = 0; j < d.size(); ++j)
            fmt::print(out, "{}{:.17g}", j ? "," : "", d[j]);
        out << '\n';
    }
}

std::vector<std::vector<double>> read_posterior_csv(std::istream& in,
                                                    std::vector<std::string>* names)
{
    std::string line;
    if (!csv::next_line(in, line))
        throw IngestError("posterior file is empty");
    auto const header = csv::split(line);
    if (names)
        *names = header;
    std::vector<std::vector<double>> draws;
    std::size_t row = 1;
    while (csv::next_line(in, line))
    {
        ++row;
        auto const fields = csv::split(line);
        if (fields.size() != header.size())
            throw IngestError(fmt::format("posterior row {}: expected {} fields, got {}", row,
                                          header.size(), fields.size()));
        std::vector<double> d;
        d.reserve(fields.size());
        try
        {
            for (auto const& f : fields)
                d.push_back(csv::to_double(f));
        }
        catch (std::exception const& e)
        {
            throw IngestError(fmt::format("posterior row {}: {}", row, e.what()));
        }
        draws.push_back(std::move(d));
    }
    return draws;
}

void write_summary_table(std::ostream& out, std::vector<SummaryBlock> const& blocks,
                         std::vector<std::string> const& names)
{
    for (std::size_t b = 0; b < blocks.size(); ++b)
    {
        auto const& block = blocks[b];
        auto const& s = block.summary;
        std::size_t const c = s.mean.size();
        auto const cols = column_names(names, c);
        std::size_t width = 9;
        for (auto const& n : cols)
            width = std::max(width, n.size() + 2);

        if (b > 0)
            out << '\n';
        if (std::isnan(block.epsilon))
            fmt::print(out, "draws = {}\n", s.draws);
        else
            fmt::print(out, "epsilon = {:.3f}  accepted = {}  attempts = {}  "
                            "acceptance rate = {:.4f}\n",
                       block.epsilon, s.draws, block.attempts,
                       block.attempts ? static_cast<double>(s.draws) / block.attempts : 0.0);

        fmt::print(out, "{:<8}", "");
        for (auto const& n : cols)
            fmt::print(out, "{:>{}}", n, width);
        fmt::print(out, "\n{:<8}", "mean");
        for (double v : s.mean)
            fmt::print(out, "{:>{}.3f}", v, width);
        fmt::print(out, "\n{:<8}", "sd");
        for (double v : s.sd)
            fmt::print(out, "{:>{}}", fmt::format("({:.3f})", v), width);
        out << "\n\n";

        out << "Pr(omega_i > omega_j)\n";
        fmt::print(out, "{:<8}", "");
        for (std::size_t j = 0; j < c; ++j)
            fmt::print(out, "{:>8}", j + 1);
        out << '\n';
        for (std::size_t i = 0; i < c; ++i)
        {
            fmt::print(out, "{:<8}", i + 1);
            for (std::size_t j = 0; j < c; ++j)
            {
                if (i == j)
                    fmt::print(out, "{:>8}", "-");
                else
                    fmt::print(out, "{:>8.3f}", s.exceedance[i][j]);
            }
            out << '\n';
        }
        out << "order:";
        for (std::size_t j = 0; j < c; ++j)
            fmt::print(out, " {}-{}", j + 1, cols[j]);
        out << '\n';
    }
}

void write_summary_kv(std::ostream& out, std::vector<SummaryBlock> const& blocks,
                      std::vector<std::string> const& names)
{
    fmt::print(out, "blocks={}\n", blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
    {
        auto const& block = blocks[b];
        auto const& s = block.summary;
        auto const cols = column_names(names, s.mean.size());
        std::string const prefix = fmt::format("block{}.", b + 1);
        if (!std::isnan(block.epsilon))
            fmt::print(out, "{}epsilon={:.17g}\n", prefix, block.epsilon);
        fmt::print(out, "{}accepted={}\n", prefix, s.draws);
        if (block.attempts)
        {
            fmt::print(out, "{}attempts={}\n", prefix, block.attempts);
            fmt::print(out, "{}acceptance_rate={:.17g}\n", prefix,
                       static_cast<double>(s.draws) / block.attempts);
        }
        for (std::size_t j = 0; j < cols.size(); ++j)
            fmt::print(out, "{}mean.{}={:.17g}\n", prefix, cols[j], s.mean[j]);
        for (std::size_t j = 0; j < cols.size(); ++j)
            fmt::print(out, "{}sd.{}={:.17g}\n", prefix, cols[j], s.sd[j]);
        for (std::size_t i = 0; i < cols.size(); ++i)
        {
            for (std::size_t j = 0; j < cols.size(); ++j)
            {
                if (i != j)
                    fmt::print(out, "{}p.{}.{}={:.17g}\n", prefix, cols[i], cols[j],
                               s.exceedance[i][j]);
            }
        }
    }
}

}  // namespace wurn

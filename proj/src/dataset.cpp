#include "wurn/dataset.hpp"

#include <string>

#include "wurn/error.hpp"

namespace wurn {

std::vector<int> Dataset::draw_sizes() const
{
    std::vector<int> out;
    out.reserve(observations.size());
    for (auto const& obs : observations)
        out.push_back(obs.n);
    return out;
}

void validate_dataset(Dataset const& data)
{
    if (data.observations.empty())
        throw ValidationError("dataset has no observations");
    if (data.m.empty())
        throw ValidationError("dataset has no categories");
    if (!data.categories.empty() && data.categories.size() != data.m.size())
        throw ValidationError("dataset has " + std::to_string(data.categories.size())
                              + " category names for " + std::to_string(data.m.size())
                              + " categories");
    long long total = 0;
    for (std::size_t j = 0; j < data.m.size(); ++j)
    {
        if (data.m[j] < 0)
            throw ValidationError("negative multiplicity at index " + std::to_string(j + 1));
        total += data.m[j];
    }
    if (total == 0)
        throw ValidationError("empty urn: total number of balls is 0");

    for (std::size_t h = 0; h < data.observations.size(); ++h)
    {
        auto const& obs = data.observations[h];
        std::string const where = "observation " + std::to_string(h + 1) + ": ";
        if (obs.counts.size() != data.m.size())
            throw ValidationError(where + "dimension mismatch");
        if (obs.n < 1)
            throw ValidationError(where + "draw size must be positive");
        long long sum = 0;
        for (std::size_t j = 0; j < obs.counts.size(); ++j)
        {
            if (obs.counts[j] < 0 || obs.counts[j] > data.m[j])
                throw ValidationError(where + "count " + std::to_string(obs.counts[j])
                                      + " infeasible for category "
                                      + std::to_string(j + 1) + " with "
                                      + std::to_string(data.m[j]) + " items");
            sum += obs.counts[j];
        }
        if (sum != obs.n)
            throw ValidationError(where + "counts sum to " + std::to_string(sum)
                                  + " but n = " + std::to_string(obs.n));
    }
}

}  // namespace wurn

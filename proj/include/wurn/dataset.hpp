#pragma once

#include <string>
#include <vector>

#include "wurn/urn.hpp"

namespace wurn {

/// Independent draws from one urn; respondents may differ in draw size.
struct Dataset
{
    std::vector<FrequencyVector> observations;
    std::vector<int> m;                   // multiplicities shared by every draw
    std::vector<std::string> categories;  // optional column names

    int colours() const { return static_cast<int>(m.size()); }
    std::size_t size() const { return observations.size(); }

    /// Draw size of each respondent, in order.
    std::vector<int> draw_sizes() const;
};

/// Throws ValidationError unless the dataset is non-empty and every
/// observation is a feasible draw from an urn with multiplicities m.
void validate_dataset(Dataset const& data);

}  // namespace wurn

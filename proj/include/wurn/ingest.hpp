#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wurn/dataset.hpp"

namespace wurn {

/// Categories ordered from least to most general, plus tags to ignore.
struct PriorityOrder
{
    std::vector<std::string> order;
    std::vector<std::string> excluded;
};

/// One category name per line; '#' starts a comment; a leading '!' marks a
/// tag that is ignored when resolving multi-category items.
PriorityOrder parse_priority_order(std::istream& in);
PriorityOrder load_priority_order(std::filesystem::path const& path);

/// Assignment of items (balls) to categories (colours).
struct CategoryMap
{
    std::vector<std::string> categories;
    std::map<std::string, std::string> item_to_category;
    /// Empty unless built with a priority order; then equal to `categories`.
    std::vector<std::string> priority_order;
    /// Items whose every tag was excluded. Records for them are skipped.
    std::set<std::string> excluded_items;

    int colours() const { return static_cast<int>(categories.size()); }
    /// Number of items per category, in category order.
    std::vector<int> multiplicities() const;
    /// Position of a category, or -1.
    int category_index(std::string const& name) const;
};

/*!
 * Read an `item,category` CSV (first row is a header).
 *
 * Without a priority order every item must appear once and categories are
 * listed in order of first appearance. With one, an item may carry several
 * categories and is assigned to the least general of them; categories follow
 * the priority order and tags outside it are errors unless excluded.
 */
CategoryMap parse_category_map(std::istream& in, PriorityOrder const* priority = nullptr);
CategoryMap load_category_map(std::filesystem::path const& path,
                              PriorityOrder const* priority = nullptr);

/// Build a map from a MovieLens `movies.csv` (movieId,title,genres with
/// '|'-separated genres).
CategoryMap load_movielens_genres(std::filesystem::path const& path,
                                  PriorityOrder const& priority);

struct RatingRecord
{
    std::string user;
    std::string item;
    double rating = 0.0;
};

struct RatingScale
{
    double min = 0.5;
    double max = 5.0;
};

/// Read a `user,item,rating[,timestamp]` CSV with a header row.
std::vector<RatingRecord> parse_ratings(std::istream& in, RatingScale scale = {});
std::vector<RatingRecord> load_ratings(std::filesystem::path const& path,
                                       RatingScale scale = {});

/// Respondents in input order with their listed items.
using PreferenceLists = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// Read a `respondent,item` CSV with a header row.
PreferenceLists parse_preference_lists(std::istream& in);
PreferenceLists load_preference_lists(std::filesystem::path const& path);

/// Dataset produced by ingestion, plus what was left out and why.
struct IngestReport
{
    Dataset dataset;
    std::size_t dropped_respondents = 0;
    std::size_t skipped_records = 0;
    std::vector<std::string> warnings;
};

/*!
 * One observation per user: per category, the number of items rated at
 * least `threshold`. Users with no such item are dropped. Users keep their
 * order of first appearance.
 */
IngestReport ratings_to_frequencies(std::vector<RatingRecord> const& records,
                                    CategoryMap const& map, double threshold,
                                    RatingScale scale = {});

struct ListLengthBounds
{
    int min = 10;
    int max = 20;
};

/// One observation per respondent with n equal to the list length. Lengths
/// outside `bounds` produce warnings only.
IngestReport preference_lists_to_frequencies(PreferenceLists const& lists,
                                             CategoryMap const& map,
                                             ListLengthBounds bounds = {});

/*!
 * Frequency CSV:
 *
 *     #m=m_1,...,m_c
 *     n,<category 1>,...,<category c>
 *     n_1,x_11,...,x_1c
 *
 * Unnamed categories are written as cat_1..cat_c.
 */
void write_frequency_csv(std::ostream& out, Dataset const& data);
Dataset read_frequency_csv(std::istream& in);
Dataset load_frequency_csv(std::filesystem::path const& path);

}  // namespace wurn

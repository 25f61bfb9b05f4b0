#include "wurn/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "wurn/csv.hpp"
#include "wurn/error.hpp"

namespace wurn {
namespace {

std::ifstream open_input(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    return in;
}

std::string trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos)
        return {};
    auto const last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

/// Split a CSV record and check it has at least `min_fields` fields.
std::vector<std::string> fields_of(std::string const& line, std::size_t row,
                                   std::size_t min_fields, char const* what)
{
    std::vector<std::string> fields;
    try
    {
        fields = csv::split(line);
    }
    catch (std::exception const& e)
    {
        throw IngestError(fmt::format("{} row {}: {}", what, row, e.what()));
    }
    if (fields.size() < min_fields)
        throw IngestError(fmt::format("{} row {}: expected at least {} fields, got {}", what,
                                      row, min_fields, fields.size()));
    for (auto& f : fields)
        f = trim(f);
    return fields;
}

std::string default_name(std::size_t j)
{
    return fmt::format("cat_{}", j + 1);
}

}  // namespace

// Priority order -----------------------------------------------------------

PriorityOrder parse_priority_order(std::istream& in)
{
    PriorityOrder out;
    std::set<std::string> seen;
    std::string line;
    while (csv::next_line(in, line))
    {
        std::string name = trim(line);
        if (name.empty() || name.front() == '#')
            continue;
        bool const excluded = name.front() == '!';
        if (excluded)
            name = trim(std::string_view(name).substr(1));
        if (name.empty())
            continue;
        if (!seen.insert(name).second)
            throw IngestError("priority order lists '" + name + "' twice");
        (excluded ? out.excluded : out.order).push_back(name);
    }
    if (out.order.empty())
        throw IngestError("priority order is empty");
    return out;
}

PriorityOrder load_priority_order(std::filesystem::path const& path)
{
    auto in = open_input(path);
    return parse_priority_order(in);
}

// Category map -------------------------------------------------------------

std::vector<int> CategoryMap::multiplicities() const
{
    std::vector<int> m(categories.size(), 0);
    for (auto const& [item, category] : item_to_category)
        ++m[static_cast<std::size_t>(category_index(category))];
    return m;
}

int CategoryMap::category_index(std::string const& name) const
{
    auto const it = std::find(categories.begin(), categories.end(), name);
    return it == categories.end() ? -1 : static_cast<int>(it - categories.begin());
}

namespace {

/// Accumulates (item, tag) pairs and resolves them into a CategoryMap.
class CategoryMapBuilder
{
  public:
    explicit CategoryMapBuilder(PriorityOrder const* priority) : priority_(priority)
    {
        if (priority_)
        {
            for (std::size_t r = 0; r < priority_->order.size(); ++r)
                rank_[priority_->order[r]] = r;
            excluded_.insert(priority_->excluded.begin(), priority_->excluded.end());
        }
    }

    void add(std::string const& item, std::string const& tag, std::size_t row)
    {
        if (item.empty())
            throw IngestError(fmt::format("category map row {}: empty item id", row));
        if (tag.empty())
            throw IngestError(fmt::format("category map row {}: empty category", row));
        if (!priority_)
        {
            if (!best_.emplace(item, tag).second)
                throw IngestError(fmt::format("category map row {}: duplicate item id '{}'",
                                              row, item));
            if (std::find(first_seen_.begin(), first_seen_.end(), tag) == first_seen_.end())
                first_seen_.push_back(tag);
            return;
        }
        seen_items_.insert(item);
        if (excluded_.count(tag))
            return;
        auto const r = rank_.find(tag);
        if (r == rank_.end())
            throw IngestError(fmt::format("category map row {}: unknown category '{}'", row, tag));
        auto [it, inserted] = best_.emplace(item, tag);
        if (!inserted && r->second < rank_.at(it->second))
            it->second = tag;
    }

    CategoryMap finish()
    {
        CategoryMap map;
        if (priority_)
        {
            map.categories = priority_->order;
            map.priority_order = priority_->order;
            for (auto const& item : seen_items_)
            {
                if (!best_.count(item))
                    map.excluded_items.insert(item);
            }
        }
        else
        {
            map.categories = first_seen_;
        }
        map.item_to_category = std::move(best_);
        if (map.item_to_category.empty())
            throw IngestError("category map has no items");
        return map;
    }

  private:
    PriorityOrder const* priority_;
    std::map<std::string, std::size_t> rank_;
    std::set<std::string> excluded_;
    std::map<std::string, std::string> best_;
    std::vector<std::string> first_seen_;
    std::set<std::string> seen_items_;
};

}  // namespace

CategoryMap parse_category_map(std::istream& in, PriorityOrder const* priority)
{
    std::string line;
    if (!csv::next_line(in, line))
        throw IngestError("category map is empty");
    CategoryMapBuilder builder(priority);
    std::size_t row = 1;
    while (csv::next_line(in, line))
    {
        ++row;
        auto const fields = fields_of(line, row, 2, "category map");
        builder.add(fields[0], fields[1], row);
    }
    return builder.finish();
}

CategoryMap load_category_map(std::filesystem::path const& path, PriorityOrder const* priority)
{
    auto in = open_input(path);
    return parse_category_map(in, priority);
}

CategoryMap load_movielens_genres(std::filesystem::path const& path,
                                  PriorityOrder const& priority)
{
    auto in = open_input(path);
    std::string line;
    if (!csv::next_line(in, line))
        throw IngestError("movies file is empty");
    CategoryMapBuilder builder(&priority);
    std::size_t row = 1;
    while (csv::next_line(in, line))
    {
        ++row;
        auto const fields = fields_of(line, row, 3, "movies");
        std::stringstream genres(fields.back());
        std::string genre;
        while (std::getline(genres, genre, '|'))
            builder.add(fields[0], trim(genre), row);
    }
    return builder.finish();
}

// Ratings ------------------------------------------------------------------

std::vector<RatingRecord> parse_ratings(std::istream& in, RatingScale scale)
{
    std::string line;
    if (!csv::next_line(in, line))
        throw IngestError("ratings file is empty");
    std::vector<RatingRecord> out;
    std::size_t row = 1;
    while (csv::next_line(in, line))
    {
        ++row;
        auto const fields = fields_of(line, row, 3, "ratings");
        RatingRecord rec{fields[0], fields[1], 0.0};
        try
        {
            rec.rating = csv::to_double(fields[2]);
        }
        catch (std::exception const&)
        {
            throw IngestError(fmt::format("ratings row {}: bad rating '{}'", row, fields[2]));
        }
        if (!(rec.rating >= scale.min && rec.rating <= scale.max))
            throw IngestError(fmt::format("ratings row {}: rating {} outside [{}, {}]", row,
                                          rec.rating, scale.min, scale.max));
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<RatingRecord> load_ratings(std::filesystem::path const& path, RatingScale scale)
{
    auto in = open_input(path);
    return parse_ratings(in, scale);
}

IngestReport ratings_to_frequencies(std::vector<RatingRecord> const& records,
                                    CategoryMap const& map, double threshold,
                                    RatingScale scale)
{
    if (!(threshold >= scale.min && threshold <= scale.max))
        throw ValidationError(fmt::format("threshold {} outside rating scale [{}, {}]",
                                          threshold, scale.min, scale.max));
    std::size_t const c = map.categories.size();
    std::unordered_map<std::string, std::size_t> category_pos;
    for (std::size_t j = 0; j < c; ++j)
        category_pos[map.categories[j]] = j;

    IngestReport report;
    std::vector<std::string> users;
    std::unordered_map<std::string, std::vector<int>> counts;
    std::set<std::pair<std::string, std::string>> seen;
    for (auto const& rec : records)
    {
        if (!(rec.rating >= scale.min && rec.rating <= scale.max))
            throw IngestError(fmt::format("rating {} by user {} outside scale", rec.rating,
                                          rec.user));
        if (map.excluded_items.count(rec.item))
        {
            ++report.skipped_records;
            continue;
        }
        auto const it = map.item_to_category.find(rec.item);
        if (it == map.item_to_category.end())
            throw IngestError("unmapped item id '" + rec.item + "'");
        if (!seen.emplace(rec.user, rec.item).second)
            throw IngestError("user '" + rec.user + "' rated item '" + rec.item + "' twice");
        auto [slot, fresh] = counts.try_emplace(rec.user, std::vector<int>(c, 0));
        if (fresh)
            users.push_back(rec.user);
        if (rec.rating >= threshold)
            ++slot->second[category_pos.at(it->second)];
    }

    report.dataset.m = map.multiplicities();
    report.dataset.categories = map.categories;
    for (auto const& user : users)
    {
        auto obs = FrequencyVector::from_counts(counts.at(user));
        if (obs.n == 0)
        {
            ++report.dropped_respondents;
            continue;
        }
        report.dataset.observations.push_back(std::move(obs));
    }
    if (report.dropped_respondents > 0)
        report.warnings.push_back(fmt::format("dropped {} users with no rating >= {}",
                                              report.dropped_respondents, threshold));
    if (report.skipped_records > 0)
        report.warnings.push_back(fmt::format("skipped {} ratings of excluded items",
                                              report.skipped_records));
    if (report.dataset.observations.empty())
        throw IngestError("no user has a rating at or above the threshold");
    validate_dataset(report.dataset);
    return report;
}

// Preference lists ---------------------------------------------------------

PreferenceLists parse_preference_lists(std::istream& in)
{
    std::string line;
    if (!csv::next_line(in, line))
        throw IngestError("preference file is empty");
    PreferenceLists out;
    std::unordered_map<std::string, std::size_t> position;
    std::size_t row = 1;
    while (csv::next_line(in, line))
    {
        ++row;
        auto const fields = fields_of(line, row, 2, "preferences");
        auto [it, fresh] = position.try_emplace(fields[0], out.size());
        if (fresh)
            out.emplace_back(fields[0], std::vector<std::string>{});
        out[it->second].second.push_back(fields[1]);
    }
    return out;
}

PreferenceLists load_preference_lists(std::filesystem::path const& path)
{
    auto in = open_input(path);
    return parse_preference_lists(in);
}

IngestReport preference_lists_to_frequencies(PreferenceLists const& lists,
                                             CategoryMap const& map, ListLengthBounds bounds)
{
    std::size_t const c = map.categories.size();
    std::unordered_map<std::string, std::size_t> category_pos;
    for (std::size_t j = 0; j < c; ++j)
        category_pos[map.categories[j]] = j;
    std::vector<int> const m = map.multiplicities();

    IngestReport report;
    report.dataset.m = m;
    report.dataset.categories = map.categories;
    std::size_t short_or_long = 0;
    for (auto const& [respondent, items] : lists)
    {
        if (items.empty())
            throw IngestError("respondent '" + respondent + "' has an empty list");
        std::vector<int> counts(c, 0);
        std::unordered_set<std::string> seen;
        for (auto const& item : items)
        {
            if (!seen.insert(item).second)
                throw IngestError("respondent '" + respondent + "' lists '" + item + "' twice");
            if (map.excluded_items.count(item))
            {
                ++report.skipped_records;
                continue;
            }
            auto const it = map.item_to_category.find(item);
            if (it == map.item_to_category.end())
                throw IngestError("unmapped item id '" + item + "'");
            std::size_t const j = category_pos.at(it->second);
            if (++counts[j] > m[j])
                throw IngestError(fmt::format("respondent '{}' lists {} items in '{}', which "
                                              "has only {}",
                                              respondent, counts[j], map.categories[j], m[j]));
        }
        auto obs = FrequencyVector::from_counts(std::move(counts));
        if (obs.n == 0)
        {
            ++report.dropped_respondents;
            continue;
        }
        if (obs.n < bounds.min || obs.n > bounds.max)
            ++short_or_long;
        report.dataset.observations.push_back(std::move(obs));
    }
    if (short_or_long > 0)
        report.warnings.push_back(fmt::format("{} respondents listed fewer than {} or more "
                                              "than {} items",
                                              short_or_long, bounds.min, bounds.max));
    if (report.dropped_respondents > 0)
        report.warnings.push_back(fmt::format("dropped {} respondents with only excluded items",
                                              report.dropped_respondents));
    if (report.dataset.observations.empty())
        throw IngestError("no respondents");
    validate_dataset(report.dataset);
    return report;
}

// Frequency CSV ------------------------------------------------------------

void write_frequency_csv(std::ostream& out, Dataset const& data)
{
    out << "#m=";
    for (std::size_t j = 0; j < data.m.size(); ++j)
        out << (j ? "," : "") << data.m[j];
    out << "\nn";
    for (std::size_t j = 0; j < data.m.size(); ++j)
        out << ',' << csv::quote(data.categories.empty() ? default_name(j) : data.categories[j]);
    out << '\n';
    for (auto const& obs : data.observations)
    {
        out << obs.n;
        for (int x : obs.counts)
            out << ',' << x;
        out << '\n';
    }
}

Dataset read_frequency_csv(std::istream& in)
{
    std::string line;
    if (!csv::next_line(in, line) || line.rfind("#m=", 0) != 0)
        throw IngestError("frequency file must start with a '#m=' line");
    Dataset data;
    try
    {
        for (auto const& f : csv::split(line.substr(3)))
            data.m.push_back(csv::to_int(trim(f)));
    }
    catch (std::invalid_argument const& e)
    {
        throw IngestError(std::string("bad multiplicity line: ") + e.what());
    }
    std::size_t const c = data.m.size();

    if (!csv::next_line(in, line))
        throw IngestError("frequency file has no header");
    auto const header = fields_of(line, 2, c + 1, "frequency");
    if (header.size() != c + 1 || header[0] != "n")
        throw IngestError(fmt::format("frequency header must be n plus {} category columns", c));
    bool all_default = true;
    for (std::size_t j = 0; j < c; ++j)
        all_default = all_default && header[j + 1] == default_name(j);
    if (!all_default)
        data.categories.assign(header.begin() + 1, header.end());

    std::size_t row = 2;
    while (csv::next_line(in, line))
    {
        ++row;
        auto const fields = fields_of(line, row, c + 1, "frequency");
        if (fields.size() != c + 1)
            throw IngestError(fmt::format("frequency row {}: expected {} fields", row, c + 1));
        FrequencyVector obs;
        try
        {
            obs.n = csv::to_int(fields[0]);
            for (std::size_t j = 0; j < c; ++j)
                obs.counts.push_back(csv::to_int(fields[j + 1]));
        }
        catch (std::invalid_argument const& e)
        {
            throw IngestError(fmt::format("frequency row {}: {}", row, e.what()));
        }
        data.observations.push_back(std::move(obs));
    }
    try
    {
        validate_dataset(data);
    }
    catch (ValidationError const& e)
    {
        throw IngestError(std::string("frequency file: ") + e.what());
    }
    return data;
}

Dataset load_frequency_csv(std::filesystem::path const& path)
{
    auto in = open_input(path);
    return read_frequency_csv(in);
}

}  // namespace wurn

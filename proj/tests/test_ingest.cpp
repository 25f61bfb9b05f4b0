#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "wurn/error.hpp"
#include "wurn/ingest.hpp"

using namespace wurn;

namespace {

std::filesystem::path const kDataDir = WURN_DATA_DIR;

CategoryMap map_from(std::string const& text, PriorityOrder const* priority = nullptr)
{
    std::istringstream in(text);
    return parse_category_map(in, priority);
}

PriorityOrder genre_priority()
{
    return load_priority_order(kDataDir / "movielens_genre_priority.txt");
}

}  // namespace

TEST_CASE("bundled journals map")
{
    auto const map = load_category_map(kDataDir / "journals_category_map.csv");
    CHECK(map.colours() == 5);
    CHECK(map.categories[0] == "Methodology");
    CHECK(map.categories[1] == "Probability");
    CHECK(map.multiplicities() == std::vector<int>{45, 23, 34, 9, 13});
    auto const m = map.multiplicities();
    CHECK(std::accumulate(m.begin(), m.end(), 0) == 124);
}

TEST_CASE("category map errors and trivial cases")
{
    CHECK_THROWS_AS(map_from(""), IngestError);
    CHECK_THROWS_AS(map_from("item,category\n"), IngestError);
    CHECK_THROWS_AS(map_from("item,category\na,X\na,Y\n"), IngestError);
    CHECK_THROWS_AS(map_from("item,category\na\n"), IngestError);

    auto const map = map_from("item,category\na,X\nb,Y\nc,Z\n");
    CHECK(map.multiplicities() == std::vector<int>{1, 1, 1});
    CHECK(map.category_index("Y") == 1);
    CHECK(map.category_index("W") == -1);
    CHECK_THROWS_AS(load_category_map(kDataDir / "does_not_exist.csv"), IoError);
}

TEST_CASE("genre priority fixture")
{
    auto const p = genre_priority();
    REQUIRE(p.order.size() == 18);
    CHECK(p.order.front() == "Animation");
    CHECK(p.order.back() == "Drama");
    CHECK(std::find(p.excluded.begin(), p.excluded.end(), "(no genres listed)")
          != p.excluded.end());
}

TEST_CASE("multi-category items resolve to the least general category")
{
    auto const p = genre_priority();
    auto const map = map_from("item,category\n1,Drama\n1,Comedy\n2,Drama\n3,IMAX\n", &p);
    CHECK(map.item_to_category.at("1") == "Comedy");
    CHECK(map.item_to_category.at("2") == "Drama");
    CHECK(map.excluded_items.count("3") == 1);
    CHECK(map.categories == p.order);
    CHECK(map.priority_order == p.order);
    CHECK_THROWS_AS(map_from("item,category\n1,Opera\n", &p), IngestError);

    auto const dir = std::filesystem::temp_directory_path() / "wurn_ingest_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "movies.csv");
        out << "movieId,title,genres\n"
            << "1,\"Toy Story (1995)\",Adventure|Animation|Children|Comedy|Fantasy\n"
            << "2,Heat,Action|Crime|Thriller\n"
            << "3,Nothing,(no genres listed)\n";
    }
    auto const movies = load_movielens_genres(dir / "movies.csv", p);
    CHECK(movies.item_to_category.at("1") == "Animation");
    CHECK(movies.item_to_category.at("2") == "Crime");
    CHECK(movies.excluded_items == std::set<std::string>{"3"});
    std::filesystem::remove_all(dir);
}

TEST_CASE("ratings_to_frequencies")
{
    auto const map = map_from("item,category\nd1,Drama\nd2,Drama\nc1,Comedy\n");
    int const drama = map.category_index("Drama");

    SUBCASE("single good rating")
    {
        auto const r = ratings_to_frequencies({{"u", "d1", 4.0}}, map, 3.5);
        REQUIRE(r.dataset.size() == 1);
        CHECK(r.dataset.observations[0].n == 1);
        CHECK(r.dataset.observations[0].counts[drama] == 1);
        CHECK(r.dataset.m == std::vector<int>{2, 1});
    }
    SUBCASE("threshold is inclusive and empty users are dropped")
    {
        auto const r = ratings_to_frequencies(
            {{"u", "d1", 3.5}, {"v", "d1", 3.0}, {"v", "c1", 1.0}, {"w", "c1", 5.0}}, map,
            3.5);
        CHECK(r.dataset.size() == 2);
        CHECK(r.dropped_respondents == 1);
        CHECK(r.warnings.size() == 1);
    }
    SUBCASE("all users below threshold")
    {
        CHECK_THROWS_AS(ratings_to_frequencies({{"u", "d1", 1.0}}, map, 3.5), IngestError);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_WITH_AS(ratings_to_frequencies({{"u", "zz", 4.0}}, map, 3.5),
                             doctest::Contains("zz"), IngestError);
        CHECK_THROWS_AS(ratings_to_frequencies({{"u", "d1", 4.0}, {"u", "d1", 4.5}}, map, 3.5),
                        IngestError);
        CHECK_THROWS_AS(ratings_to_frequencies({{"u", "d1", 4.0}}, map, 7.0), ValidationError);
    }
    SUBCASE("per-user counts do not depend on record order")
    {
        std::vector<RatingRecord> recs{
            {"a", "d1", 4.0}, {"b", "c1", 4.0}, {"a", "c1", 5.0}, {"b", "d2", 2.0},
            {"a", "d2", 3.5}, {"b", "d1", 4.5}};
        auto const base = ratings_to_frequencies(recs, map, 3.5).dataset;
        std::vector<RatingRecord> shuffled{recs[0], recs[4], recs[5], recs[2], recs[1], recs[3]};
        auto const other = ratings_to_frequencies(shuffled, map, 3.5).dataset;
        CHECK(base.observations == other.observations);
        CHECK(base.observations[0].counts == std::vector<int>{2, 1});
    }
}

TEST_CASE("parse_ratings")
{
    std::istringstream in("userId,movieId,rating,timestamp\n1,10,4.5,999\n2,11,0.5,1\n");
    auto const recs = parse_ratings(in);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].user == "1");
    CHECK(recs[0].item == "10");
    CHECK(recs[0].rating == 4.5);

    std::istringstream bad("userId,movieId,rating\n1,10,6\n");
    CHECK_THROWS_AS(parse_ratings(bad), IngestError);
    std::istringstream junk("userId,movieId,rating\n1,10,good\n");
    CHECK_THROWS_AS(parse_ratings(junk), IngestError);
}

TEST_CASE("preference_lists_to_frequencies")
{
    auto const map = load_category_map(kDataDir / "journals_category_map.csv");
    std::vector<std::string> probability;
    for (auto const& [item, cat] : map.item_to_category)
    {
        if (cat == "Probability")
            probability.push_back(item);
    }

    SUBCASE("ten probability journals")
    {
        PreferenceLists lists{{"r1", {probability.begin(), probability.begin() + 10}}};
        auto const r = preference_lists_to_frequencies(lists, map);
        CHECK(r.dataset.observations[0].counts == std::vector<int>{0, 10, 0, 0, 0});
        CHECK(r.dataset.observations[0].n == 10);
        CHECK(r.warnings.empty());
    }
    SUBCASE("short list is only a warning")
    {
        PreferenceLists lists{{"r1", {probability[0], probability[1]}}};
        auto const r = preference_lists_to_frequencies(lists, map);
        CHECK(r.dataset.size() == 1);
        CHECK(r.warnings.size() == 1);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(preference_lists_to_frequencies({{"r", {probability[0], probability[0]}}},
                                                        map),
                        IngestError);
        CHECK_THROWS_AS(preference_lists_to_frequencies({{"r", {"Nope"}}}, map), IngestError);
        CHECK_THROWS_AS(preference_lists_to_frequencies({{"r", {}}}, map), IngestError);

        auto const tiny = map_from("item,category\na,X\nb,Y\n");
        auto const r = preference_lists_to_frequencies({{"r", {"a", "b"}}}, tiny, {1, 2});
        CHECK(r.dataset.observations[0].counts == std::vector<int>{1, 1});
    }
    SUBCASE("many respondents keep their order")
    {
        PreferenceLists lists;
        for (int h = 0; h < 174; ++h)
            lists.push_back({"r" + std::to_string(h), {probability[h % 23]}});
        auto const r = preference_lists_to_frequencies(lists, map, {1, 20});
        CHECK(r.dataset.size() == 174);
    }
}

TEST_CASE("parse_preference_lists groups by respondent")
{
    std::istringstream in("respondent,item\nb,x\na,y\nb,z\n");
    auto const lists = parse_preference_lists(in);
    REQUIRE(lists.size() == 2);
    CHECK(lists[0].first == "b");
    CHECK(lists[0].second == std::vector<std::string>{"x", "z"});
    CHECK(lists[1].second == std::vector<std::string>{"y"});
}

TEST_CASE("frequency CSV round trip")
{
    Dataset d;
    d.m = {3, 2, 4};
    d.observations = {FrequencyVector::from_counts({1, 0, 2}),
                      FrequencyVector::from_counts({3, 2, 4})};
    for (bool named : {false, true})
    {
        if (named)
            d.categories = {"A", "B,with comma", "C"};
        std::stringstream buf;
        write_frequency_csv(buf, d);
        auto const back = read_frequency_csv(buf);
        CHECK(back.m == d.m);
        CHECK(back.categories == d.categories);
        CHECK(back.observations == d.observations);

        std::stringstream again;
        write_frequency_csv(again, back);
        std::stringstream first;
        write_frequency_csv(first, d);
        CHECK(again.str() == first.str());
    }

    std::istringstream missing("n,cat_1\n1,1\n");
    CHECK_THROWS_AS(read_frequency_csv(missing), IngestError);
    std::istringstream infeasible("#m=1,1\nn,cat_1,cat_2\n2,2,0\n");
    CHECK_THROWS_AS(read_frequency_csv(infeasible), IngestError);
    std::istringstream wrong_n("#m=2,2\nn,cat_1,cat_2\n3,1,1\n");
    CHECK_THROWS_AS(read_frequency_csv(wrong_n), IngestError);
}

#include "doctest.h"

#include <cmath>
#include <map>
#include <numeric>

#include "oracle.hpp"
#include "wurn/error.hpp"
#include "wurn/urn.hpp"

using namespace wurn;

namespace {

UrnSpec urn(std::vector<int> m, std::vector<double> omega)
{
    return UrnSpec{static_cast<int>(m.size()), std::move(m), std::move(omega)};
}

FrequencyVector fv(std::vector<int> counts)
{
    return FrequencyVector::from_counts(std::move(counts));
}

}  // namespace

TEST_CASE("validate_urn accepts valid and reports invalid specs")
{
    CHECK_NOTHROW(validate_urn(urn({2, 2}, {1, 1})));
    CHECK_THROWS_WITH_AS(validate_urn(urn({2, 2}, {0, 1})),
                         "non-positive weight at index 1", ValidationError);
    CHECK_THROWS_WITH_AS(validate_urn(urn({2, 2}, {1, -3})),
                         "non-positive weight at index 2", ValidationError);
    UrnSpec mismatch{3, {1, 2}, {1, 1, 1}};
    CHECK_THROWS_WITH_AS(validate_urn(mismatch),
                         doctest::Contains("dimension mismatch"), ValidationError);
    CHECK_THROWS_WITH_AS(validate_urn(urn({0, 0}, {1, 1})),
                         doctest::Contains("empty urn"), ValidationError);
    CHECK_THROWS_WITH_AS(validate_urn(urn({1, -1}, {1, 1})),
                         "negative multiplicity at index 2", ValidationError);
    CHECK_THROWS_AS(validate_urn(urn({1, 1}, {1, NAN})), ValidationError);
}

TEST_CASE("next_draw_probs follows the sequential draw rule")
{
    auto const p = next_draw_probs(urn({2, 2}, {2, 1}), DrawState{{0, 0}});
    CHECK(p[0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0));

    auto const sym = next_draw_probs(urn({5, 5}, {1, 1}), DrawState{{0, 0}});
    CHECK(sym[0] == 0.5);
    CHECK(sym[1] == 0.5);

    auto const after = next_draw_probs(urn({2, 2}, {2, 1}), DrawState{{1, 0}});
    CHECK(after[0] == doctest::Approx(0.5));
    CHECK(after[1] == doctest::Approx(0.5));

    auto const exhausted = next_draw_probs(urn({2, 3}, {5, 1}), DrawState{{2, 1}});
    CHECK(exhausted[0] == 0.0);
    CHECK(exhausted[1] == 1.0);

    CHECK_THROWS_WITH_AS(next_draw_probs(urn({1, 1}, {1, 1}), DrawState{{1, 1}}),
                         doctest::Contains("exhausted"), ValidationError);
}

TEST_CASE("next_draw_probs is a scale-invariant probability vector")
{
    RandomStream rng(101);
    for (int trial = 0; trial < 200; ++trial)
    {
        auto const u = test::random_small_urn(rng, 5, 6, 0.1, 10.0, false);
        DrawState state{std::vector<int>(u.spec.m.size())};
        for (std::size_t j = 0; j < state.drawn.size(); ++j)
            state.drawn[j] = static_cast<int>(rng.uniform() * (u.spec.m[j] + 1));
        if (state.drawn == u.spec.m)
            continue;
        auto const p = next_draw_probs(u.spec, state);
        double sum = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j)
        {
            REQUIRE(p[j] >= 0.0);
            REQUIRE((p[j] == 0.0) == (state.drawn[j] == u.spec.m[j]));
            sum += p[j];
        }
        REQUIRE(std::abs(sum - 1.0) <= 1e-12);

        for (double kappa : {1e-3, 0.1, 10.0, 1e3})
        {
            UrnSpec scaled = u.spec;
            for (auto& w : scaled.omega)
                w *= kappa;
            auto const q = next_draw_probs(scaled, state);
            for (std::size_t j = 0; j < p.size(); ++j)
                REQUIRE(std::abs(p[j] - q[j]) <= 1e-12);
        }
    }
}

TEST_CASE("sample_draw edge cases")
{
    RandomStream rng(1);
    for (int i = 0; i < 20; ++i)
        CHECK(sample_draw(urn({3, 3}, {1, 1}), 6, rng).counts == std::vector<int>{3, 3});
    CHECK(sample_draw(urn({1, 0}, {1, 1}), 1, rng).counts == std::vector<int>{1, 0});
    CHECK_THROWS_AS(sample_draw(urn({1, 1}, {1, 1}), 3, rng), ValidationError);
    CHECK_THROWS_AS(sample_draw(urn({1, 1}, {1, 1}), 0, rng), ValidationError);
}

TEST_CASE("sample_draw consumes one uniform per ball")
{
    RandomStream a(9);
    RandomStream b(9);
    sample_draw(urn({4, 4, 4}, {1, 2, 3}), 5, a);
    for (int i = 0; i < 5; ++i)
        b.uniform();
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("sample_draw frequencies match the exact distribution")
{
    auto const spec = urn({2, 2}, {2, 1});
    auto const exact = exact_pmf_by_enumeration(spec, 2);
    std::map<std::vector<int>, double> empirical;
    RandomStream rng(2024);
    constexpr int draws = 100000;
    for (int i = 0; i < draws; ++i)
        empirical[sample_draw(spec, 2, rng).counts] += 1.0 / draws;
    CHECK(empirical[{2, 0}] == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    double tv = 0.0;
    for (auto const& [x, p] : exact)
        tv += 0.5 * std::abs(p - empirical[x]);
    CHECK(tv < 0.01);
}

TEST_CASE("sampler agrees with the exact distribution on random small urns")
{
    RandomStream urns(77);
    for (int trial = 0; trial < 10; ++trial)
    {
        auto const u = test::random_small_urn(urns, 3, 4, 0.2, 5.0, false);
        auto const exact = exact_pmf_by_enumeration(u.spec, u.n);
        std::map<std::vector<int>, double> empirical;
        RandomStream rng(trial);
        constexpr int draws = 100000;
        for (int i = 0; i < draws; ++i)
            empirical[sample_draw(u.spec, u.n, rng).counts] += 1.0 / draws;
        double tv = 0.0;
        for (auto const& x : enumerate_support(u.spec, u.n))
        {
            double const p = exact.count(x.counts) ? exact.at(x.counts) : 0.0;
            tv += 0.5 * std::abs(p - empirical[x.counts]);
        }
        for (auto const& [x, p] : empirical)
            REQUIRE(exact.count(x));
        CHECK(tv < 0.01);
    }
}

TEST_CASE("wallenius_pmf examples")
{
    CHECK(wallenius_pmf(urn({2, 2}, {1, 1}), fv({1, 1}))
          == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(wallenius_pmf(urn({2, 2}, {2, 1}), fv({1, 1}))
          == doctest::Approx(3.0 / 5.0).epsilon(1e-10));
    CHECK(wallenius_pmf(urn({2, 2}, {2, 1}), fv({2, 0}))
          == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(wallenius_pmf(urn({2, 2}, {2, 1}), fv({0, 2}))
          == doctest::Approx(1.0 / 15.0).epsilon(1e-10));
    // Infeasible: more balls of colour 1 than exist.
    CHECK(wallenius_pmf(urn({2, 2}, {2, 1}), fv({3, -1})) == 0.0);
    // Exhaustive draw.
    CHECK(wallenius_pmf(urn({2, 3}, {2, 1}), fv({2, 3})) == 1.0);
    CHECK(wallenius_pmf(urn({2, 3}, {2, 1}), fv({3, 2})) == 0.0);
}

TEST_CASE("wallenius_pmf input errors")
{
    CHECK_THROWS_WITH_AS(wallenius_pmf(urn({2, 2}, {1, 1}), fv({1, 1, 0})),
                         doctest::Contains("dimension mismatch"), ValidationError);
    CHECK_THROWS_WITH_AS(wallenius_pmf(urn({2, 2}, {1, 1}), FrequencyVector{{1, 1}, 3}),
                         doctest::Contains("sum"), ValidationError);
    CHECK_THROWS_AS(hypergeom_pmf(urn({2, 2}, {1, 1}), FrequencyVector{{1, 0}, 2}),
                    ValidationError);
}

TEST_CASE("hypergeom_pmf examples")
{
    CHECK(hypergeom_pmf(urn({2, 2}, {1, 1}), fv({1, 1}))
          == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(hypergeom_pmf(urn({5}, {1}), fv({3})) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(hypergeom_pmf(urn({3, 3}, {1, 1}), fv({3, 0}))
          == doctest::Approx(1.0 / 20.0).epsilon(1e-13));
    CHECK(hypergeom_pmf(urn({3, 3}, {1, 1}), fv({4, -1})) == 0.0);
}

TEST_CASE("hypergeom_pmf matches exact integer arithmetic")
{
    RandomStream rng(5);
    for (int trial = 0; trial < 100; ++trial)
    {
        auto const u = test::random_small_urn(rng, 4, 6, 1.0, 1.0, true);
        for (auto const& x : enumerate_support(u.spec, u.n))
            REQUIRE(std::abs(hypergeom_pmf(u.spec, x)
                             - test::hypergeom_exact(u.spec.m, x.counts))
                    <= 1e-13);
    }
}

TEST_CASE("enumerate_support lists the feasible vectors in lexicographic order")
{
    auto const two = enumerate_support(urn({2, 2}, {1, 1}), 2);
    REQUIRE(two.size() == 3);
    CHECK(two[0].counts == std::vector<int>{0, 2});
    CHECK(two[1].counts == std::vector<int>{1, 1});
    CHECK(two[2].counts == std::vector<int>{2, 0});

    auto const full = enumerate_support(urn({1, 1, 1}, {1, 1, 1}), 3);
    REQUIRE(full.size() == 1);
    CHECK(full[0].counts == std::vector<int>{1, 1, 1});

    auto const unit = enumerate_support(urn({1, 1, 1}, {1, 1, 1}), 1);
    REQUIRE(unit.size() == 3);
    CHECK(unit[0].counts == std::vector<int>{0, 0, 1});
    CHECK(unit[2].counts == std::vector<int>{1, 0, 0});

    CHECK_THROWS_WITH_AS(enumerate_support(urn({50, 50, 50, 50}, {1, 1, 1, 1}), 100, 1000),
                         doctest::Contains("cap"), ValidationError);
    CHECK_THROWS_AS(enumerate_support(urn({1, 1}, {1, 1}), 3), ValidationError);
}

TEST_CASE("enumerated support matches brute-force filtering")
{
    RandomStream rng(8);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto const u = test::random_small_urn(rng, 4, 4, 1.0, 1.0, true);
        auto const support = enumerate_support(u.spec, u.n);
        // Count candidates in the full box with the right sum.
        std::size_t expected = 0;
        std::vector<int> x(u.spec.m.size(), 0);
        auto box = [&](auto&& self, std::size_t j) -> void {
            if (j == x.size())
            {
                expected += std::accumulate(x.begin(), x.end(), 0) == u.n;
                return;
            }
            for (int v = 0; v <= u.spec.m[j]; ++v)
            {
                x[j] = v;
                self(self, j + 1);
            }
        };
        box(box, 0);
        REQUIRE(support.size() == expected);
        for (std::size_t i = 1; i < support.size(); ++i)
            REQUIRE(support[i - 1].counts < support[i].counts);
    }
}

TEST_CASE("exact_pmf_by_enumeration examples")
{
    auto const p = exact_pmf_by_enumeration(urn({2, 2}, {2, 1}), 2);
    REQUIRE(p.size() == 3);
    CHECK(p.at({2, 0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(p.at({1, 1}) == doctest::Approx(3.0 / 5.0).epsilon(1e-14));
    CHECK(p.at({0, 2}) == doctest::Approx(1.0 / 15.0).epsilon(1e-14));

    auto const full = exact_pmf_by_enumeration(urn({2, 1, 3}, {0.3, 2, 7}), 6);
    REQUIRE(full.size() == 1);
    CHECK(full.at({2, 1, 3}) == doctest::Approx(1.0).epsilon(1e-14));

    for (int k : {1, 3, 5})
    {
        auto const spec = urn({k, k}, {1, 1});
        for (int n = 1; n <= 2 * k; ++n)
        {
            auto const dp = exact_pmf_by_enumeration(spec, n);
            for (auto const& x : enumerate_support(spec, n))
                REQUIRE(dp.at(x.counts)
                        == doctest::Approx(hypergeom_pmf(spec, x)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_WITH_AS(exact_pmf_by_enumeration(urn({50, 50, 50}, {1, 1, 1}), 60, 100),
                         doctest::Contains("cap"), ValidationError);
}

TEST_CASE("lattice oracle agrees with explicit path enumeration")
{
    RandomStream rng(13);
    for (int trial = 0; trial < 60; ++trial)
    {
        auto const u = test::random_small_urn(rng, 3, 3, 0.1, 10.0, false);
        auto const dp = exact_pmf_by_enumeration(u.spec, u.n);
        auto const paths = test::pmf_by_paths(u.spec.m, u.spec.omega, u.n);
        REQUIRE(dp.size() == paths.size());
        double total = 0.0;
        for (auto const& [x, p] : paths)
        {
            REQUIRE(std::abs(dp.at(x) - p) <= 1e-13);
            total += dp.at(x);
        }
        REQUIRE(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("wallenius_pmf agrees with the lattice oracle and normalizes")
{
    RandomStream rng(21);
    for (int trial = 0; trial < 40; ++trial)
    {
        auto const u = test::random_small_urn(rng, 4, 6, 0.1, 10.0, false);
        auto const dp = exact_pmf_by_enumeration(u.spec, u.n);
        double total = 0.0;
        for (auto const& x : enumerate_support(u.spec, u.n))
        {
            double const p = wallenius_pmf(u.spec, x);
            CAPTURE(trial);
            REQUIRE(std::abs(p - dp.at(x.counts)) <= 1e-8);
            total += p;
        }
        REQUIRE(std::abs(total - 1.0) <= 1e-8);
    }
}

TEST_CASE("wallenius_pmf reduces to the hypergeometric for uniform weights")
{
    RandomStream rng(34);
    for (int trial = 0; trial < 40; ++trial)
    {
        auto const u = test::random_small_urn(rng, 4, 6, 0.01, 100.0, true);
        for (auto const& x : enumerate_support(u.spec, u.n))
            REQUIRE(std::abs(wallenius_pmf(u.spec, x) - hypergeom_pmf(u.spec, x))
                    <= 1e-10);
    }
}

TEST_CASE("wallenius_pmf is invariant to rescaling the weights")
{
    RandomStream rng(55);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto const u = test::random_small_urn(rng, 4, 5, 0.1, 10.0, false);
        for (auto const& x : enumerate_support(u.spec, u.n))
        {
            double const base = wallenius_pmf(u.spec, x);
            for (double kappa : {1e-3, 0.1, 10.0, 1e3})
            {
                UrnSpec scaled = u.spec;
                for (auto& w : scaled.omega)
                    w *= kappa;
                REQUIRE(std::abs(wallenius_pmf(scaled, x) - base) <= 1e-10);
            }
        }
    }
}

TEST_CASE("wallenius_pmf stays accurate for a larger urn")
{
    // Two colours, 40 balls each, strong bias: compare with the lattice oracle.
    auto const spec = urn({40, 40}, {5.0, 1.0});
    auto const dp = exact_pmf_by_enumeration(spec, 30);
    double total = 0.0;
    for (auto const& x : enumerate_support(spec, 30))
    {
        double const p = wallenius_pmf(spec, x);
        CHECK(std::abs(p - dp.at(x.counts)) <= 1e-9);
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

#include "towerplan/errors.hpp"
#include "towerplan/recommend.hpp"
#include "towerplan/rng.hpp"
#include "towerplan/scenario.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace towerplan;

namespace {

// Flat rural world so oracle RSSI is pure distance arithmetic.
Scenario uniform_scenario(const GridSpec& grid) {
    Scenario s;
    s.grid = grid;
    s.seed = 0;
    s.elevation_m = Eigen::VectorXd::Zero(grid.point_count());
    s.clutter.assign(grid.point_count(), Clutter::rural);
    s.pop_density = Eigen::VectorXd::Zero(grid.point_count());
    return s;
}

CoverageEvaluator oracle_evaluator(const Scenario& scenario) {
    return [&scenario](const SiteConfiguration& config) {
        return oracle_coverage(config, scenario, RadioParams{});
    };
}

Cluster cluster_of(const std::vector<int>& members, const GridSpec& grid, int id = 0) {
    Cluster c;
    c.id = id;
    c.members = members;
    std::sort(c.members.begin(), c.members.end());
    Eigen::Vector2d sum{0.0, 0.0};
    for (int p : c.members) {
        const auto [row, col] = index_to_coords(p, grid);
        sum += Eigen::Vector2d(row, col);
    }
    c.centroid_rc = sum / static_cast<double>(c.members.size());
    return c;
}

std::vector<CandidateSite> plain_candidates(const std::vector<int>& indices) {
    std::vector<CandidateSite> out;
    for (int i : indices) {
        CandidateSite c;
        c.index = i;
        out.push_back(c);
    }
    return out;
}

} // namespace

TEST_CASE("placement strategy names roundtrip") {
    CHECK(placement_strategy_name(PlacementStrategy::centroid) == std::string("centroid"));
    CHECK(placement_strategy_name(PlacementStrategy::boundary) == std::string("boundary"));
    CHECK(placement_strategy_from_name("centroid") == PlacementStrategy::centroid);
    CHECK(placement_strategy_from_name("boundary") == PlacementStrategy::boundary);
    CHECK_THROWS_AS(placement_strategy_from_name("ring"), ParseError);
}

TEST_CASE("budget cap is the floor of total over cost") {
    Budget budget;
    SUBCASE("worked fractions") {
        budget.total = 2.0;
        budget.cost_per_site = 3.0;
        CHECK(budget.max_sites() == 0);
        budget.total = 10.0;
        CHECK(budget.max_sites() == 3);
    }
    SUBCASE("exact multiples survive binary rounding") {
        budget.total = 6.0;
        budget.cost_per_site = 3.0;
        CHECK(budget.max_sites() == 2);
        // 0.3 / 0.1 is 2.9999999999999996 in doubles; the cap must still be 3
        budget.total = 0.3;
        budget.cost_per_site = 0.1;
        CHECK(budget.max_sites() == 3);
    }
    SUBCASE("zero total") {
        budget.total = 0.0;
        budget.cost_per_site = 5.0;
        CHECK(budget.max_sites() == 0);
    }
    SUBCASE("validation") {
        budget.total = -1.0;
        CHECK_THROWS_AS(validate(budget), ConfigError);
        budget.total = 1.0;
        budget.cost_per_site = 0.0;
        CHECK_THROWS_AS(validate(budget), ConfigError);
    }
}

TEST_CASE("extract_low_coverage is the strict below-threshold set") {
    CoverageMap map;
    map.grid = GridSpec{2, 100.0};
    map.values_dbm = Eigen::VectorXd(4);
    map.values_dbm << -90.0, -110.0, -95.0, -120.0;

    CHECK(extract_low_coverage(map, -100.0) == std::vector<int>{1, 3});
    CHECK(extract_low_coverage(map, -130.0).empty()); // all values above tau
    CHECK(extract_low_coverage(map, 1e9) == std::vector<int>{0, 1, 2, 3});
    // boundary: a value exactly at tau is NOT low coverage
    CHECK(extract_low_coverage(map, -110.0) == std::vector<int>{3});

    SUBCASE("matches a brute-force scan on random maps") {
        SeededRng rng(31);
        const GridSpec grid{9, 100.0};
        for (int trial = 0; trial < 25; ++trial) {
            CoverageMap random_map;
            random_map.grid = grid;
            random_map.values_dbm = Eigen::VectorXd(grid.point_count());
            for (int i = 0; i < grid.point_count(); ++i)
                random_map.values_dbm[i] = rng.uniform(-140.0, -60.0);
            const double tau = rng.uniform(-130.0, -70.0);

            std::vector<int> expected;
            for (int i = 0; i < grid.point_count(); ++i)
                if (random_map.values_dbm[i] < tau) expected.push_back(i);
            CHECK(extract_low_coverage(random_map, tau) == expected);
        }
    }
}

TEST_CASE("centroid candidates snap the mean to the grid") {
    const GridSpec grid{8, 100.0};
    const auto config = make_configuration(grid);

    SUBCASE("three-point worked example lands on (1,1)") {
        const Cluster c = cluster_of({point_index(0, 0, grid), point_index(2, 0, grid),
                                      point_index(1, 3, grid)},
                                     grid);
        CHECK(c.centroid_rc.x() == doctest::Approx(1.0));
        CHECK(c.centroid_rc.y() == doctest::Approx(1.0));
        const auto candidates = candidate_sites(c, config, PlacementStrategy::centroid);
        REQUIRE(candidates.size() == 1);
        CHECK(candidates[0].index == point_index(1, 1, grid));
        CHECK(candidates[0].cluster_id == c.id);
        CHECK(candidates[0].strategy == PlacementStrategy::centroid);
    }
    SUBCASE("half fractions round away from zero") {
        // centroid (0.5, 0.5) -> (1, 1)
        const Cluster c = cluster_of({point_index(0, 0, grid), point_index(0, 1, grid),
                                      point_index(1, 0, grid), point_index(1, 1, grid)},
                                     grid);
        const auto candidates = candidate_sites(c, config, PlacementStrategy::centroid);
        REQUIRE(candidates.size() == 1);
        CHECK(candidates[0].index == point_index(1, 1, grid));
    }
    SUBCASE("singleton cluster yields its own point under both strategies") {
        const Cluster c = cluster_of({point_index(5, 2, grid)}, grid);
        for (auto strategy : {PlacementStrategy::centroid, PlacementStrategy::boundary}) {
            const auto candidates = candidate_sites(c, config, strategy);
            REQUIRE(candidates.size() == 1);
            CHECK(candidates[0].index == point_index(5, 2, grid));
        }
    }
    SUBCASE("empty cluster is rejected") {
        Cluster c;
        CHECK_THROWS_AS(candidate_sites(c, config, PlacementStrategy::centroid), ConfigError);
    }
}

TEST_CASE("occupied centroid falls back to the nearest unoccupied member") {
    const GridSpec grid{8, 100.0};
    const Cluster c = cluster_of({point_index(0, 0, grid), point_index(2, 0, grid),
                                  point_index(1, 3, grid)},
                                 grid); // centroid (1,1)

    SiteConfiguration config = make_configuration(grid);
    add_site(config, make_default_site(config, point_index(1, 1, grid)));

    // members' squared distances to (1,1): (0,0)->2, (2,0)->2, (1,3)->4.
    // (0,0) and (2,0) tie; the lower point index wins.
    const auto candidates = candidate_sites(c, config, PlacementStrategy::centroid);
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].index == point_index(0, 0, grid));

    SUBCASE("when that member is occupied too, the other tie partner wins") {
        add_site(config, make_default_site(config, point_index(0, 0, grid)));
        const auto next = candidate_sites(c, config, PlacementStrategy::centroid);
        REQUIRE(next.size() == 1);
        CHECK(next[0].index == point_index(2, 0, grid));
    }
    SUBCASE("fully occupied cluster yields no candidates") {
        for (int p : c.members)
            if (!config.has_site(p)) add_site(config, make_default_site(config, p));
        CHECK(candidate_sites(c, config, PlacementStrategy::centroid).empty());
        CHECK(candidate_sites(c, config, PlacementStrategy::boundary).empty());
    }
}

TEST_CASE("boundary candidates are the farthest member pair") {
    const GridSpec grid{16, 100.0};
    const auto config = make_configuration(grid);

    SUBCASE("seeded 20-point clusters match brute-force farthest-pair search") {
        SeededRng rng(0xb0);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<int> members;
            while (members.size() < 20) {
                const int p = static_cast<int>(rng.uniform_index(grid.point_count()));
                if (std::find(members.begin(), members.end(), p) == members.end())
                    members.push_back(p);
            }
            const Cluster c = cluster_of(members, grid);

            // exhaustive scan over ordered pairs (i <= j by index), keeping
            // the lexicographically lowest pair among distance ties
            long long best_d = -1;
            int best_a = -1;
            int best_b = -1;
            for (std::size_t i = 0; i < c.members.size(); ++i) {
                for (std::size_t j = i; j < c.members.size(); ++j) {
                    const auto [ri, ci] = index_to_coords(c.members[i], grid);
                    const auto [rj, cj] = index_to_coords(c.members[j], grid);
                    const long long dr = ri - rj;
                    const long long dc = ci - cj;
                    const long long d = dr * dr + dc * dc;
                    if (d > best_d) {
                        best_d = d;
                        best_a = c.members[i];
                        best_b = c.members[j];
                    }
                }
            }
            const auto candidates = candidate_sites(c, config, PlacementStrategy::boundary);
            REQUIRE(candidates.size() == 2);
            CHECK(candidates[0].index == best_a);
            CHECK(candidates[1].index == best_b);
        }
    }
    SUBCASE("distance ties resolve to the lowest index pair") {
        // a 2x2 square has two diagonals of equal length; members are sorted
        // so the scan sees (0,0)-(1,1) before (0,1)-(1,0)
        const Cluster c = cluster_of({point_index(0, 0, grid), point_index(0, 1, grid),
                                      point_index(1, 0, grid), point_index(1, 1, grid)},
                                     grid);
        const auto candidates = candidate_sites(c, config, PlacementStrategy::boundary);
        REQUIRE(candidates.size() == 2);
        CHECK(candidates[0].index == point_index(0, 0, grid));
        CHECK(candidates[1].index == point_index(1, 1, grid));
    }
    SUBCASE("occupied endpoints are dropped, not replaced") {
        const Cluster c = cluster_of({point_index(0, 0, grid), point_index(0, 5, grid),
                                      point_index(0, 2, grid)},
                                     grid);
        SiteConfiguration partially = make_configuration(grid);
        add_site(partially, make_default_site(partially, point_index(0, 0, grid)));
        const auto candidates = candidate_sites(c, partially, PlacementStrategy::boundary);
        REQUIRE(candidates.size() == 1);
        CHECK(candidates[0].index == point_index(0, 5, grid));
    }
}

TEST_CASE("coverage_gain counts newly covered points") {
    const GridSpec grid{6, 100.0};
    const Scenario scenario = uniform_scenario(grid);
    const auto evaluator = oracle_evaluator(scenario);

    SUBCASE("occupied candidate is rejected") {
        SiteConfiguration config = make_configuration(grid);
        add_site(config, make_default_site(config, 7));
        CHECK_THROWS_AS(coverage_gain(config, 7, evaluator, -100.0), ConfigError);
        CHECK_THROWS_WITH(coverage_gain(config, 7, evaluator, -100.0),
                          doctest::Contains("already occupied"));
    }
    SUBCASE("single tower whose own point alone clears tau") {
        // default site: 30 dBm EIRP, rural. RSSI at own point = 30 - 40 = -10;
        // nearest neighbour is 100 m away: 30 - (40 + 25*log10(100)) = -60.
        // tau = -30 therefore admits exactly the tower's own point.
        const auto config = make_configuration(grid);
        CHECK(coverage_gain(config, point_index(2, 2, grid), evaluator, -30.0) == 1);
    }
    SUBCASE("saturated map gains nothing") {
        SiteConfiguration config = make_configuration(grid);
        add_site(config, make_default_site(config, point_index(2, 2, grid)));
        // tau below the floor: everything is already covered
        CHECK(coverage_gain(config, point_index(3, 3, grid), evaluator, -151.0) == 0);
    }
    SUBCASE("candidate adjacent to an identical tower: exact value by enumeration") {
        SiteConfiguration config = make_configuration(grid);
        add_site(config, make_default_site(config, point_index(2, 2, grid)));
        const double tau = -100.0;

        SiteConfiguration with_candidate = config;
        add_site(with_candidate,
                 make_default_site(with_candidate, point_index(2, 3, grid)));
        const long before = covered_count(evaluator(config), tau);
        const long after = covered_count(evaluator(with_candidate), tau);
        const int expected = static_cast<int>(std::max(0L, after - before));

        CHECK(coverage_gain(config, point_index(2, 3, grid), evaluator, tau) == expected);
        // an adjacent identical tower mostly duplicates coverage
        CHECK(expected < grid.point_count() / 2);
    }
}

TEST_CASE("greedy selection respects the budget cap") {
    const GridSpec grid{8, 100.0};
    const Scenario scenario = uniform_scenario(grid);
    const auto evaluator = oracle_evaluator(scenario);
    const auto config = make_configuration(grid);
    // tau -68 gives a default tower a coverage radius just over two cells
    // (30 - (40 + 25*log10(d)) >= -68 up to d = 209 m), so these spread-out
    // candidates have disjoint coverage disks and each adds fresh coverage
    const auto candidates = plain_candidates({point_index(1, 1, grid), point_index(1, 6, grid),
                                              point_index(6, 1, grid), point_index(6, 6, grid),
                                              point_index(4, 4, grid)});
    const double tau = -68.0;

    Budget budget;
    budget.cost_per_site = 3.0;

    budget.total = 2.0; // floor(2/3) = 0
    CHECK(greedy_select(candidates, config, budget, evaluator, tau).empty());

    budget.total = 10.0; // floor(10/3) = 3
    const auto picks = greedy_select(candidates, config, budget, evaluator, tau);
    CHECK(picks.size() == 3);

    SUBCASE("randomized budgets never exceed the cap") {
        SeededRng rng(0xcab);
        for (int trial = 0; trial < 40; ++trial) {
            Budget b;
            b.total = rng.uniform(0.0, 20.0);
            b.cost_per_site = rng.uniform(0.5, 6.0);
            const auto selected = greedy_select(candidates, config, b, evaluator, tau);
            CHECK(static_cast<int>(selected.size()) <= b.max_sites());
        }
    }
}

TEST_CASE("greedy picks maximize marginal gain with deterministic ties") {
    const GridSpec grid{8, 100.0};
    const Scenario scenario = uniform_scenario(grid);
    const auto evaluator = oracle_evaluator(scenario);
    const auto config = make_configuration(grid);
    // a default tower's coverage disk at this tau spans ~2 cells, so towers
    // more than ~4 cells apart contribute independently
    const double tau = -68.0;

    SUBCASE("symmetric candidates: the lower index goes first") {
        // (2,2) and (5,5) are mirror images in a flat world: equal gain
        const auto candidates =
            plain_candidates({point_index(5, 5, grid), point_index(2, 2, grid)});
        const auto picks = greedy_select_n(candidates, config, 2, evaluator, tau);
        REQUIRE(picks.size() == 2);
        CHECK(picks[0].index == point_index(2, 2, grid));
        CHECK(picks[1].index == point_index(5, 5, grid));
        CHECK(picks[0].predicted_gain == picks[1].predicted_gain);
    }
    SUBCASE("gains are the true marginal improvements, replayed") {
        const auto candidates = plain_candidates({point_index(1, 1, grid), point_index(1, 6, grid),
                                                  point_index(6, 1, grid), point_index(4, 4, grid)});
        const auto picks = greedy_select_n(candidates, config, 4, evaluator, tau);
        REQUIRE(!picks.empty());
        SiteConfiguration replay = config;
        for (const CandidateSite& pick : picks) {
            const int gain = coverage_gain(replay, pick.index, evaluator, tau);
            CHECK(pick.predicted_gain == static_cast<double>(gain));
            add_site(replay, make_default_site(replay, pick.index));
        }
    }
    SUBCASE("oracle marginal gains are non-increasing in pick order") {
        SeededRng rng(0xfade);
        for (int trial = 0; trial < 10; ++trial) {
            const Scenario world = generate_scenario(100 + trial, grid);
            const auto world_eval = [&world](const SiteConfiguration& c) {
                return oracle_coverage(c, world, RadioParams{});
            };
            std::vector<int> indices;
            while (indices.size() < 8) {
                const int p = static_cast<int>(rng.uniform_index(grid.point_count()));
                if (std::find(indices.begin(), indices.end(), p) == indices.end())
                    indices.push_back(p);
            }
            const auto picks = greedy_select_n(plain_candidates(indices), config, 8,
                                               world_eval, -100.0);
            for (std::size_t i = 1; i < picks.size(); ++i)
                CHECK(picks[i].predicted_gain <= picks[i - 1].predicted_gain);
        }
    }
    SUBCASE("zero-gain candidates end the selection") {
        // tau below the floor: every point is covered before any tower
        const auto candidates = plain_candidates({point_index(2, 2, grid)});
        CHECK(greedy_select_n(candidates, config, 1, evaluator, -151.0).empty());
    }
    SUBCASE("occupied candidates are skipped") {
        SiteConfiguration occupied = make_configuration(grid);
        add_site(occupied, make_default_site(occupied, point_index(1, 1, grid)));
        const auto candidates =
            plain_candidates({point_index(1, 1, grid), point_index(6, 6, grid)});
        const auto picks = greedy_select_n(candidates, occupied, 2, evaluator, tau);
        REQUIRE(picks.size() == 1);
        CHECK(picks[0].index == point_index(6, 6, grid));
    }
    SUBCASE("non-positive max_count yields nothing") {
        const auto candidates = plain_candidates({point_index(2, 2, grid)});
        CHECK(greedy_select_n(candidates, config, 0, evaluator, tau).empty());
        CHECK(greedy_select_n(candidates, config, -3, evaluator, tau).empty());
    }
}

TEST_CASE("greedy is within (1-1/e) of the exhaustive pair optimum") {
    const GridSpec grid{8, 100.0};
    const auto config = make_configuration(grid);
    constexpr double kBound = 1.0 - 1.0 / 2.718281828459045;

    for (int trial = 0; trial < 5; ++trial) {
        const Scenario world = generate_scenario(300 + trial, grid);
        const auto evaluator = [&world](const SiteConfiguration& c) {
            return oracle_coverage(c, world, RadioParams{});
        };
        const double tau = -95.0;

        SeededRng rng(400 + trial);
        std::vector<int> indices;
        while (indices.size() < 12) {
            const int p = static_cast<int>(rng.uniform_index(grid.point_count()));
            if (std::find(indices.begin(), indices.end(), p) == indices.end())
                indices.push_back(p);
        }
        const auto candidates = plain_candidates(indices);

        const auto picks = greedy_select_n(candidates, config, 2, evaluator, tau);
        double greedy_gain = 0.0;
        for (const CandidateSite& pick : picks) greedy_gain += pick.predicted_gain;

        // exhaustive search over all unordered candidate pairs
        const long base = covered_count(evaluator(config), tau);
        long best_pair = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            for (std::size_t j = i + 1; j < candidates.size(); ++j) {
                SiteConfiguration pair_config = config;
                add_site(pair_config, make_default_site(pair_config, candidates[i].index));
                add_site(pair_config, make_default_site(pair_config, candidates[j].index));
                best_pair = std::max(best_pair,
                                     covered_count(evaluator(pair_config), tau) - base);
            }
        }
        CHECK(greedy_gain >= kBound * static_cast<double>(best_pair));
    }
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "longevity/phase.hpp"

using namespace longevity;

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

SocietyParams society_of(const PhasePoint& p, double child_cost) {
    return {p.gamma, p.alpha, child_cost, p.e_over_c * child_cost};
}

}  // namespace

TEST_CASE("tunneling verdicts") {
    CHECK(can_tunnel({2.0, 0.0, 1.5}));
    CHECK_FALSE(can_tunnel({1.5, 0.5, 3.0}));
    for (int i = 1; i <= 100; ++i) CHECK_FALSE(can_tunnel({1.6, 0.0, 0.1 * i}));
    CHECK_FALSE(can_tunnel({1.0, 0.0, 2.0}));
    CHECK_FALSE(can_tunnel({0.8, 0.0, 2.0}));
}

TEST_CASE("both printed forms agree") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int disagreements = 0, tunneling = 0;
    for (int i = 0; i < 100000; ++i) {
        const PhasePoint p{1.0 + 3.0 * u(rng), u(rng), 10.0 * (1.0 - u(rng))};
        const bool a = can_tunnel_threshold_form(p);
        if (a != can_tunnel_ratio_form(p)) ++disagreements;
        if (a) ++tunneling;
    }
    CHECK(disagreements == 0);
    CHECK(tunneling > 1000);  // the sample actually hits islands
}

TEST_CASE("analytic condition matches the dynamics") {
    CHECK(tunnel_check_dynamic({2.0, 0.0, 2.0, 3.0}));
    CHECK_FALSE(tunnel_check_dynamic({1.5, 0.5, 1.0, 3.0}));
    CHECK_THROWS_AS(tunnel_check_dynamic({2.0, 0.0, 2.0, std::nullopt}), std::invalid_argument);

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int disagreements = 0;
    for (int i = 0; i < 20000; ++i) {
        const double c = 5.0 * (1.0 - u(rng));
        const SocietyParams s{1.0 + 3.0 * (1.0 - u(rng)), u(rng), c, 10.0 * (1.0 - u(rng))};
        const PhasePoint p{s.gamma, s.alpha, *s.extension_cost / c};
        if (can_tunnel(p) != tunnel_check_dynamic(s)) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("scale invariance in C") {
    const PhasePoint p{2.0, 0.0, 1.5};
    for (double c : {0.01, 1.0, 2.0, 37.0}) CHECK(tunnel_check_dynamic(society_of(p, c)));
}

TEST_CASE("island index") {
    CHECK(island_index({2.0, 0.0, 1.5}) == 1);
    CHECK(island_index({2.5, 0.0, 1.5}) == 1);
    CHECK(island_index({4.5, 0.0, 1.5}) == 2);
    CHECK_FALSE(island_index({1.5, 0.0, 1.5}).has_value());
    CHECK_FALSE(island_index({1.5, 0.5, 3.0}).has_value());
}

TEST_CASE("gamma_n") {
    CHECK(gamma_n(0) == 1.0);
    CHECK(gamma_n(1) == doctest::Approx(kGolden).epsilon(1e-15));
    CHECK(gamma_n(2) == doctest::Approx((1.0 + std::sqrt(13.0)) / 2.0).epsilon(1e-15));
    for (int n = 1; n < 20; ++n) CHECK(gamma_n(n + 1) > gamma_n(n));
    CHECK_THROWS_AS(gamma_n(-1), std::invalid_argument);
    CHECK(island_spec(3).gamma_start == gamma_n(3));
}

TEST_CASE("island boundaries") {
    SUBCASE("first island at gamma = 2") {
        const auto b = island_boundaries(1, 2.0);
        REQUIRE(b.has_value());
        CHECK(b->lo == doctest::Approx(1.0));
        CHECK(b->hi == doctest::Approx(2.0));
        CHECK_FALSE(can_tunnel({2.0, 0.0, 0.99}));
        CHECK(can_tunnel({2.0, 0.0, 1.01}));
        CHECK(can_tunnel({2.0, 0.0, 1.99}));
        CHECK_FALSE(can_tunnel({2.0, 0.0, 2.01}));
    }
    SUBCASE("closes to a point at the golden mean") {
        const auto b = island_boundaries(1, gamma_n(1));
        REQUIRE(b.has_value());
        CHECK(std::abs(b->hi - b->lo) <= 1e-9);
        CHECK(b->lo == doctest::Approx(kGolden + 1.0).epsilon(1e-12));
    }
    SUBCASE("empty below the start") {
        CHECK_FALSE(island_boundaries(1, 1.5).has_value());
        CHECK_FALSE(island_boundaries(2, gamma_n(2) - 1e-6).has_value());
        CHECK(island_boundaries(2, gamma_n(2) + 1e-6).has_value());
        const auto b = island_boundaries(2, gamma_n(2) + 1e-3);
        REQUIRE(b.has_value());
        CHECK(b->lo < b->hi);
        CHECK(island_index({gamma_n(2) + 1e-3, 0.0, 0.5 * (b->lo + b->hi)}) == 2);
    }
    SUBCASE("curves meet at every start") {
        for (int n = 1; n <= 6; ++n) {
            const auto b = island_boundaries(n, gamma_n(n));
            REQUIRE(b.has_value());
            CHECK(std::abs(b->hi - b->lo) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(island_boundaries(0, 2.0), std::invalid_argument);
}

TEST_CASE("property: alpha = 0 membership equals the island interiors") {
    // Dense scan; points within 1e-9 of a curve are skipped.
    for (double g = 1.05; g <= 4.0; g += 0.0137) {
        for (double r = 0.01; r <= 10.0; r += 0.0131) {
            bool inside = false, near_edge = false;
            for (int n = 1; n <= 12; ++n) {
                const auto b = island_boundaries(n, g);
                if (!b) continue;
                if (std::abs(r - b->lo) < 1e-9 || std::abs(r - b->hi) < 1e-9) near_edge = true;
                if (r > b->lo && r < b->hi) {
                    inside = true;
                    CHECK(island_index({g, 0.0, r}) == n);
                }
            }
            if (!near_edge) CHECK(can_tunnel({g, 0.0, r}) == inside);
        }
    }
}

TEST_CASE("phase grid") {
    SUBCASE("island 1 only beyond the golden mean") {
        const auto grid = phase_grid({1.0, 3.0}, {0.0, 5.0}, 0.0, 200, 200);
        bool any_one = false;
        for (std::size_t i = 0; i < grid.gammas.size(); ++i) {
            for (std::size_t j = 0; j < grid.e_over_cs.size(); ++j) {
                const auto& cell = grid.at(i, j);
                if (cell) CHECK(grid.gammas[i] >= kGolden);
                if (cell == 1) any_one = true;
            }
        }
        CHECK(any_one);
    }
    SUBCASE("slice at E/C = 1.5") {
        const auto grid = phase_grid({1.9, 2.1}, {1.5, 1.5}, 0.0, 5, 2);
        for (std::size_t i = 0; i < grid.gammas.size(); ++i) CHECK(grid.at(i, 0) == 1);
    }
    SUBCASE("all absent below 1.6") {
        const auto grid = phase_grid({1.0, 1.6}, {0.0, 10.0}, 0.0, 50, 50);
        for (const auto& c : grid.islands) CHECK_FALSE(c.has_value());
    }
    SUBCASE("row-major layout and parallel stability") {
        const auto a = phase_grid({1.0, 3.0}, {0.0, 5.0}, 0.2, 37, 41, 1);
        const auto b = phase_grid({1.0, 3.0}, {0.0, 5.0}, 0.2, 37, 41, 8);
        CHECK(a.islands == b.islands);
        CHECK(a.islands.size() == 37 * 41);
        CHECK(a.at(5, 7) == island_index({a.gammas[5], 0.2, a.e_over_cs[7]}));
    }
    CHECK_THROWS_AS(phase_grid({1.0, 3.0}, {0.0, 5.0}, 0.0, 1, 10), std::invalid_argument);
}

TEST_CASE("immortal fertility threshold") {
    const SocietyParams s{2.0, 0.0, 2.0, 3.0};
    REQUIRE(immortal_fertility_threshold(s).has_value());
    CHECK(*immortal_fertility_threshold(s) == doctest::Approx(8.0));
    CHECK(step(7.99, s).k == 0);
    CHECK(step(8.0, s).k == 1);

    CHECK_FALSE(immortal_fertility_threshold({1.5, 0.0, 1.0, 3.0}).has_value());

    const SocietyParams t{2.5, 0.0, 1.0, 1.0};
    CHECK(*immortal_fertility_threshold(t) == doctest::Approx(1.5));
    CHECK(step(1.49, t).k == 0);
    CHECK(step(1.5, t).k == 1);
    CHECK(step(1.5, t).extended);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "declos/oracle.hpp"
#include "doctest.h"

#include <cmath>

#include "declos/rng.hpp"

using namespace declos;

TEST_CASE("closed-form case bounds at the reference size") {
    CaseBounds b = analytic_bounds(1.0, 0.35);
    CHECK(b.case0 == doctest::Approx(1.70).epsilon(1e-12));
    CHECK(b.case1 == doctest::Approx(1.35).epsilon(1e-12));
    CHECK(b.case2 == doctest::Approx(0.70).epsilon(1e-12));
    CHECK(b.overall() == doctest::Approx(0.70).epsilon(1e-12));
    // every class floor clears twice the band width
    CHECK(b.overall() >= 2.0 * 0.35 - 1e-12);
}

TEST_CASE("closed-form branches switch where the minimizations balance") {
    // small square: the side-band case bottoms out at 2*delta
    CHECK(analytic_bounds(0.2, 0.35).case1 == doctest::Approx(0.70).epsilon(1e-12));
    // wide band: the corner case leaves the 2*delta branch
    CHECK(analytic_bounds(1.0, 0.6).case2 == doctest::Approx(0.6 + 2.0 * 0.36).epsilon(1e-12));
    // balance point s = delta: both case1 branches give the same value
    CHECK(analytic_bounds(0.4, 0.4).case1 == doctest::Approx(0.8).epsilon(1e-12));
    // delta = s/2 is the case2 balance point
    CHECK(analytic_bounds(1.0, 0.5).case2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic and numeric minimizations agree") {
    RngStream rng(2024);
    for (int i = 0; i < 50; ++i) {
        double s = rng.uniform(0.1, 5.0);
        double d = rng.uniform(0.05, 1.5);
        CaseBounds a = analytic_bounds(s, d);
        CaseBounds n = numeric_bounds(s, d);
        CHECK(std::fabs(a.case0 - n.case0) <= 1e-9);
        CHECK(std::fabs(a.case1 - n.case1) <= 1e-9);
        CHECK(std::fabs(a.case2 - n.case2) <= 1e-9);
    }
}

TEST_CASE("grid scan brackets the analytic floors") {
    double s = 1.0, d = 0.3, res = 0.03;
    Lemma1Report rep = lemma1_scan(AARect(0.0, s, 0.0, s), d, res);

    CHECK(rep.delta == d);
    CHECK(rep.resolution == res);
    CHECK(rep.blocked_pairs > 0);
    CHECK(rep.pairs_tested > rep.blocked_pairs);

    // grid configurations are a subset of the continuum, so each restricted
    // minimum sits at or above its closed form, and within a few cells of it
    CaseBounds a = rep.analytic;
    CHECK(a.case0 == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(rep.scanned_cases.case0 >= a.case0 - 1e-9);
    CHECK(rep.scanned_cases.case0 <= a.case0 + 4.0 * res);
    CHECK(rep.scanned_cases.case1 >= a.case1 - 1e-9);
    CHECK(rep.scanned_cases.case1 <= a.case1 + 4.0 * res);
    CHECK(rep.scanned_cases.case2 >= a.case2 - 1e-9);
    CHECK(rep.scanned_cases.case2 <= a.case2 + 4.0 * res);

    // global minimum: at least the 2*delta floor (up to grid tolerance), no
    // higher than the worst case class
    CHECK(rep.min_nonlos_distance >= 2.0 * d - 2.0 * res - 1e-12);
    CHECK(rep.min_nonlos_distance <= a.overall() + 4.0 * res);
    CHECK(rep.certified_lower_bound ==
          doctest::Approx(rep.min_nonlos_distance - 2.0 * res).epsilon(1e-12));

    // the witness pair really is at the reported distance and really is blocked
    CHECK(inf_norm_dist(rep.witness.a, rep.witness.b) ==
          doctest::Approx(rep.min_nonlos_distance).epsilon(1e-12));
    CHECK(segment_blocked(rep.witness.a, rep.witness.b, {rep.obstacle}));
}

TEST_CASE("certified lower bound does not degrade as the grid refines") {
    double prev = -1.0;
    for (double res : {0.05, 0.025, 0.0125}) {
        Lemma1Report rep = lemma1_scan(AARect(0.0, 1.0, 0.0, 1.0), 0.5, res);
        CHECK(rep.certified_lower_bound >= prev - 1e-12);
        prev = rep.certified_lower_bound;
    }
    CHECK(prev >= 2.0 * 0.5 - 2.0 * 0.0125 - 1e-12);
}

TEST_CASE("scan preconditions") {
    CHECK_THROWS_AS(lemma1_scan(AARect(0.0, 1.0, 0.0, 2.0), 0.3, 0.03), std::invalid_argument);
    CHECK_THROWS_AS(lemma1_scan(AARect(0.0, 1.0, 0.0, 1.0), 0.3, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(lemma1_scan(AARect(0.0, 1.0, 0.0, 1.0), -0.1, 0.01), std::invalid_argument);
}

TEST_CASE("an uninflated wall fails adaptive certification") {
    std::vector<AARect> wall = {AARect(0.0, 0.1, 0.0, 10.0)};
    AdaptiveCheck check = validate_adaptive(wall, wall, 0.5, 0.05);
    CHECK(!check.certified);
    CHECK(check.threshold == doctest::Approx(0.6));
    CHECK(check.witness.distance < check.threshold);
    CHECK(check.witness.distance >= 0.2 - 1e-12);  // closest opposed grid shells
    CHECK(segment_blocked(check.witness.a, check.witness.b, wall));
}

TEST_CASE("full expansion passes adaptive certification") {
    std::vector<AARect> obs = {AARect(0.0, 1.0, 0.0, 1.0)};
    std::vector<AARect> inflated = {expand_rect(obs[0], 1.0)};
    AdaptiveCheck check = validate_adaptive(obs, inflated, 0.8, 0.05);
    CHECK(check.certified);
    CHECK(check.observed_min >= check.threshold);
    CHECK(check.observed_min >= 1.0 - 1e-9);  // blocked pairs clear twice the half-width
    CHECK(check.pairs_tested > 0);
}

TEST_CASE("adaptive certification demands the inflation cover the obstacle") {
    std::vector<AARect> obs = {AARect(0.0, 1.0, 0.0, 1.0)};
    std::vector<AARect> bad = {AARect(0.2, 0.8, 0.0, 1.0)};
    CHECK_THROWS_AS(validate_adaptive(obs, bad, 0.5, 0.05), std::invalid_argument);
}

namespace {

std::vector<AARect> three_block_world() {
    return {AARect(5.0, 7.0, 0.0, 14.0), AARect(12.0, 14.0, 8.0, 20.0),
            AARect(15.0, 20.0, 10.0, 12.0)};
}

}  // namespace

TEST_CASE("reference partition matches the production one") {
    PositionMap pos = {{1, {9.0, 3.0}}, {2, {10.0, 10.0}}, {3, {16.0, 3.0}}, {4, {2.0, 4.0}},
                      {5, {18.0, 18.0}}};
    SubgraphPartition ref = brute_force_subgraphs(pos, three_block_world());
    std::vector<std::vector<AgentId>> want = {{1, 2, 3}, {4}, {5}};
    CHECK(ref.subgraphs == want);
    CHECK(ref == compute_subgraphs(pos, three_block_world()));
}

TEST_CASE("reference partition agrees on random worlds") {
    RngStream rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<AARect> obs;
        int n_obs = static_cast<int>(rng.below(6));
        for (int i = 0; i < n_obs; ++i) {
            double x0 = rng.uniform(0.0, 18.0);
            double y0 = rng.uniform(0.0, 18.0);
            obs.push_back(AARect(x0, x0 + rng.uniform(0.3, 2.0), y0, y0 + rng.uniform(0.3, 2.0)));
        }
        PositionMap pos;
        int n_agents = 1 + static_cast<int>(rng.below(8));
        for (int id = 1; id <= n_agents;) {
            Point2 p{rng.uniform(0.0, 20.0), rng.uniform(0.0, 20.0)};
            bool inside = false;
            for (const AARect& r : obs)
                if (r.contains_closed(p)) inside = true;
            if (inside) continue;
            pos[id] = p;
            ++id;
        }
        SubgraphPartition ref = brute_force_subgraphs(pos, obs);
        SubgraphPartition prod = compute_subgraphs(pos, obs);
        CHECK(ref == prod);
    }
}

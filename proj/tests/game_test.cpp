#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mvno/game.hpp"
#include "support.hpp"

using namespace mvno;
using namespace mvno::game;
using support::reference_market;

namespace {

MarketParams with_r0(MarketParams p, double r0) {
    p.r0 = r0;
    return p;
}

// A market where the uniqueness hypotheses genuinely hold (found by search:
// r0 <= min(r_bar_0, r_bar_20) with every optimal wholesale price above the
// network cost).
MarketParams uniqueness_market() {
    MarketParams p;
    p.q1 = 584.856;
    p.q2 = 553.168;
    p.p1 = 22.839;
    p.p2 = 15.314;
    p.c1 = 3.61;
    p.c2 = 3.961;
    p.ct1 = 3.968;
    p.ct2 = 2.271;
    p.cf1 = 0;
    p.cf2 = 0;
    p.eps = 0.5;
    p.gamma = 0.43;
    p.r0 = 3.24;
    p.ct0 = 1.675;
    p.cf0 = 0;
    return p;
}

bool is_equilibrium(const EquilibriumReport& report, Strategy s1, Strategy s2) {
    const Profile profile{s1, s2};
    return std::find(report.equilibria.begin(), report.equilibria.end(), profile) !=
           report.equilibria.end();
}

}  // namespace

TEST_CASE("default leader is the larger operator") {
    CHECK(default_fs_leader(reference_market()) == Mno::one);
    MarketParams p = reference_market();
    p.q2 = p.q1 + 1;
    p.p1 = p.p2;  // keep ordering valid
    CHECK(default_fs_leader(p) == Mno::two);
    p.q2 = p.q1;
    CHECK(default_fs_leader(p) == Mno::one);  // tie goes to operator 1
}

TEST_CASE("payoff matrix cells on the reference market") {
    const PayoffMatrix m = build_payoff_matrix(reference_market(), Mno::one);
    const PayoffCell& nn = m.at(Strategy::nonpart, Strategy::nonpart);
    CHECK(nn.r1 == doctest::Approx(16800.0));
    CHECK(nn.r2 == doctest::Approx(8400.0));

    const PayoffCell& pp = m.at(Strategy::part, Strategy::part);
    CHECK(pp.r1 == doctest::Approx(15293.6470588235).epsilon(1e-12));
    CHECK(pp.r2 == doctest::Approx(9935.29411764706).epsilon(1e-12));
    CHECK(pp.provenance == "part-part-fs");

    const PayoffCell& pn = m.at(Strategy::part, Strategy::nonpart);
    CHECK(pn.r1 == doctest::Approx(16803.9568627451).epsilon(1e-12));
    CHECK(pn.r2 == doctest::Approx(8312.70588235294).epsilon(1e-12));

    const PayoffCell& np = m.at(Strategy::nonpart, Strategy::part);
    CHECK(np.r1 == doctest::Approx(14246.6470588235).epsilon(1e-12));
    CHECK(np.r2 == doctest::Approx(10714.9892156863).epsilon(1e-12));
}

TEST_CASE("two-partner cell recomputed from raw profit expressions") {
    const MarketParams p = reference_market();
    const PayoffMatrix m = build_payoff_matrix(p, Mno::one);
    const PriceSolution fs = solve_part_part_fs(p, Mno::one);
    const Wholesale w = Wholesale::pair(*fs.w1, *fs.w2);
    const Scenario sc = Scenario::part_part_fs(Mno::one);
    CHECK(m.at(Strategy::part, Strategy::part).r1 ==
          doctest::Approx(mno_profit(p, sc, Mno::one, *fs.p0, w)).epsilon(1e-12));
    CHECK(m.at(Strategy::part, Strategy::part).r2 ==
          doctest::Approx(mno_profit(p, sc, Mno::two, *fs.p0, w)).epsilon(1e-12));
}

TEST_CASE("mixed cells share the partner's optimal prices") {
    const MarketParams p = reference_market();
    const PayoffMatrix m = build_payoff_matrix(p, Mno::one);
    const PriceSolution only1 = solve_part_nonpart(p, Mno::one);
    const Scenario sc = Scenario::part_nonpart(Mno::one);
    const Wholesale w = Wholesale::single(Mno::one, *only1.w1);
    // both entries of the cell are evaluated at the same (w_hat, p0_hat)
    CHECK(m.at(Strategy::part, Strategy::nonpart).r1 ==
          doctest::Approx(mno_profit(p, sc, Mno::one, *only1.p0, w)).epsilon(1e-12));
    CHECK(m.at(Strategy::part, Strategy::nonpart).r2 ==
          doctest::Approx(mno_profit(p, sc, Mno::two, *only1.p0, w)).epsilon(1e-12));
}

TEST_CASE("no-entry cell ignores the entrant parameters") {
    MarketParams p = reference_market();
    const PayoffCell base =
        build_payoff_matrix(p, Mno::one).at(Strategy::nonpart, Strategy::nonpart);
    p.gamma = 0.8;
    p.r0 = 33;
    p.ct0 = 5;
    p.cf0 = 100;
    const PayoffCell changed =
        build_payoff_matrix(p, Mno::one).at(Strategy::nonpart, Strategy::nonpart);
    CHECK(base.r1 == changed.r1);
    CHECK(base.r2 == changed.r2);
}

TEST_CASE("nash enumeration on hand-built matrices") {
    PayoffMatrix m;
    // both-partner dominant for each player
    m.at(Strategy::part, Strategy::part) = {5, 5, ""};
    m.at(Strategy::part, Strategy::nonpart) = {4, 1, ""};
    m.at(Strategy::nonpart, Strategy::part) = {1, 4, ""};
    m.at(Strategy::nonpart, Strategy::nonpart) = {2, 2, ""};
    const EquilibriumReport unique = find_pure_nash(m);
    CHECK(unique.equilibria.size() == 1);
    CHECK(is_equilibrium(unique, Strategy::part, Strategy::part));

    // coordination shape: two symmetric equilibria
    m.at(Strategy::part, Strategy::part) = {3, 3, ""};
    m.at(Strategy::part, Strategy::nonpart) = {0, 0, ""};
    m.at(Strategy::nonpart, Strategy::part) = {0, 0, ""};
    m.at(Strategy::nonpart, Strategy::nonpart) = {2, 2, ""};
    const EquilibriumReport coord = find_pure_nash(m);
    CHECK(coord.equilibria.size() == 2);
    CHECK(is_equilibrium(coord, Strategy::part, Strategy::part));
    CHECK(is_equilibrium(coord, Strategy::nonpart, Strategy::nonpart));

    // zero deviation margins count as equilibria
    for (auto& row : m.cells)
        for (auto& cell : row) cell = {2, 2, ""};
    const EquilibriumReport weak = find_pure_nash(m);
    CHECK(weak.equilibria.size() == 4);
}

TEST_CASE("symmetric operators produce a player-symmetric matrix") {
    MarketParams p = reference_market();
    p.q2 = p.q1;
    p.p1 = p.p2;
    p.c1 = p.c2;
    p.ct1 = p.ct2;
    p.validate();
    const PayoffMatrix m1 = build_payoff_matrix(p, Mno::one);
    const PayoffMatrix m2 = build_payoff_matrix(p, Mno::two);
    // swapping both the players and the leader mirrors every cell
    CHECK(m1.at(Strategy::part, Strategy::part).r1 ==
          doctest::Approx(m2.at(Strategy::part, Strategy::part).r2).epsilon(1e-10));
    CHECK(m1.at(Strategy::part, Strategy::nonpart).r1 ==
          doctest::Approx(m2.at(Strategy::nonpart, Strategy::part).r2).epsilon(1e-10));
    CHECK(m1.at(Strategy::part, Strategy::nonpart).r2 ==
          doctest::Approx(m2.at(Strategy::nonpart, Strategy::part).r1).epsilon(1e-10));
    CHECK(m1.at(Strategy::nonpart, Strategy::nonpart).r1 ==
          doctest::Approx(m1.at(Strategy::nonpart, Strategy::nonpart).r2).epsilon(1e-10));
}

TEST_CASE("nash set is invariant under payoff translation of one player") {
    const PayoffMatrix base = build_payoff_matrix(reference_market(), Mno::one);
    PayoffMatrix shifted = base;
    for (auto& row : shifted.cells)
        for (auto& cell : row) cell.r1 += 12345.0;
    const EquilibriumReport a = find_pure_nash(base);
    const EquilibriumReport b = find_pure_nash(shifted);
    REQUIRE(a.equilibria.size() == b.equilibria.size());
    for (std::size_t i = 0; i < a.equilibria.size(); ++i)
        CHECK(a.equilibria[i] == b.equilibria[i]);
    for (int i = 0; i < 4; ++i) {
        CHECK(a.profiles[i].margin1 == doctest::Approx(b.profiles[i].margin1).epsilon(1e-12));
        CHECK(a.profiles[i].margin2 == doctest::Approx(b.profiles[i].margin2).epsilon(1e-12));
    }
}

TEST_CASE("reference market at r0 = 10: both-partner profile is the unique equilibrium") {
    const MarketParams p = reference_market();
    const Prop4Report report = check_proposition4(p, Mno::one);
    CHECK(report.hyp_r0_le_rbar0);
    CHECK_FALSE(report.hyp_r0_le_rbar20);  // 10 > 1.36
    CHECK(report.hyp_w_above_cost);
    CHECK(report.part_part_is_nash);
    // uniqueness happens to hold here even though it is not guaranteed
    CHECK(report.part_part_unique_nash);
    CHECK(report.lemma3_mno1.holds);
    CHECK(report.lemma3_mno2.holds);
}

TEST_CASE("reference market at r0 = 1: hypotheses fail and so does the equilibrium") {
    // w^B(r0=1) has w1 = 4.99 below c1 = 8: the blanket price-above-cost
    // hypothesis is violated and operator 1 strictly prefers to defect
    const MarketParams p = with_r0(reference_market(), 1);
    const Prop4Report report = check_proposition4(p, Mno::one);
    CHECK(report.hyp_r0_le_rbar0);
    CHECK(report.hyp_r0_le_rbar20);  // 1 <= 1.36
    CHECK_FALSE(report.hyp_w_above_cost);
    CHECK_FALSE(report.part_part_is_nash);
}

TEST_CASE("uniqueness instance: all hypotheses hold and the equilibrium is unique") {
    const MarketParams p = uniqueness_market();
    const Thresholds th = thresholds(p);
    REQUIRE(p.r0 <= th.r_bar_0);
    REQUIRE(p.r0 <= th.r_bar_20);
    const Prop4Report report = check_proposition4(p, default_fs_leader(p));
    CHECK(report.hyp_r0_le_rbar0);
    CHECK(report.hyp_r0_le_rbar20);
    CHECK(report.hyp_w_above_cost);
    CHECK(report.part_part_is_nash);
    CHECK(report.part_part_unique_nash);
}

TEST_CASE("inflated network costs break the price-above-cost hypothesis") {
    MarketParams p = reference_market();
    // w1B is free of c1 and sits at 10.54 for r0 = 3; lifting c1 above it
    // violates the blanket hypothesis
    p.c1 = 11;
    p.r0 = 3;
    p.validate();
    const Prop4Report report = check_proposition4(p, Mno::one);
    CHECK_FALSE(report.hyp_w_above_cost);
    // no equilibrium assertion applies; only the flag matters here
}

TEST_CASE("lemma 3 on the reference market") {
    const MarketParams p = reference_market();
    const Lemma3Result r = check_lemma3(p, Mno::one, Mno::one);
    CHECK(r.hypothesis_met);
    CHECK(r.d_part == doctest::Approx(75.0).epsilon(1e-12));
    CHECK(r.d_nonpart == doctest::Approx(91.1911764705882).epsilon(1e-12));
    CHECK(r.holds);
}

TEST_CASE("lemma 3 equality when the rival's solve also clamps") {
    // r0 = 1 <= r_bar_20, so the partner-2 solve pins p0 at p2 and the
    // defections coincide
    const MarketParams p = with_r0(reference_market(), 1);
    const Lemma3Result r = check_lemma3(p, Mno::one, Mno::one);
    CHECK(r.d_part == doctest::Approx(r.d_nonpart).epsilon(1e-12));
    CHECK(r.holds);
}

TEST_CASE("lemma 3 reports when its hypothesis is not met") {
    const MarketParams p = with_r0(reference_market(), 50);
    const Lemma3Result r = check_lemma3(p, Mno::one, Mno::one);
    CHECK_FALSE(r.hypothesis_met);
}

TEST_CASE("randomized equilibrium sweep under the guaranteed regime") {
    support::MarketSampler sampler(31415);
    int accepted = 0;
    int attempts = 0;
    while (accepted < 50 && attempts < 4000) {
        ++attempts;
        MarketParams p = sampler.draw();
        const Thresholds th = thresholds(p);
        if (th.r_bar_0 <= 0) continue;
        p.r0 = sampler.uniform(0, th.r_bar_0);
        const Mno leader = default_fs_leader(p);
        const PriceSolution fs = solve_part_part_fs(p, leader);
        const PriceSolution s1 = solve_part_nonpart(p, Mno::one);
        const PriceSolution s2 = solve_part_nonpart(p, Mno::two);
        if (*fs.w1 < p.c1 || *fs.w2 < p.c2 || *s1.w1 < p.c1 || *s2.w2 < p.c2) continue;
        ++accepted;

        const Prop4Report report = check_proposition4(p, leader);
        CHECK(report.part_part_is_nash);
        CHECK(report.lemma3_mno1.holds);
        CHECK(report.lemma3_mno2.holds);

        if (p.r0 <= th.r_bar_20) {
            // the partner-2 solve clamps, so operator 2 loses nobody and
            // gains wholesale margin by hosting the entrant: staying out of
            // the market is never a best reply for it
            CHECK(s2.flows->d2 == doctest::Approx(0.0).epsilon(1e-9));
            for (const auto& entry : report.equilibria.profiles) {
                if (entry.profile == Profile{Strategy::nonpart, Strategy::nonpart})
                    CHECK(entry.margin2 <= 1e-9 * std::abs(*s2.profit_mno2));
            }
        }
    }
    CHECK(accepted == 50);
}

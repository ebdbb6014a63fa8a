#include "mvno/game.hpp"

#include <algorithm>
#include <cmath>

namespace mvno::game {

namespace {

double payoff_scale(const PayoffMatrix& m) {
    double scale = 1;
    for (const auto& row : m.cells)
        for (const auto& cell : row)
            scale = std::max({scale, std::abs(cell.r1), std::abs(cell.r2)});
    return scale;
}

}  // namespace

Mno default_fs_leader(const MarketParams& params) {
    return params.q2 > params.q1 ? Mno::two : Mno::one;
}

PayoffMatrix build_payoff_matrix(const MarketParams& params, Mno fs_leader) {
    params.validate();
    PayoffMatrix m;
    m.fs_leader = fs_leader;

    const PriceSolution both = solve_part_part_fs(params, fs_leader);
    m.at(Strategy::part, Strategy::part) = {*both.profit_mno1, *both.profit_mno2,
                                            both.scenario.name()};

    // Mixed cells: the partner solves; the non-partner's payoff is fully
    // determined by the partner's optimal prices.
    const PriceSolution only1 = solve_part_nonpart(params, Mno::one);
    m.at(Strategy::part, Strategy::nonpart) = {*only1.profit_mno1, *only1.profit_mno2,
                                               only1.scenario.name()};
    const PriceSolution only2 = solve_part_nonpart(params, Mno::two);
    m.at(Strategy::nonpart, Strategy::part) = {*only2.profit_mno1, *only2.profit_mno2,
                                               only2.scenario.name()};

    const PriceSolution none = solve_nonpart_nonpart(params);
    m.at(Strategy::nonpart, Strategy::nonpart) = {*none.profit_mno1, *none.profit_mno2,
                                                  none.scenario.name()};
    return m;
}

EquilibriumReport find_pure_nash(const PayoffMatrix& matrix, double tol) {
    EquilibriumReport report;
    const double margin_tol = tol * payoff_scale(matrix);
    constexpr Strategy kStrategies[2] = {Strategy::part, Strategy::nonpart};

    int k = 0;
    for (Strategy s1 : kStrategies) {
        for (Strategy s2 : kStrategies) {
            const Strategy d1 = s1 == Strategy::part ? Strategy::nonpart : Strategy::part;
            const Strategy d2 = s2 == Strategy::part ? Strategy::nonpart : Strategy::part;
            EquilibriumReport::Entry entry;
            entry.profile = {s1, s2};
            entry.margin1 = matrix.at(s1, s2).r1 - matrix.at(d1, s2).r1;
            entry.margin2 = matrix.at(s1, s2).r2 - matrix.at(s1, d2).r2;
            entry.is_nash = entry.margin1 >= -margin_tol && entry.margin2 >= -margin_tol;
            if (entry.is_nash) report.equilibria.push_back(entry.profile);
            report.profiles[k++] = entry;
        }
    }
    return report;
}

Lemma3Result check_lemma3(const MarketParams& params, Mno fs_leader, Mno mno, double tol) {
    params.validate();
    Lemma3Result result;
    result.hypothesis_met = params.r0 <= thresholds(params).r_bar_0;

    const PriceSolution both = solve_part_part_fs(params, fs_leader);
    const PriceSolution rival_only = solve_part_nonpart(params, other(mno));
    result.d_part = mno == Mno::one ? both.flows->d1 : both.flows->d2;
    result.d_nonpart = mno == Mno::one ? rival_only.flows->d1 : rival_only.flows->d2;
    result.holds = result.d_nonpart >= result.d_part - tol * std::max(1.0, result.d_part);
    return result;
}

Prop4Report check_proposition4(const MarketParams& params, Mno fs_leader, double tol) {
    Prop4Report report;
    report.matrix = build_payoff_matrix(params, fs_leader);
    report.equilibria = find_pure_nash(report.matrix, tol);

    const Thresholds th = thresholds(params);
    report.hyp_r0_le_rbar0 = params.r0 <= th.r_bar_0;
    report.hyp_r0_le_rbar20 = params.r0 <= th.r_bar_20;

    // "Wholesale prices higher than network costs" covers every optimal
    // price in the matrix: the two-partner pair and both mixed-cell prices.
    const PriceSolution both = solve_part_part_fs(params, fs_leader);
    const PriceSolution only1 = solve_part_nonpart(params, Mno::one);
    const PriceSolution only2 = solve_part_nonpart(params, Mno::two);
    report.hyp_w_above_cost = *both.w1 >= params.c1 && *both.w2 >= params.c2 &&
                              *only1.w1 >= params.c1 && *only2.w2 >= params.c2;

    const auto& eqs = report.equilibria.equilibria;
    const Profile part_part{Strategy::part, Strategy::part};
    report.part_part_is_nash =
        std::find(eqs.begin(), eqs.end(), part_part) != eqs.end();
    report.part_part_unique_nash = report.part_part_is_nash && eqs.size() == 1;

    report.lemma3_mno1 = check_lemma3(params, fs_leader, Mno::one, tol);
    report.lemma3_mno2 = check_lemma3(params, fs_leader, Mno::two, tol);
    return report;
}

}  // namespace mvno::game

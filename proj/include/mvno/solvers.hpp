#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvno/market.hpp"

namespace mvno {

/// A pair of wholesale prices (one per operator).
struct WholesalePair {
    double w1 = 0;
    double w2 = 0;
};

/// Indirect-revenue thresholds that select the solution branch of each
/// scenario: r_bar_i0 splits the single-partner optimum between its boundary
/// and interior branches, r_bar_0 does the same for the fully sequential
/// two-partner model, and r_flat_0 separates the partially sequential model's
/// interior solution from its no-solution regime. The identity
/// r_bar_0 - r_flat_0 = 2 Q/S - 2 p2 holds exactly.
struct Thresholds {
    double r_bar_10 = 0;
    double r_bar_20 = 0;
    double r_bar_0 = 0;
    double r_flat_0 = 0;

    double r_bar_i0(Mno m) const { return m == Mno::one ? r_bar_10 : r_bar_20; }
};

Thresholds thresholds(const MarketParams& params);

/// Result of a scenario solve. Prices, flows and profits are absent where the
/// scenario does not define them (no entry, or the partially sequential
/// no-solution branch, where feasible == false).
struct PriceSolution {
    Scenario scenario;
    std::optional<double> w1;
    std::optional<double> w2;
    std::optional<double> p0;
    bool boundary = false;  ///< true when the optimum sits at p0 == p2
    bool feasible = true;   ///< false only for the PS no-solution branch
    std::optional<CustomerFlows> flows;
    std::optional<double> profit_mvno;
    std::optional<double> profit_mno1;
    std::optional<double> profit_mno2;
    std::vector<std::string> diagnostics;  ///< e.g. negative wholesale price warnings
};

/// Entrant's unconstrained optimal retail price given a single partner's
/// wholesale price: (1-gamma) wi / 2 + Q/(2S) + (ct0 - r0)/2. The caller
/// clamps with min(., p2).
double p0_tilde_single(const MarketParams& params, double wi);

/// Two-partner version with market-share-weighted wholesale prices.
double p0_tilde_pair(const MarketParams& params, double w1, double w2);

/// Wholesale price at which the entrant's unclamped single-partner optimum
/// reaches p2 (the same for either partner).
double w_bar_single(const MarketParams& params);

/// Interior critical point of the single partner's reduced profit.
double w_tilde_single(const MarketParams& params, Mno partner);

/// Follower's best-response line: the wholesale price of the follower that
/// maximizes its reduced profit inside the feasible region, as a function of
/// the leader's price. Affine with slope -pi_leader / (2 pi_follower).
double omega_follower(const MarketParams& params, Mno leader, double wi);

/// Interior critical point of the fully sequential leader's reduced profit
/// along the follower's best-response line.
double w_tilde_fs(const MarketParams& params, Mno leader);

/// Leader price at which the follower's best-response line crosses the
/// boundary segment delta; beyond it the anticipated retail price clamps.
double w_bar_fs(const MarketParams& params, Mno leader);

/// Boundary candidates: both lie on delta (the entrant's unclamped optimum
/// equals p2 there). wB is the leader-1 candidate, wA the leader-2 one.
WholesalePair point_wA(const MarketParams& params);
WholesalePair point_wB(const MarketParams& params);

/// Joint stationary point of both partners' reduced profits (partially
/// sequential model); interior to the feasible region iff r0 > r_flat_0.
WholesalePair point_wC(const MarketParams& params);

/// Feasible wholesale region Delta = { w >= 0 : p0_tilde(w) <= p2 } and its
/// boundary segment delta.
namespace region {

/// Signed margin p2 - p0_tilde(w1, w2); nonnegative inside Delta.
double margin(const MarketParams& params, double w1, double w2);

bool contains(const MarketParams& params, double w1, double w2, double tol = 1e-9);

/// Wholesale price of `axis` that puts (w1, w2) exactly on delta, holding the
/// other coordinate fixed. May be negative when the slice is empty.
double boundary_w(const MarketParams& params, Mno axis, double w_other);

/// Intercept of delta on the given axis (other coordinate zero).
double delta_intercept(const MarketParams& params, Mno axis);

}  // namespace region

/// Single-partner optimum: w_hat = min(w_bar, w_tilde), retail price
/// min(p0_tilde(w_hat), p2). Always feasible; ties go to the boundary branch.
PriceSolution solve_part_nonpart(const MarketParams& params, Mno partner, double tol = 1e-9);

/// Fully sequential two-partner optimum: the boundary candidate (wB or wA by
/// leader) when r0 <= r_bar_0, otherwise the interior point on the follower's
/// best-response line.
PriceSolution solve_part_part_fs(const MarketParams& params, Mno leader, double tol = 1e-9);

/// Partially sequential two-partner model: wC when r0 >= r_flat_0 (on the
/// boundary segment at equality), otherwise reported infeasible.
PriceSolution solve_part_part_ps(const MarketParams& params, double tol = 1e-9);

/// No-entry profits.
PriceSolution solve_nonpart_nonpart(const MarketParams& params);

/// Dispatch on the scenario tag.
PriceSolution solve(const MarketParams& params, const Scenario& scenario, double tol = 1e-9);

}  // namespace mvno

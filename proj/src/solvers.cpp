#include "mvno/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace mvno {

namespace {

// Fills flows and all three profits at fixed prices.
void fill_outcome(PriceSolution& sol, const MarketParams& params, const Scenario& scenario,
                  double p0, const Wholesale& w) {
    sol.flows = customer_flows(params, scenario, p0);
    sol.profit_mvno = mvno_profit(params, scenario, p0, w);
    sol.profit_mno1 = mno_profit(params, scenario, Mno::one, p0, w);
    sol.profit_mno2 = mno_profit(params, scenario, Mno::two, p0, w);
}

// Clamps the anticipated retail price to [0, p2] and records diagnostics.
double clamp_retail(PriceSolution& sol, const MarketParams& params, double p0_unclamped,
                    double tol) {
    double p0 = std::min(p0_unclamped, params.p2);
    if (p0 < 0) {
        sol.diagnostics.push_back("retail price clamped to 0 (unclamped optimum " +
                                  std::to_string(p0_unclamped) + ")");
        p0 = 0;
    }
    sol.boundary = std::abs(p0 - params.p2) <= tol * std::max(1.0, params.p2);
    return p0;
}

void warn_negative(PriceSolution& sol, const char* name, double w) {
    if (w < 0)
        sol.diagnostics.push_back(std::string(name) + " is negative (" + std::to_string(w) +
                                  "); reported unclamped");
}

}  // namespace

Thresholds thresholds(const MarketParams& params) {
    const auto d = DerivedQuantities::from(params);
    const double g = params.gamma;
    const double q_over_s = d.q_total / d.s;
    const double m1 = d.h1 * params.q1 / (params.p1 * d.s);
    const double m2 = d.h2 * params.q2 / (params.p2 * d.s);
    Thresholds t;
    t.r_bar_10 = m1 + params.c1 * (1 - g) + 3 * q_over_s + params.ct0 - 4 * params.p2;
    t.r_bar_20 = m2 + params.c2 * (1 - g) + 3 * q_over_s + params.ct0 - 4 * params.p2;
    const double cost_mix = (1 - g) * (d.pi1 * params.c1 + d.pi2 * params.c2);
    t.r_bar_0 = m1 + m2 + cost_mix + 7 * q_over_s + params.ct0 - 8 * params.p2;
    t.r_flat_0 = m1 + m2 + cost_mix + 5 * q_over_s + params.ct0 - 6 * params.p2;
    return t;
}

double p0_tilde_single(const MarketParams& params, double wi) {
    const auto d = DerivedQuantities::from(params);
    return (1 - params.gamma) * wi / 2 + d.q_total / (2 * d.s) + (params.ct0 - params.r0) / 2;
}

double p0_tilde_pair(const MarketParams& params, double w1, double w2) {
    const auto d = DerivedQuantities::from(params);
    return (1 - params.gamma) * (d.pi1 * w1 + d.pi2 * w2) / 2 + d.q_total / (2 * d.s) +
           (params.ct0 - params.r0) / 2;
}

double w_bar_single(const MarketParams& params) {
    const auto d = DerivedQuantities::from(params);
    return (2 * params.p2 - d.q_total / d.s + params.r0 - params.ct0) / (1 - params.gamma);
}

double w_tilde_single(const MarketParams& params, Mno partner) {
    const auto d = DerivedQuantities::from(params);
    const double hi = d.h(partner);
    const double qi = params.q(partner);
    const double pi = params.p(partner);
    return params.c(partner) / 2 +
           (hi * qi / (2 * pi * d.s) + d.q_total / (2 * d.s) + (params.r0 - params.ct0) / 2) /
               (1 - params.gamma);
}

double omega_follower(const MarketParams& params, Mno leader, double wi) {
    const auto d = DerivedQuantities::from(params);
    const Mno f = other(leader);
    const double g = params.gamma;
    const double pif = d.pi(f);
    return params.c(f) / 2 + d.h(f) * params.q(f) / (2 * params.p(f) * (1 - g) * pif * d.s) +
           d.q_total / (2 * (1 - g) * pif * d.s) -
           (params.ct0 - params.r0) / (2 * (1 - g) * pif) - d.pi(leader) / (2 * pif) * wi;
}

double w_tilde_fs(const MarketParams& params, Mno leader) {
    const auto d = DerivedQuantities::from(params);
    const Mno f = other(leader);
    const double g = params.gamma;
    const double own = d.h(leader) * params.q(leader) / params.p(leader);
    const double rival = d.h(f) * params.q(f) / params.p(f);
    const double costs = d.s * (1 - g) * (params.c(leader) * d.pi(leader) - params.c(f) * d.pi(f));
    return (own - rival + costs + d.t) / (2 * (1 - g) * d.pi(leader) * d.s);
}

double w_bar_fs(const MarketParams& params, Mno leader) {
    const auto d = DerivedQuantities::from(params);
    const Mno f = other(leader);
    const double g = params.gamma;
    const double rival = d.h(f) * params.q(f) / params.p(f);
    return (-rival - params.c(f) * (1 - g) * d.pi(f) * d.s - 4 * d.q_total +
            4 * params.p2 * d.s + d.t) /
           ((1 - g) * d.pi(leader) * d.s);
}

WholesalePair point_wA(const MarketParams& params) {
    const auto d = DerivedQuantities::from(params);
    const double g = params.gamma;
    const double own = d.h1 * params.q1 / params.p1;
    WholesalePair w;
    w.w1 = (own + params.c1 * (1 - g) * d.pi1 * d.s + 2 * d.q_total - 2 * d.s * params.p2) /
           ((1 - g) * d.pi1 * d.s);
    w.w2 = w_bar_fs(params, Mno::two);
    return w;
}

WholesalePair point_wB(const MarketParams& params) {
    const auto d = DerivedQuantities::from(params);
    const double g = params.gamma;
    const double own = d.h2 * params.q2 / params.p2;
    WholesalePair w;
    w.w1 = w_bar_fs(params, Mno::one);
    w.w2 = (own + params.c2 * (1 - g) * d.pi2 * d.s + 2 * d.q_total - 2 * d.s * params.p2) /
           ((1 - g) * d.pi2 * d.s);
    return w;
}

WholesalePair point_wC(const MarketParams& params) {
    const auto d = DerivedQuantities::from(params);
    const double g = params.gamma;
    const double m1 = d.h1 * params.q1 / params.p1;
    const double m2 = d.h2 * params.q2 / params.p2;
    WholesalePair w;
    w.w1 = (2 * m1 - m2 + (1 - g) * (2 * params.c1 * d.pi1 - params.c2 * d.pi2) * d.s + d.t) /
           (3 * (1 - g) * d.pi1 * d.s);
    w.w2 = (2 * m2 - m1 + (1 - g) * (2 * params.c2 * d.pi2 - params.c1 * d.pi1) * d.s + d.t) /
           (3 * (1 - g) * d.pi2 * d.s);
    return w;
}

namespace region {

double margin(const MarketParams& params, double w1, double w2) {
    return params.p2 - p0_tilde_pair(params, w1, w2);
}

bool contains(const MarketParams& params, double w1, double w2, double tol) {
    return w1 >= -tol && w2 >= -tol &&
           margin(params, w1, w2) >= -tol * std::max(1.0, params.p2);
}

double boundary_w(const MarketParams& params, Mno axis, double w_other) {
    const auto d = DerivedQuantities::from(params);
    const double g = params.gamma;
    const double rhs = 2 * params.p2 - d.q_total / d.s - (params.ct0 - params.r0);
    const double pia = d.pi(axis);
    const double pio = d.pi(other(axis));
    return (rhs / (1 - g) - pio * w_other) / pia;
}

double delta_intercept(const MarketParams& params, Mno axis) {
    return boundary_w(params, axis, 0.0);
}

}  // namespace region

PriceSolution solve_part_nonpart(const MarketParams& params, Mno partner, double tol) {
    params.validate();
    PriceSolution sol;
    sol.scenario = Scenario::part_nonpart(partner);

    const double w_bar = w_bar_single(params);
    const double w_tilde = w_tilde_single(params, partner);
    // Equality goes to the boundary branch: the optimum then sits at p0 == p2.
    const double w_hat = std::min(w_bar, w_tilde);
    warn_negative(sol, "wholesale price", w_hat);

    const double p0 = clamp_retail(sol, params, p0_tilde_single(params, w_hat), tol);
    if (w_bar <= w_tilde) sol.boundary = true;

    (partner == Mno::one ? sol.w1 : sol.w2) = w_hat;
    const Wholesale w = Wholesale::single(partner, w_hat);
    sol.p0 = p0;
    fill_outcome(sol, params, sol.scenario, p0, w);
    return sol;
}

PriceSolution solve_part_part_fs(const MarketParams& params, Mno leader, double tol) {
    params.validate();
    PriceSolution sol;
    sol.scenario = Scenario::part_part_fs(leader);

    const Thresholds th = thresholds(params);
    WholesalePair pair;
    double p0;
    if (params.r0 <= th.r_bar_0) {
        pair = leader == Mno::one ? point_wB(params) : point_wA(params);
        p0 = params.p2;
        sol.boundary = true;
    } else {
        const double wl = w_tilde_fs(params, leader);
        const double wf = omega_follower(params, leader, wl);
        pair = leader == Mno::one ? WholesalePair{wl, wf} : WholesalePair{wf, wl};
        p0 = clamp_retail(sol, params, p0_tilde_pair(params, pair.w1, pair.w2), tol);
    }
    warn_negative(sol, "wholesale price w1", pair.w1);
    warn_negative(sol, "wholesale price w2", pair.w2);

    sol.w1 = pair.w1;
    sol.w2 = pair.w2;
    sol.p0 = p0;
    fill_outcome(sol, params, sol.scenario, p0, Wholesale::pair(pair.w1, pair.w2));
    return sol;
}

PriceSolution solve_part_part_ps(const MarketParams& params, double tol) {
    params.validate();
    PriceSolution sol;
    sol.scenario = Scenario::part_part_ps();

    const Thresholds th = thresholds(params);
    const double abs_tol = tol * std::max(1.0, std::abs(th.r_flat_0));
    if (params.r0 < th.r_flat_0 - abs_tol) {
        // No pair of wholesale prices jointly maximizes both partners'
        // profits in this regime; reported as an outcome, not an error.
        sol.feasible = false;
        sol.diagnostics.push_back("no joint optimum: r0 < r_flat_0");
        return sol;
    }

    const WholesalePair pair = point_wC(params);
    warn_negative(sol, "wholesale price w1", pair.w1);
    warn_negative(sol, "wholesale price w2", pair.w2);
    double p0;
    if (params.r0 <= th.r_flat_0 + abs_tol) {
        p0 = params.p2;
        sol.boundary = true;
    } else {
        p0 = clamp_retail(sol, params, p0_tilde_pair(params, pair.w1, pair.w2), tol);
    }
    sol.w1 = pair.w1;
    sol.w2 = pair.w2;
    sol.p0 = p0;
    fill_outcome(sol, params, sol.scenario, p0, Wholesale::pair(pair.w1, pair.w2));
    return sol;
}

PriceSolution solve_nonpart_nonpart(const MarketParams& params) {
    params.validate();
    PriceSolution sol;
    sol.scenario = Scenario::nonpart_nonpart();
    sol.flows = CustomerFlows{};
    sol.profit_mno1 = mno_profit(params, sol.scenario, Mno::one, 0.0, Wholesale::none());
    sol.profit_mno2 = mno_profit(params, sol.scenario, Mno::two, 0.0, Wholesale::none());
    return sol;
}

PriceSolution solve(const MarketParams& params, const Scenario& scenario, double tol) {
    switch (scenario.kind) {
        case Scenario::Kind::part_nonpart:
            return solve_part_nonpart(params, scenario.partner(), tol);
        case Scenario::Kind::part_part_fs:
            return solve_part_part_fs(params, scenario.leader(), tol);
        case Scenario::Kind::part_part_ps: return solve_part_part_ps(params, tol);
        case Scenario::Kind::nonpart_nonpart: return solve_nonpart_nonpart(params);
    }
    throw std::logic_error("solve: unknown scenario");
}

}  // namespace mvno

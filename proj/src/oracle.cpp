#include "mvno/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mvno::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_gap(double reference, double value) {
    return std::abs(reference - value) / std::max(1.0, std::abs(reference));
}

// |dR/dw| measured against the candidate's profit-per-price scale.
double relative_residual(double derivative, double x, double fx) {
    return std::abs(derivative) * std::max(1.0, std::abs(x)) / std::max(1.0, std::abs(fx));
}

struct Argmax {
    double x = 0;
    double value = -kInf;
};

// Scan + tenfold zooms around the incumbent; ties go to the lower index.
Argmax argmax_on_grid(const std::function<double(double)>& f, double lo, double hi,
                      int resolution, int refine_rounds) {
    if (!(hi > lo)) return {lo, f(lo)};
    Argmax best;
    double cur_lo = lo;
    double cur_hi = hi;
    for (int round = 0; round <= refine_rounds; ++round) {
        Argmax round_best;
        for (int i = 0; i < resolution; ++i) {
            const double x = i == resolution - 1
                                 ? cur_hi
                                 : cur_lo + (cur_hi - cur_lo) * i / (resolution - 1);
            const double v = f(x);
            if (v > round_best.value) round_best = {x, v};
        }
        if (round_best.value > best.value) best = round_best;
        const double half = (cur_hi - cur_lo) / 20;
        cur_lo = std::max(lo, round_best.x - half);
        cur_hi = std::min(hi, round_best.x + half);
    }
    return best;
}

// Vertex of the parabola through (x1 +- h); exact for quadratic objectives.
std::optional<double> parabola_vertex(const std::function<double(double)>& f, double x1,
                                      double h) {
    const double f0 = f(x1 - h);
    const double f1 = f(x1);
    const double f2 = f(x1 + h);
    const double denom = f0 - 2 * f1 + f2;
    if (!(denom < 0)) return std::nullopt;  // not concave along this axis
    return x1 + h * (f0 - f2) / (2 * denom);
}

// Precomputed constants reused across profit evaluations.
struct Ctx {
    const MarketParams& params;
    DerivedQuantities d;

    explicit Ctx(const MarketParams& p) : params(p), d(DerivedQuantities::from(p)) {}

    double p0_tilde(double w1, double w2) const {
        return (1 - params.gamma) * (d.pi1 * w1 + d.pi2 * w2) / 2 + d.q_total / (2 * d.s) +
               (params.ct0 - params.r0) / 2;
    }
    double p0_tilde_one(double w) const { return p0_tilde(w, w); }
    double entrant_base(double p0) const { return params.eps * (d.q_total - d.s * p0); }
};

// Interior-branch reduced profits, evaluated from the quadratic expressions
// directly so finite differences may straddle the retail clamp.
double branch_profit_pair(const Ctx& c, Mno m, double w1, double w2) {
    const double p0 = c.p0_tilde(w1, w2);
    const double defect =
        c.params.eps * c.params.q(m) * (c.params.p(m) - p0) / c.params.p(m);
    const double wm = m == Mno::one ? w1 : w2;
    return c.d.h(m) * (c.params.q(m) - defect) +
           (wm - c.params.c(m)) * (1 - c.params.gamma) * c.d.pi(m) * c.entrant_base(p0) -
           c.params.cf(m);
}

double branch_profit_single(const Ctx& c, Mno partner, double w) {
    const double p0 = c.p0_tilde_one(w);
    const double defect =
        c.params.eps * c.params.q(partner) * (c.params.p(partner) - p0) / c.params.p(partner);
    return c.d.h(partner) * (c.params.q(partner) - defect) +
           (w - c.params.c(partner)) * (1 - c.params.gamma) * c.entrant_base(p0) -
           c.params.cf(partner);
}

// Entrant profit as a smooth quadratic in p0 (no domain clamp).
double entrant_profit_branch(const Ctx& c, double unit_wholesale, double p0) {
    const double q0 = c.entrant_base(p0);
    return (p0 + c.params.r0 - (1 - c.params.gamma) * unit_wholesale - c.params.ct0) * q0 -
           c.params.cf0;
}

double fd_step(double x) { return 1e-5 * std::max(1.0, std::abs(x)); }

double central_derivative(const std::function<double(double)>& f, double x) {
    const double h = fd_step(x);
    return (f(x + h) - f(x - h)) / (2 * h);
}

// Multiplier recovery needs derivatives clean to ~1e-10; the profits are
// exact quadratics, so a wide stencil stays exact while shrinking the
// rounding error of the difference quotient.
double wide_derivative(const std::function<double(double)>& f, double x) {
    const double h = 0.05 * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2 * h);
}

// Follower's interior best response at a given leader price: the vertex of
// its own-coordinate profit parabola, fitted strictly inside the region.
std::optional<double> follower_vertex(const Ctx& c, Mno leader, double w_leader) {
    const Mno fol = other(leader);
    const double hi = region::boundary_w(c.params, fol, w_leader);
    if (!(hi > 0)) return std::nullopt;
    auto f = [&](double x) {
        const double w1 = leader == Mno::one ? w_leader : x;
        const double w2 = leader == Mno::one ? x : w_leader;
        return branch_profit_pair(c, fol, w1, w2);
    };
    return parabola_vertex(f, hi / 2, hi / 4);
}

}  // namespace

void GridSpec::validate() const {
    if (resolution < 3) throw std::invalid_argument("GridSpec: resolution must be >= 3");
    if (refine_rounds < 0) throw std::invalid_argument("GridSpec: refine_rounds must be >= 0");
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(upper > lower))
        throw std::invalid_argument("GridSpec: bounds must be finite with upper > lower");
}

GridSpec GridSpec::for_wholesale(const MarketParams& params, int resolution, int refine_rounds) {
    const WholesalePair a = point_wA(params);
    const WholesalePair b = point_wB(params);
    const WholesalePair c = point_wC(params);
    double extent = std::max({1.0, w_bar_single(params), std::abs(a.w1), std::abs(a.w2),
                              std::abs(b.w1), std::abs(b.w2), std::abs(c.w1), std::abs(c.w2)});
    GridSpec grid;
    grid.lower = 0;
    grid.upper = 4 * extent;
    grid.resolution = resolution;
    grid.refine_rounds = refine_rounds;
    grid.validate();
    return grid;
}

void OracleVerdict::add(const std::string& label, double closed_form, double oracle_value,
                        double tolerance) {
    Entry e;
    e.label = label;
    e.closed_form = closed_form;
    e.oracle_value = oracle_value;
    e.rel_gap = rel_gap(closed_form, oracle_value);
    e.tolerance = tolerance;
    e.ok = e.rel_gap <= tolerance;
    entries.push_back(std::move(e));
}

void OracleVerdict::finalize() {
    max_rel_gap = 0;
    pass = !forced_failure_;
    for (const auto& e : entries) {
        max_rel_gap = std::max(max_rel_gap, e.rel_gap);
        pass = pass && e.ok;
    }
}

void OracleVerdict::fail(const std::string& why) {
    forced_failure_ = true;
    if (!note.empty()) note += "; ";
    note += why;
}

std::pair<double, double> grid_argmax_p0(const MarketParams& params, const Scenario& scenario,
                                         const Wholesale& w, const GridSpec& grid) {
    grid.validate();
    auto f = [&](double p0) { return mvno_profit(params, scenario, p0, w); };
    const Argmax best = argmax_on_grid(f, 0.0, params.p2, grid.resolution, grid.refine_rounds);
    return {best.x, best.value};
}

OracleVerdict part_nonpart_oracle(const MarketParams& params, Mno partner,
                                  const GridSpec& grid) {
    params.validate();
    grid.validate();
    OracleVerdict verdict;
    const PriceSolution closed = solve_part_nonpart(params, partner);
    const Scenario scenario = Scenario::part_nonpart(partner);

    // The scan stops where the anticipated retail price starts clamping:
    // past it the partner profit rises linearly forever and has no argmax.
    const double w_hi = std::min(w_bar_single(params), grid.upper);
    if (!(w_hi > 0)) {
        verdict.fail("empty wholesale search range (w_bar <= 0)");
        verdict.finalize();
        return verdict;
    }

    GridSpec inner = grid;  // extra zooms keep retail-layer noise below the
    inner.refine_rounds = grid.refine_rounds + 2;  // wholesale curvature scale
    auto objective = [&](double w) {
        const Wholesale prices = Wholesale::single(partner, w);
        const auto [p0, profit0] = grid_argmax_p0(params, scenario, prices, inner);
        (void)profit0;
        return mno_profit(params, scenario, partner, p0, prices);
    };
    const Argmax best =
        argmax_on_grid(objective, std::max(0.0, grid.lower), w_hi, grid.resolution,
                       grid.refine_rounds);
    const auto [p0_oracle, entrant_profit] =
        grid_argmax_p0(params, scenario, Wholesale::single(partner, best.x), inner);
    (void)entrant_profit;

    const double w_closed = partner == Mno::one ? *closed.w1 : *closed.w2;
    const double profit_closed =
        partner == Mno::one ? *closed.profit_mno1 : *closed.profit_mno2;
    verdict.add("w", w_closed, best.x, 1e-3);
    verdict.add("p0", *closed.p0, p0_oracle, 1e-3);
    verdict.add("profit_mno", profit_closed, best.value, 1e-4);
    verdict.finalize();
    return verdict;
}

OracleVerdict bilevel_fs_oracle(const MarketParams& params, Mno leader, const GridSpec& grid) {
    params.validate();
    grid.validate();
    OracleVerdict verdict;
    const Ctx ctx(params);
    const Mno fol = other(leader);
    const PriceSolution closed = solve_part_part_fs(params, leader);
    const Scenario scenario = Scenario::part_part_fs(leader);

    // Leader range ends where the follower's interior reply meets the
    // boundary segment; past that point the follower is pinned to the
    // segment and the exclusion argument applies (fs_case2_exclusion_check).
    auto vertex_overshoot = [&](double wl) -> double {
        const double hi = region::boundary_w(params, fol, wl);
        const auto v = follower_vertex(ctx, leader, wl);
        if (!v) return kInf;
        return *v - hi;
    };
    double w_cross;
    if (vertex_overshoot(0.0) >= 0) {
        w_cross = 0;
    } else if (vertex_overshoot(grid.upper) < 0) {
        w_cross = grid.upper;
    } else {
        double lo = 0, hi = grid.upper;
        for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
            const double mid = (lo + hi) / 2;
            (vertex_overshoot(mid) < 0 ? lo : hi) = mid;
        }
        w_cross = (lo + hi) / 2;
    }
    if (!(w_cross > 0)) {
        verdict.fail("empty leader search range");
        verdict.finalize();
        return verdict;
    }

    auto follower_reply = [&](double wl) {
        const double hi = region::boundary_w(params, fol, wl);
        const auto v = follower_vertex(ctx, leader, wl);
        return std::clamp(v.value_or(0.0), 0.0, std::max(hi, 0.0));
    };
    auto objective = [&](double wl) {
        const double wf = follower_reply(wl);
        const double w1 = leader == Mno::one ? wl : wf;
        const double w2 = leader == Mno::one ? wf : wl;
        const double p0 = std::clamp(ctx.p0_tilde(w1, w2), 0.0, params.p2);
        return mno_profit(params, scenario, leader, p0, Wholesale::pair(w1, w2));
    };
    const Argmax best = argmax_on_grid(objective, 0.0, w_cross, grid.resolution,
                                       grid.refine_rounds);
    const double wf_oracle = follower_reply(best.x);
    const double w1_o = leader == Mno::one ? best.x : wf_oracle;
    const double w2_o = leader == Mno::one ? wf_oracle : best.x;
    const double p0_oracle = std::clamp(ctx.p0_tilde(w1_o, w2_o), 0.0, params.p2);

    const bool oracle_boundary = params.p2 - p0_oracle <= 1e-6 * std::max(1.0, params.p2);
    if (oracle_boundary != closed.boundary) verdict.fail("branch disagreement");
    verdict.note = oracle_boundary ? "boundary branch" : "interior branch";

    const double profit_closed =
        leader == Mno::one ? *closed.profit_mno1 : *closed.profit_mno2;
    verdict.add("w_leader", leader == Mno::one ? *closed.w1 : *closed.w2, best.x, 1e-3);
    verdict.add("w_follower", leader == Mno::one ? *closed.w2 : *closed.w1, wf_oracle, 1e-3);
    verdict.add("p0", *closed.p0, p0_oracle, 1e-3);
    verdict.add("profit_leader", profit_closed, best.value, 1e-4);
    verdict.finalize();
    return verdict;
}

PsOracleVerdict simultaneous_ps_oracle(const MarketParams& params, const GridSpec& grid) {
    params.validate();
    grid.validate();
    const Ctx ctx(params);
    const PriceSolution closed = solve_part_part_ps(params);
    PsOracleVerdict out;

    auto vertex_in = [&](Mno axis, double w_other) -> std::optional<double> {
        const double hi = region::boundary_w(params, axis, w_other);
        if (!(hi > 0)) return std::nullopt;
        auto f = [&](double x) {
            const double w1 = axis == Mno::one ? x : w_other;
            const double w2 = axis == Mno::one ? w_other : x;
            return branch_profit_pair(ctx, axis, w1, w2);
        };
        return parabola_vertex(f, hi / 2, hi / 4);
    };

    const double i1 = region::delta_intercept(params, Mno::one);
    const double i2 = region::delta_intercept(params, Mno::two);
    const double scale = std::max({1.0, std::abs(i1), std::abs(i2)});
    double w1 = std::max(i1, 0.0) / 4;
    double w2 = std::max(i2, 0.0) / 4;

    bool left_region = false;
    bool converged = false;
    int it = 0;
    for (; it < 500; ++it) {
        const auto v1 = vertex_in(Mno::one, w2);
        const auto v2 = vertex_in(Mno::two, w1);
        if (!v1 || !v2) {
            left_region = true;
            break;
        }
        const double n1 = w1 + 0.5 * (*v1 - w1);
        const double n2 = w2 + 0.5 * (*v2 - w2);
        const double movement = std::max(std::abs(n1 - w1), std::abs(n2 - w2));
        w1 = n1;
        w2 = n2;
        if (movement <= 1e-8 * scale) {
            converged = true;
            break;
        }
    }
    out.iterations = it;

    const double boundary_tol = 1e-6 * std::max(1.0, params.p2);
    if (left_region || !converged) {
        out.outcome = PsOutcome::none;
    } else {
        const double margin = region::margin(params, w1, w2);
        if (margin < -boundary_tol || w1 < -boundary_tol || w2 < -boundary_tol) {
            out.outcome = PsOutcome::none;  // the map's fixed point escapes the region
        } else if (margin <= boundary_tol) {
            out.outcome = PsOutcome::boundary;
            out.fixed_point = WholesalePair{w1, w2};
        } else {
            out.outcome = PsOutcome::interior;
            out.fixed_point = WholesalePair{w1, w2};
        }
    }

    OracleVerdict& cmp = out.comparison;
    if (!closed.feasible) {
        if (out.outcome == PsOutcome::none) {
            cmp.note = "no fixed point inside the region";
        } else {
            cmp.fail("oracle found a fixed point but the model has no joint optimum");
        }
    } else {
        const PsOutcome expected = closed.boundary ? PsOutcome::boundary : PsOutcome::interior;
        if (out.outcome != expected) {
            cmp.fail("classification mismatch");
        } else {
            cmp.add("w1", *closed.w1, w1, 1e-3);
            cmp.add("w2", *closed.w2, w2, 1e-3);
            cmp.add("p0", *closed.p0, std::clamp(ctx.p0_tilde(w1, w2), 0.0, params.p2), 1e-3);
        }
    }
    cmp.finalize();
    return out;
}

KktReport kkt_residuals_fs(const MarketParams& params, Mno leader,
                           const WholesalePair& candidate, const KktTolerances& tol) {
    params.validate();
    const Ctx ctx(params);
    const Mno fol = other(leader);
    KktReport rep;

    const double p0t = ctx.p0_tilde(candidate.w1, candidate.w2);
    rep.feasibility_margin = params.p2 - p0t;
    const double p2_scale = std::max(1.0, params.p2);
    const bool on_boundary = std::abs(rep.feasibility_margin) <= 1e-6 * p2_scale;

    const double wf = fol == Mno::one ? candidate.w1 : candidate.w2;
    const double wl = leader == Mno::one ? candidate.w1 : candidate.w2;
    auto follower_profile = [&](double x) {
        const double w1 = fol == Mno::one ? x : candidate.w1;
        const double w2 = fol == Mno::one ? candidate.w2 : x;
        return branch_profit_pair(ctx, fol, w1, w2);
    };
    const double d_fol = central_derivative(follower_profile, wf);
    const double fol_profit = follower_profile(wf);
    const double a_fol = (1 - params.gamma) * ctx.d.pi(fol) / 2;

    double lambda_fol = 0;
    if (on_boundary) {
        lambda_fol = wide_derivative(follower_profile, wf) / a_fol;  // from stationarity
        rep.stationarity.push_back(0.0);
    } else {
        rep.stationarity.push_back(relative_residual(d_fol, wf, fol_profit));
    }
    rep.multipliers.push_back(lambda_fol);
    rep.complementary_slackness =
        std::abs(lambda_fol * (p0t - params.p2)) / std::max(1.0, std::abs(fol_profit));

    // Leader optimality along the follower's best-response line.
    auto leader_reduced = [&](double x) {
        const auto v = follower_vertex(ctx, leader, x);
        const double reply = v.value_or(0.0);
        const double w1 = leader == Mno::one ? x : reply;
        const double w2 = leader == Mno::one ? reply : x;
        return branch_profit_pair(ctx, leader, w1, w2);
    };
    const double d_lead = central_derivative(leader_reduced, wl);
    const double lead_profit = leader_reduced(wl);
    if (on_boundary) {
        // The binding constraint is the leader price at which the reply line
        // meets the boundary segment; its multiplier is the path derivative.
        rep.multipliers.push_back(wide_derivative(leader_reduced, wl));
        rep.stationarity.push_back(0.0);
    } else {
        rep.multipliers.push_back(0.0);
        rep.stationarity.push_back(relative_residual(d_lead, wl, lead_profit));
    }

    bool ok = rep.feasibility_margin >= -tol.feasibility * p2_scale;
    for (double r : rep.stationarity) ok = ok && r <= tol.stationarity;
    for (double m : rep.multipliers) ok = ok && m >= -tol.multiplier;
    ok = ok && rep.complementary_slackness <= tol.slackness;
    rep.satisfied = ok;
    return rep;
}

KktReport kkt_residuals_ps(const MarketParams& params, const WholesalePair& candidate,
                           const KktTolerances& tol) {
    params.validate();
    const Ctx ctx(params);
    KktReport rep;

    const double p0t = ctx.p0_tilde(candidate.w1, candidate.w2);
    rep.feasibility_margin = params.p2 - p0t;
    const double p2_scale = std::max(1.0, params.p2);
    const bool on_boundary = std::abs(rep.feasibility_margin) <= 1e-6 * p2_scale;

    double slackness = 0;
    for (Mno m : {Mno::one, Mno::two}) {
        const double wm = m == Mno::one ? candidate.w1 : candidate.w2;
        auto profile = [&](double x) {
            const double w1 = m == Mno::one ? x : candidate.w1;
            const double w2 = m == Mno::one ? candidate.w2 : x;
            return branch_profit_pair(ctx, m, w1, w2);
        };
        const double deriv = central_derivative(profile, wm);
        const double profit = profile(wm);
        const double am = (1 - params.gamma) * ctx.d.pi(m) / 2;
        double lambda = 0;
        if (on_boundary) {
            lambda = wide_derivative(profile, wm) / am;
            rep.stationarity.push_back(0.0);
        } else {
            rep.stationarity.push_back(relative_residual(deriv, wm, profit));
        }
        rep.multipliers.push_back(lambda);
        slackness = std::max(slackness, std::abs(lambda * (p0t - params.p2)) /
                                            std::max(1.0, std::abs(profit)));
    }
    rep.complementary_slackness = slackness;

    if (on_boundary) {
        const Thresholds th = thresholds(params);
        const double expected = params.eps * ctx.d.s * (th.r_flat_0 - params.r0);
        const double sum = rep.multipliers[0] + rep.multipliers[1];
        rep.multiplier_identity_gap = rel_gap(expected, sum);
    }

    bool ok = rep.feasibility_margin >= -tol.feasibility * p2_scale;
    for (double r : rep.stationarity) ok = ok && r <= tol.stationarity;
    for (double m : rep.multipliers) ok = ok && m >= -tol.multiplier;
    ok = ok && rep.complementary_slackness <= tol.slackness;
    if (rep.multiplier_identity_gap) ok = ok && *rep.multiplier_identity_gap <= tol.stationarity;
    rep.satisfied = ok;
    return rep;
}

KktReport kkt_residuals_part_nonpart(const MarketParams& params, Mno partner, double w,
                                     const KktTolerances& tol) {
    params.validate();
    const Ctx ctx(params);
    KktReport rep;

    const double p0t = ctx.p0_tilde_one(w);
    rep.feasibility_margin = params.p2 - p0t;
    const double p2_scale = std::max(1.0, params.p2);
    const bool retail_boundary = p0t >= params.p2 - 1e-6 * p2_scale;
    const double p0 = std::clamp(p0t, 0.0, params.p2);

    // Retail layer: entrant stationarity (interior) or its boundary multiplier.
    auto entrant = [&](double x) { return entrant_profit_branch(ctx, w, x); };
    const double d_retail = central_derivative(entrant, p0);
    if (retail_boundary) {
        rep.multipliers.push_back(wide_derivative(entrant, p0));
        rep.stationarity.push_back(0.0);
    } else {
        rep.multipliers.push_back(0.0);
        rep.stationarity.push_back(relative_residual(d_retail, p0, entrant(p0)));
    }

    // Wholesale layer on [0, w_bar].
    const double w_edge = w_bar_single(params);
    auto partner_reduced = [&](double x) { return branch_profit_single(ctx, partner, x); };
    const double d_wholesale = central_derivative(partner_reduced, w);
    const bool wholesale_boundary =
        std::abs(w - w_edge) <= 1e-6 * std::max(1.0, std::abs(w_edge));
    if (wholesale_boundary) {
        rep.multipliers.push_back(wide_derivative(partner_reduced, w));
        rep.stationarity.push_back(0.0);
    } else {
        rep.multipliers.push_back(0.0);
        rep.stationarity.push_back(relative_residual(d_wholesale, w, partner_reduced(w)));
    }
    rep.complementary_slackness =
        std::abs(rep.multipliers[0] * (p0 - params.p2)) /
        std::max(1.0, std::abs(entrant(p0)));

    bool ok = rep.feasibility_margin >= -tol.feasibility * p2_scale;
    for (double r : rep.stationarity) ok = ok && r <= tol.stationarity;
    for (double m : rep.multipliers) ok = ok && m >= -tol.multiplier;
    ok = ok && rep.complementary_slackness <= tol.slackness;
    rep.satisfied = ok;
    return rep;
}

CheckResult fs_case2_exclusion_check(const MarketParams& params, Mno leader) {
    params.validate();
    CheckResult result;
    const Ctx ctx(params);
    const Mno fol = other(leader);
    const double w_end = region::delta_intercept(params, leader);
    if (!(w_end > 0)) {
        result.pass = true;
        result.detail = "boundary segment empty; nothing to exclude";
        return result;
    }

    const Scenario scenario = Scenario::part_part_fs(leader);
    const CustomerFlows flows = customer_flows(params, scenario, params.p2);
    const double expected_slope = ctx.d.pi(leader) * (1 - params.gamma) * flows.q0;

    auto along_segment = [&](double wl) {
        const double wf = region::boundary_w(params, fol, wl);
        const double w1 = leader == Mno::one ? wl : wf;
        const double w2 = leader == Mno::one ? wf : wl;
        return mno_profit(params, scenario, leader, params.p2, Wholesale::pair(w1, w2));
    };

    result.pass = true;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double wl = t * w_end;
        const double slope = central_derivative(along_segment, wl);
        const double gap = rel_gap(expected_slope, slope);
        result.max_gap = std::max(result.max_gap, gap);
        if (!(slope > 0) || gap > 1e-5) result.pass = false;
    }
    result.detail = result.pass ? "profit strictly increases along the boundary segment"
                                : "slope mismatch along the boundary segment";
    return result;
}

CheckResult ps_phi_linearity_check(const MarketParams& params) {
    params.validate();
    const Thresholds th = thresholds(params);
    if (params.r0 >= th.r_flat_0)
        throw std::domain_error("ps_phi_linearity_check: requires r0 < r_flat_0");

    const Ctx ctx(params);
    const double g = params.gamma;
    const double span = params.eps * ctx.d.s * (th.r_flat_0 - params.r0);
    auto prices_at = [&](double lambda1) {
        const double lambda2 = span - lambda1;
        const double w1 = (ctx.d.h1 * params.q1 / params.p1 +
                           params.c1 * (1 - g) * ctx.d.pi1 * ctx.d.s + 2 * ctx.d.q_total -
                           2 * ctx.d.s * params.p2 - lambda1 / params.eps) /
                          ((1 - g) * ctx.d.pi1 * ctx.d.s);
        const double w2 = (ctx.d.h2 * params.q2 / params.p2 +
                           params.c2 * (1 - g) * ctx.d.pi2 * ctx.d.s + 2 * ctx.d.q_total -
                           2 * ctx.d.s * params.p2 - lambda2 / params.eps) /
                          ((1 - g) * ctx.d.pi2 * ctx.d.s);
        return WholesalePair{w1, w2};
    };

    constexpr int kPoints = 5;
    double phi1[kPoints], phi2[kPoints];
    double profit_scale = 1;
    CheckResult result;
    for (int k = 0; k < kPoints; ++k) {
        const double lambda1 = span * k / (kPoints - 1);
        const WholesalePair w = prices_at(lambda1);
        // every candidate sits exactly on the boundary segment
        const double off = std::abs(region::margin(params, w.w1, w.w2));
        if (off > 1e-7 * std::max(1.0, params.p2)) {
            result.detail = "candidate left the boundary segment";
            return result;
        }
        phi1[k] = branch_profit_pair(ctx, Mno::one, w.w1, w.w2);
        phi2[k] = branch_profit_pair(ctx, Mno::two, w.w1, w.w2);
        profit_scale = std::max({profit_scale, std::abs(phi1[k]), std::abs(phi2[k])});
    }

    bool affine = true;
    for (int k = 1; k + 1 < kPoints; ++k) {
        const double dd1 = std::abs(phi1[k - 1] - 2 * phi1[k] + phi1[k + 1]);
        const double dd2 = std::abs(phi2[k - 1] - 2 * phi2[k] + phi2[k + 1]);
        result.max_gap = std::max({result.max_gap, dd1 / profit_scale, dd2 / profit_scale});
        affine = affine && dd1 <= 1e-7 * profit_scale && dd2 <= 1e-7 * profit_scale;
    }
    bool opposing = true;
    for (int k = 0; k + 1 < kPoints; ++k) {
        opposing = opposing && phi1[k + 1] <= phi1[k] && phi2[k + 1] >= phi2[k];
    }

    result.pass = affine && opposing;
    result.detail = result.pass
                        ? "profits are affine with opposing monotonicity; no joint maximizer"
                        : (affine ? "monotonicity not opposing" : "profits not affine");
    return result;
}

}  // namespace mvno::oracle

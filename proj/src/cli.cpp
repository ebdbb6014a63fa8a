#include "mvno/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

#include "mvno/game.hpp"
#include "mvno/oracle.hpp"
#include "mvno/solvers.hpp"

namespace mvno::cli {

namespace {

constexpr const char* kSolveHeader =
    "scenario,leader,w1,w2,p0,boundary,q0,d1,d2,r_mvno,r_mno1,r_mno2,feasible,"
    "r_bar_10,r_bar_20,r_bar_0,r_flat_0";

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string flag(bool b) { return b ? "true" : "false"; }

// One CSV row for a solved scenario; column order matches kSolveHeader.
std::string solution_row(const MarketParams& params, const PriceSolution& sol) {
    const Thresholds th = thresholds(params);
    std::ostringstream row;
    row << sol.scenario.name() << ',';
    if (sol.scenario.kind == Scenario::Kind::part_part_fs)
        row << index(sol.scenario.leader());
    row << ',' << cell(sol.w1) << ',' << cell(sol.w2) << ',' << cell(sol.p0) << ',';
    if (sol.p0) row << flag(sol.boundary);
    row << ',';
    if (sol.flows)
        row << format_number(sol.flows->q0) << ',' << format_number(sol.flows->d1) << ','
            << format_number(sol.flows->d2);
    else
        row << ",,";
    row << ',' << cell(sol.profit_mvno) << ',' << cell(sol.profit_mno1) << ','
        << cell(sol.profit_mno2) << ',' << flag(sol.feasible) << ','
        << format_number(th.r_bar_10) << ',' << format_number(th.r_bar_20) << ','
        << format_number(th.r_bar_0) << ',' << format_number(th.r_flat_0);
    return row.str();
}

Scenario scenario_from(const RunConfig& config) {
    if (!config.scenario)
        throw std::invalid_argument("config: run.scenario (or --scenario) is required");
    return parse_scenario(*config.scenario, config.leader, config.market);
}

std::string classify_trend(const std::vector<double>& values) {
    if (values.size() < 2) return "n/a";
    double scale = 1;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double tol = 1e-9 * scale;
    bool up = false;
    bool down = false;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double diff = values[i] - values[i - 1];
        up = up || diff > tol;
        down = down || diff < -tol;
    }
    if (up && down) return "non-monotone";
    if (up) return "increasing";
    if (down) return "decreasing";
    return "constant";
}

void append_trend(std::ostream& out, const char* column,
                  const std::vector<std::optional<double>>& values) {
    std::vector<double> defined;
    for (const auto& v : values)
        if (v) defined.push_back(*v);
    out << "# trend " << column << ": " << classify_trend(defined) << '\n';
}

}  // namespace

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        config.validate();
        scenario = scenario_from(config);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitConfigError;
    }
    const PriceSolution sol = solve(config.market, scenario, config.tolerance);
    out << kSolveHeader << '\n' << solution_row(config.market, sol) << '\n';
    for (const auto& d : sol.diagnostics) err << "note: " << d << '\n';
    return sol.feasible ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        config.validate();
        scenario = scenario_from(config);
        if (!config.sweep)
            throw std::invalid_argument("config: run.sweep (or --sweep) is required");
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitConfigError;
    }
    const SweepSpec& sweep = *config.sweep;

    out << "sweep_value," << kSolveHeader << '\n';
    std::vector<std::optional<double>> w1s, w2s, p0s, scaled1, scaled2;
    for (int k = 0; k < sweep.steps; ++k) {
        const double value =
            sweep.from + (sweep.to - sweep.from) * k / (sweep.steps - 1);
        MarketParams point = config.market;
        if (sweep.variable == "gamma")
            point.gamma = value;
        else if (sweep.variable == "r0")
            point.r0 = value;
        else
            point.eps = value;
        const PriceSolution sol = solve(point, scenario, config.tolerance);
        out << format_number(value) << ',' << solution_row(point, sol) << '\n';

        w1s.push_back(sol.w1);
        w2s.push_back(sol.w2);
        p0s.push_back(sol.p0);
        if (sweep.variable == "gamma") {
            scaled1.push_back(sol.w1 ? std::optional((1 - value) * *sol.w1) : std::nullopt);
            scaled2.push_back(sol.w2 ? std::optional((1 - value) * *sol.w2) : std::nullopt);
        }
    }
    append_trend(out, "w1", w1s);
    append_trend(out, "w2", w2s);
    append_trend(out, "p0", p0s);
    if (sweep.variable == "gamma") {
        append_trend(out, "(1-gamma)*w1", scaled1);
        append_trend(out, "(1-gamma)*w2", scaled2);
    }
    return kExitOk;
}

int cmd_game(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Mno leader;
    try {
        config.validate();
        leader = config.leader ? (*config.leader == 1 ? Mno::one : Mno::two)
                               : game::default_fs_leader(config.market);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitConfigError;
    }

    const game::Prop4Report report =
        game::check_proposition4(config.market, leader, config.tolerance);

    out << "strategy_mno1,strategy_mno2,r_mno1,r_mno2\n";
    for (const auto& entry : report.equilibria.profiles) {
        const auto& cell = report.matrix.at(entry.profile.s1, entry.profile.s2);
        out << game::name(entry.profile.s1) << ',' << game::name(entry.profile.s2) << ','
            << format_number(cell.r1) << ',' << format_number(cell.r2) << '\n';
    }
    out << "# fs_leader: " << index(leader) << '\n';
    out << "# nash_equilibria:";
    for (const auto& profile : report.equilibria.equilibria)
        out << " (" << game::name(profile.s1) << ',' << game::name(profile.s2) << ')';
    if (report.equilibria.equilibria.empty()) out << " none";
    out << '\n';
    for (const auto& entry : report.equilibria.profiles) {
        out << "# margins (" << game::name(entry.profile.s1) << ','
            << game::name(entry.profile.s2) << "): " << format_number(entry.margin1) << ' '
            << format_number(entry.margin2) << '\n';
    }
    out << "# r0_le_r_bar_0: " << flag(report.hyp_r0_le_rbar0) << '\n';
    out << "# r0_le_r_bar_20: " << flag(report.hyp_r0_le_rbar20) << '\n';
    out << "# wholesale_above_cost: " << flag(report.hyp_w_above_cost) << '\n';
    for (auto [mno, lemma] : {std::pair{Mno::one, report.lemma3_mno1},
                              std::pair{Mno::two, report.lemma3_mno2}}) {
        out << "# lemma3 mno" << index(mno) << ": d_part=" << format_number(lemma.d_part)
            << " d_nonpart=" << format_number(lemma.d_nonpart) << " holds=" << flag(lemma.holds)
            << (lemma.hypothesis_met ? "" : " (informational: r0 > r_bar_0)") << '\n';
    }

    std::string summary;
    const bool cond_a = report.hyp_r0_le_rbar0 && report.hyp_w_above_cost;
    if (cond_a && report.hyp_r0_le_rbar20 && report.part_part_unique_nash)
        summary = "unique NE: (Part, Part)";
    else if (cond_a && report.part_part_is_nash)
        summary = "(Part, Part) is a NE; uniqueness not guaranteed (r0 > r_bar_20)";
    else if (report.part_part_is_nash)
        summary = "(Part, Part) is a NE (outside the guaranteed regime)";
    else
        summary = "(Part, Part) is not a NE (hypotheses not met)";
    out << "# summary: " << summary << '\n';
    return kExitOk;
}

namespace {

// The verification self-test hook: shifting the closed-form side of every
// price comparison by a nonzero amount must make verification fail.
void apply_injection(oracle::OracleVerdict& verdict, double inject) {
    if (inject == 0) return;
    for (auto& entry : verdict.entries) {
        entry.closed_form += inject;
        entry.rel_gap = std::abs(entry.closed_form - entry.oracle_value) /
                        std::max(1.0, std::abs(entry.closed_form));
        entry.ok = entry.rel_gap <= entry.tolerance;
    }
    verdict.finalize();
}

struct CheckLog {
    std::ostream& out;
    int passed = 0;
    int total = 0;

    void report(const std::string& name, bool pass, const std::string& detail) {
        ++total;
        passed += pass ? 1 : 0;
        out << "check " << name << ": " << (pass ? "pass" : "FAIL");
        if (!detail.empty()) out << " (" << detail << ")";
        out << '\n';
    }
    void verdict(const std::string& name, const oracle::OracleVerdict& v) {
        std::string detail = "max gap " + format_number(v.max_rel_gap);
        if (!v.note.empty()) detail += "; " + v.note;
        report(name, v.pass, detail);
    }
    void kkt(const std::string& name, const oracle::KktReport& r) {
        double worst = 0;
        for (double s : r.stationarity) worst = std::max(worst, s);
        std::string detail = "stationarity " + format_number(worst);
        if (r.multiplier_identity_gap)
            detail += ", multiplier identity gap " + format_number(*r.multiplier_identity_gap);
        report(name, r.satisfied, detail);
    }
};

}  // namespace

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitConfigError;
    }
    const MarketParams& market = config.market;
    const oracle::GridSpec grid = oracle::GridSpec::for_wholesale(market, config.grid_resolution);
    const double inject = config.verify_inject;
    CheckLog log{out};

    // Retail layer: the scan must land on the clamped critical price.
    for (double t : {0.5, 1.5}) {
        const double w = t * std::max(w_bar_single(market), 1.0);
        const Scenario sc = Scenario::part_nonpart(Mno::one);
        const auto [p0, profit] = grid_argmax_p0(market, sc, Wholesale::single(Mno::one, w), grid);
        (void)profit;
        const double expected =
            std::clamp(p0_tilde_single(market, w), 0.0, market.p2) + inject;
        const double gap = std::abs(expected - p0) / std::max(1.0, std::abs(expected));
        log.report("retail-argmax-w" + format_number(t), gap <= 1e-4,
                   "gap " + format_number(gap));
    }

    for (Mno partner : {Mno::one, Mno::two}) {
        auto verdict = oracle::part_nonpart_oracle(market, partner, grid);
        apply_injection(verdict, inject);
        log.verdict("part-nonpart-oracle-" + std::to_string(index(partner)), verdict);

        const PriceSolution closed = solve_part_nonpart(market, partner);
        const double w = partner == Mno::one ? *closed.w1 : *closed.w2;
        log.kkt("kkt-part-nonpart-" + std::to_string(index(partner)),
                oracle::kkt_residuals_part_nonpart(market, partner, w + inject));
    }

    for (Mno leader : {Mno::one, Mno::two}) {
        auto verdict = oracle::bilevel_fs_oracle(market, leader, grid);
        apply_injection(verdict, inject);
        log.verdict("bilevel-fs-oracle-" + std::to_string(index(leader)), verdict);

        const PriceSolution closed = solve_part_part_fs(market, leader);
        log.kkt("kkt-fs-" + std::to_string(index(leader)),
                oracle::kkt_residuals_fs(market, leader,
                                         {*closed.w1 + inject, *closed.w2 + inject}));
        log.report("fs-case2-exclusion-" + std::to_string(index(leader)),
                   oracle::fs_case2_exclusion_check(market, leader).pass, "");
    }

    {
        const auto ps = oracle::simultaneous_ps_oracle(market, grid);
        auto verdict = ps.comparison;
        apply_injection(verdict, inject);
        log.verdict("simultaneous-ps-oracle", verdict);

        const PriceSolution closed = solve_part_part_ps(market);
        const Thresholds th = thresholds(market);
        if (closed.feasible) {
            log.kkt("kkt-ps",
                    oracle::kkt_residuals_ps(market, {*closed.w1 + inject, *closed.w2 + inject}));
        } else {
            // Boundary-segment candidates carry the positive multiplier.
            log.kkt("kkt-ps-boundary-wA", oracle::kkt_residuals_ps(market, point_wA(market)));
            log.kkt("kkt-ps-boundary-wB", oracle::kkt_residuals_ps(market, point_wB(market)));
        }
        if (market.r0 < th.r_flat_0) {
            const auto phi = oracle::ps_phi_linearity_check(market);
            log.report("ps-phi-linearity", phi.pass, phi.detail);
        }
    }

    out << "verify: " << log.passed << "/" << log.total << " checks passed\n";
    return log.passed == log.total ? kExitOk : kExitVerifyFailed;
}

}  // namespace mvno::cli

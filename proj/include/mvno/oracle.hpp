#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvno/market.hpp"
#include "mvno/solvers.hpp"

/// Brute-force and KKT-based verification of the closed forms in solvers.
///
/// Every routine here recomputes optima from profit evaluations alone (grid
/// scans, parabola vertices, damped best-response iteration, central finite
/// differences) and compares against the closed-form results, reporting
/// gaps instead of silently passing. All searches are restricted to the
/// region where the entrant's unclamped retail optimum stays below p2;
/// outside it every wholesale objective grows linearly without bound, so an
/// unrestricted bounded scan would report its own edge rather than an
/// optimum (fs_case2_exclusion_check demonstrates the mechanism).
///
/// Grid evaluations are pure and independent per point; argmax ties break
/// toward the lower grid index so results are deterministic.
namespace mvno::oracle {

/// Search-domain description for the wholesale axes. Retail-price scans
/// always run on the problem domain [0, p2] and take only resolution and
/// refinement settings from the spec. Each refinement round shrinks the
/// span tenfold around the incumbent argmax.
struct GridSpec {
    double lower = 0.0;
    double upper = 1.0;
    int resolution = 2001;
    int refine_rounds = 2;

    void validate() const;

    /// Bounds generous enough to contain every candidate optimum:
    /// [0, 4 x max(w_bar, |wA|, |wB|, |wC| coordinates)].
    static GridSpec for_wholesale(const MarketParams& params, int resolution = 2001,
                                  int refine_rounds = 2);
};

/// One closed-form-vs-oracle comparison.
struct OracleVerdict {
    struct Entry {
        std::string label;
        double closed_form = 0;
        double oracle_value = 0;
        double rel_gap = 0;
        double tolerance = 0;
        bool ok = false;
    };
    std::vector<Entry> entries;
    double max_rel_gap = 0;
    bool pass = false;
    std::string note;

    void add(const std::string& label, double closed_form, double oracle_value, double tolerance);
    /// Recomputes max_rel_gap and pass from the entries (pass also requires
    /// that no entry was flagged inconsistent via `fail`).
    void finalize();
    void fail(const std::string& why);

  private:
    bool forced_failure_ = false;
};

/// KKT evaluation at a candidate point: stationarity residuals (relative,
/// see below), recovered multipliers, complementary slackness relative to
/// the profit scale, and the primal feasibility margin p2 - p0_tilde.
/// satisfied requires residuals <= stationarity_tol, multipliers >=
/// -multiplier_tol, |slackness| <= slackness_tol and margin >= -feasibility
/// tolerance (relative to p2).
///
/// A stationarity residual is |dR/dw| * max(1,|w|) / max(1,|R|): derivatives
/// are measured against the profit-per-price scale of the candidate so the
/// same tolerance works across parameter magnitudes.
struct KktReport {
    std::vector<double> stationarity;
    std::vector<double> multipliers;
    double complementary_slackness = 0;
    double feasibility_margin = 0;
    /// For the partially sequential system on the boundary segment: the
    /// relative gap of lambda1 + lambda2 against eps * S * (r_flat_0 - r0).
    std::optional<double> multiplier_identity_gap;
    bool satisfied = false;
};

/// Tolerances applied by the KKT evaluators.
struct KktTolerances {
    double stationarity = 1e-6;
    double multiplier = 1e-9;
    double slackness = 1e-9;
    double feasibility = 1e-9;
};

/// Pass/fail result of a structural check with the worst observed gap.
struct CheckResult {
    bool pass = false;
    double max_gap = 0;
    std::string detail;
};

/// Grid argmax of the entrant profit over p0 in [0, p2] at fixed wholesale
/// prices; returns (argmax, profit).
std::pair<double, double> grid_argmax_p0(const MarketParams& params, const Scenario& scenario,
                                         const Wholesale& w, const GridSpec& grid);

/// Nested scan for the single-partner problem: outer grid on the partner's
/// wholesale price over the non-clamped range, inner grid argmax on p0.
/// Compares (w_hat, p0_hat, partner profit) against solve_part_nonpart.
OracleVerdict part_nonpart_oracle(const MarketParams& params, Mno partner, const GridSpec& grid);

/// Bilevel scan for the fully sequential model: outer grid on the leader's
/// price, follower reply recovered as the vertex of its own-coordinate
/// profit parabola, retail layer from the two-partner retail optimum.
/// Compares the full triple and the leader profit against
/// solve_part_part_fs.
OracleVerdict bilevel_fs_oracle(const MarketParams& params, Mno leader, const GridSpec& grid);

enum class PsOutcome { interior, boundary, none };

/// Damped fixed-point iteration (step 0.5) on the coordinate-wise
/// best-response vertices for the partially sequential model.
struct PsOracleVerdict {
    PsOutcome outcome = PsOutcome::none;
    std::optional<WholesalePair> fixed_point;
    int iterations = 0;
    OracleVerdict comparison;  ///< agreement with solve_part_part_ps
};

PsOracleVerdict simultaneous_ps_oracle(const MarketParams& params, const GridSpec& grid);

/// KKT report for the follower problem (and the leader's reduced problem
/// along the follower's best-response line) at a candidate price pair.
KktReport kkt_residuals_fs(const MarketParams& params, Mno leader, const WholesalePair& candidate,
                           const KktTolerances& tol = {});

/// KKT report for the simultaneous two-partner system at a candidate pair;
/// on the boundary segment also evaluates the multiplier sum identity.
KktReport kkt_residuals_ps(const MarketParams& params, const WholesalePair& candidate,
                           const KktTolerances& tol = {});

/// KKT report for the single-partner problem at a candidate wholesale price
/// (retail layer and wholesale layer).
KktReport kkt_residuals_part_nonpart(const MarketParams& params, Mno partner, double w,
                                     const KktTolerances& tol = {});

/// Along the boundary segment the leader's profit strictly increases (slope
/// pi_leader * (1-gamma) * Q0(p2)), driving the follower price to zero at
/// the segment's end; confirms the slope at five sample points.
CheckResult fs_case2_exclusion_check(const MarketParams& params, Mno leader);

/// For r0 < r_flat_0, walks the boundary-segment candidates parametrized by
/// lambda1 and confirms both partners' profits are affine with opposing
/// monotonicity, so no candidate maximizes both at once. Throws
/// std::domain_error when r0 >= r_flat_0.
CheckResult ps_phi_linearity_check(const MarketParams& params);

}  // namespace mvno::oracle

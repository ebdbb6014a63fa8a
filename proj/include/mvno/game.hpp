#pragma once

#include <array>
#include <string>
#include <vector>

#include "mvno/market.hpp"
#include "mvno/solvers.hpp"

/// 2x2 partnership game between the two operators: each chooses whether to
/// lease capacity to the entrant. The two-partner cell uses the fully
/// sequential model with a caller-chosen leader (the partially sequential
/// model can be infeasible and so cannot populate a payoff matrix).
namespace mvno::game {

enum class Strategy { part, nonpart };

inline const char* name(Strategy s) { return s == Strategy::part ? "part" : "nonpart"; }

struct PayoffCell {
    double r1 = 0;
    double r2 = 0;
    std::string provenance;  ///< which scenario solve produced the cell
};

struct PayoffMatrix {
    // indexed [strategy of MNO 1][strategy of MNO 2], part = 0
    std::array<std::array<PayoffCell, 2>, 2> cells;
    Mno fs_leader = Mno::one;

    const PayoffCell& at(Strategy s1, Strategy s2) const {
        return cells[s1 == Strategy::part ? 0 : 1][s2 == Strategy::part ? 0 : 1];
    }
    PayoffCell& at(Strategy s1, Strategy s2) {
        return cells[s1 == Strategy::part ? 0 : 1][s2 == Strategy::part ? 0 : 1];
    }
};

struct Profile {
    Strategy s1 = Strategy::part;
    Strategy s2 = Strategy::part;
    bool operator==(const Profile&) const = default;
};

/// Pure-equilibrium enumeration with per-profile unilateral deviation
/// margins (profit lost by deviating; nonnegative margins make a profile an
/// equilibrium, ties included).
struct EquilibriumReport {
    struct Entry {
        Profile profile;
        double margin1 = 0;
        double margin2 = 0;
        bool is_nash = false;
    };
    std::array<Entry, 4> profiles;
    std::vector<Profile> equilibria;
};

/// Defections of one operator with and without its own partnership, holding
/// the rival partnered: d_part under the two-partner scenario, d_nonpart
/// when only the rival leases to the entrant.
struct Lemma3Result {
    double d_part = 0;
    double d_nonpart = 0;
    bool holds = false;          ///< d_nonpart >= d_part - tolerance
    bool hypothesis_met = false; ///< r0 <= r_bar_0 (informational otherwise)
};

/// Full equilibrium assessment: the matrix, the enumeration, the hypothesis
/// flags and the implied conclusions.
struct Prop4Report {
    PayoffMatrix matrix;
    EquilibriumReport equilibria;
    bool hyp_r0_le_rbar0 = false;
    bool hyp_r0_le_rbar20 = false;
    bool hyp_w_above_cost = false;  ///< every optimal wholesale price >= network cost
    bool part_part_is_nash = false;
    bool part_part_unique_nash = false;
    Lemma3Result lemma3_mno1;
    Lemma3Result lemma3_mno2;
};

/// The operator with the larger pre-entry market share (ties go to MNO 1).
Mno default_fs_leader(const MarketParams& params);

/// Builds all four cells: the two-partner cell from the fully sequential
/// solve, mixed cells from the single-partner solve (the non-partner's
/// payoff evaluated at the partner's optimal prices), and the no-entry cell.
PayoffMatrix build_payoff_matrix(const MarketParams& params, Mno fs_leader);

/// Exhaustive check of all four profiles against both unilateral deviations.
/// The margin tolerance is relative to the payoff scale.
EquilibriumReport find_pure_nash(const PayoffMatrix& matrix, double tol = 1e-9);

Lemma3Result check_lemma3(const MarketParams& params, Mno fs_leader, Mno mno,
                          double tol = 1e-9);

Prop4Report check_proposition4(const MarketParams& params, Mno fs_leader, double tol = 1e-9);

}  // namespace mvno::game

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

/// Two-MNO / one-MVNO wholesale market model.
///
/// Everything in this namespace is a pure function of its arguments; there is
/// no shared mutable state and all operations are safe to call concurrently.
/// All quantities are 64-bit doubles: customer bases in subscribers, prices
/// and unit costs in currency per subscriber per period, profits in currency
/// per period.
namespace mvno {

/// Identifies one of the two network operators.
enum class Mno : int { one = 1, two = 2 };

constexpr Mno other(Mno m) { return m == Mno::one ? Mno::two : Mno::one; }
constexpr int index(Mno m) { return static_cast<int>(m); }

/// Exogenous market constants.
///
/// The standing price ordering is p0 <= p2 <= p1: the entrant can only
/// undercut, and operator 2 is the cheaper incumbent. validate() enforces
/// the ordering together with the remaining domain constraints and throws
/// std::invalid_argument naming the violated constraint.
struct MarketParams {
    double q1 = 0;     ///< customer base of MNO 1 before entry
    double q2 = 0;     ///< customer base of MNO 2 before entry
    double p1 = 0;     ///< retail unit price of MNO 1
    double p2 = 0;     ///< retail unit price of MNO 2 (p2 <= p1)
    double c1 = 0;     ///< unit network cost of MNO 1
    double c2 = 0;     ///< unit network cost of MNO 2
    double ct1 = 0;    ///< unit non-network cost of MNO 1
    double ct2 = 0;    ///< unit non-network cost of MNO 2
    double cf1 = 0;    ///< fixed cost of MNO 1
    double cf2 = 0;    ///< fixed cost of MNO 2
    double eps = 0;    ///< price-demand elasticity coefficient (> 0)
    double gamma = 0;  ///< share of entrant traffic on free WiFi, in [0, 0.999]
    double r0 = 0;     ///< entrant net unit indirect revenue
    double ct0 = 0;    ///< entrant unit non-network cost
    double cf0 = 0;    ///< entrant fixed cost

    void validate() const;

    /// Relabels the two operators (1 <-> 2). Only yields valid params when
    /// the swapped ordering p2 <= p1 still holds, i.e. for p1 == p2.
    MarketParams swapped() const;

    double q(Mno m) const { return m == Mno::one ? q1 : q2; }
    double p(Mno m) const { return m == Mno::one ? p1 : p2; }
    double c(Mno m) const { return m == Mno::one ? c1 : c2; }
    double ct(Mno m) const { return m == Mno::one ? ct1 : ct2; }
    double cf(Mno m) const { return m == Mno::one ? cf1 : cf2; }
};

/// Constants computed once from MarketParams.
struct DerivedQuantities {
    double q_total;  ///< Q = q1 + q2
    double pi1;      ///< market share of MNO 1
    double pi2;      ///< market share of MNO 2, exactly 1 - pi1
    double s;        ///< S = Q1/p1 + Q2/p2
    double h1;       ///< unit margin p1 - c1 - ct1
    double h2;       ///< unit margin p2 - c2 - ct2
    double t;        ///< T = Q + (r0 - ct0) * S

    static DerivedQuantities from(const MarketParams& params);

    double pi(Mno m) const { return m == Mno::one ? pi1 : pi2; }
    double h(Mno m) const { return m == Mno::one ? h1 : h2; }
};

/// Which partnership configuration and decision model is being solved.
struct Scenario {
    enum class Kind { part_nonpart, part_part_fs, part_part_ps, nonpart_nonpart };

    Kind kind = Kind::nonpart_nonpart;
    Mno actor = Mno::one;  // partner for part_nonpart, leader for part_part_fs

    static Scenario part_nonpart(Mno partner) { return {Kind::part_nonpart, partner}; }
    static Scenario part_part_fs(Mno leader) { return {Kind::part_part_fs, leader}; }
    static Scenario part_part_ps() { return {Kind::part_part_ps, Mno::one}; }
    static Scenario nonpart_nonpart() { return {Kind::nonpart_nonpart, Mno::one}; }

    /// Partner in a single-partner scenario.
    Mno partner() const;
    /// Leader in the fully sequential two-partner scenario.
    Mno leader() const;
    bool both_partner() const {
        return kind == Kind::part_part_fs || kind == Kind::part_part_ps;
    }
    /// True when the given operator leases capacity to the entrant.
    bool is_partner(Mno m) const;

    /// Stable identifier, e.g. "part-nonpart-1" or "part-part-ps".
    std::string name() const;
};

/// Wholesale price vector; a component is set only for partner MNOs.
struct Wholesale {
    std::optional<double> w1;
    std::optional<double> w2;

    static Wholesale none() { return {}; }
    static Wholesale single(Mno partner, double w);
    static Wholesale pair(double w1, double w2);

    /// Price charged by the given operator; throws if it is not set.
    double of(Mno m) const;
};

/// Defections and the split of the entrant's traffic across access networks.
struct CustomerFlows {
    double d1 = 0;            ///< defection from MNO 1 (Q_{1,0})
    double d2 = 0;            ///< defection from MNO 2 (Q_{2,0})
    double q0 = 0;            ///< entrant customer base, d1 + d2
    double wifi_traffic = 0;  ///< gamma * q0
    double mno1_traffic = 0;  ///< carried on MNO 1's network
    double mno2_traffic = 0;  ///< carried on MNO 2's network
};

/// Part of a customer base qi that defects to an entrant priced at p0,
/// under constant price-demand elasticity: eps * qi * (pi - p0) / pi.
/// Requires pi > 0 and 0 <= p0 <= pi.
double defection(double qi, double pi, double p0, double eps);

/// Defections from both MNOs at entrant price p0 and the traffic split for
/// the given scenario. In a single-partner scenario the whole non-WiFi share
/// (1 - gamma) * q0 rides on the partner; with two partners it splits
/// proportionally to pre-entry market shares. Requires 0 <= p0 <= p2.
CustomerFlows customer_flows(const MarketParams& params, const Scenario& scenario, double p0);

/// Entrant profit at retail price p0 given the wholesale prices the scenario
/// reads (one component for a single partner, both otherwise). With no
/// partner at all the entrant has no customers and the result is -cf0.
double mvno_profit(const MarketParams& params, const Scenario& scenario, double p0,
                   const Wholesale& w);

/// Operator profit in the given scenario. Partners earn retail margin on the
/// retained base plus the wholesale margin on carried entrant traffic;
/// non-partners keep retail margin only; with no entrant there is no
/// defection at all.
double mno_profit(const MarketParams& params, const Scenario& scenario, Mno mno, double p0,
                  const Wholesale& w);

}  // namespace mvno

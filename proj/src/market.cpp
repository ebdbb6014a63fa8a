#include "mvno/market.hpp"

#include <cmath>
#include <utility>

namespace mvno {

namespace {

void reject(const std::string& what) { throw std::invalid_argument("MarketParams: " + what); }

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0; }

}  // namespace

void MarketParams::validate() const {
    if (!(std::isfinite(q1) && q1 > 0)) reject("q1 must be > 0");
    if (!(std::isfinite(q2) && q2 > 0)) reject("q2 must be > 0");
    if (!(std::isfinite(eps) && eps > 0)) reject("eps must be > 0");
    if (!(std::isfinite(gamma) && gamma >= 0)) reject("gamma must be >= 0");
    // 1/(1 - gamma) appears throughout; values above 0.999 leave the model
    // ill-conditioned, so they are rejected outright.
    if (gamma > 0.999) reject("gamma must be <= 0.999");
    for (auto [v, name] : {std::pair{p1, "p1"}, {p2, "p2"}, {c1, "c1"}, {c2, "c2"},
                           {ct1, "ct1"}, {ct2, "ct2"}, {cf1, "cf1"}, {cf2, "cf2"},
                           {r0, "r0"}, {ct0, "ct0"}, {cf0, "cf0"}}) {
        if (!finite_nonneg(v)) reject(std::string(name) + " must be finite and >= 0");
    }
    if (p1 <= 0) reject("p1 must be > 0");
    if (p2 <= 0) reject("p2 must be > 0");
    if (p2 > p1) reject("price ordering requires p2 <= p1");
    if (p1 - c1 - ct1 < 0) reject("h1 = p1 - c1 - ct1 must be >= 0");
    if (p2 - c2 - ct2 < 0) reject("h2 = p2 - c2 - ct2 must be >= 0");
}

MarketParams MarketParams::swapped() const {
    MarketParams s = *this;
    std::swap(s.q1, s.q2);
    std::swap(s.p1, s.p2);
    std::swap(s.c1, s.c2);
    std::swap(s.ct1, s.ct2);
    std::swap(s.cf1, s.cf2);
    return s;
}

DerivedQuantities DerivedQuantities::from(const MarketParams& params) {
    DerivedQuantities d{};
    d.q_total = params.q1 + params.q2;
    d.pi1 = params.q1 / d.q_total;
    d.pi2 = 1.0 - d.pi1;
    d.s = params.q1 / params.p1 + params.q2 / params.p2;
    d.h1 = params.p1 - params.c1 - params.ct1;
    d.h2 = params.p2 - params.c2 - params.ct2;
    d.t = d.q_total + (params.r0 - params.ct0) * d.s;
    return d;
}

Mno Scenario::partner() const {
    if (kind != Kind::part_nonpart)
        throw std::logic_error("Scenario::partner: not a single-partner scenario");
    return actor;
}

Mno Scenario::leader() const {
    if (kind != Kind::part_part_fs)
        throw std::logic_error("Scenario::leader: not a fully sequential scenario");
    return actor;
}

bool Scenario::is_partner(Mno m) const {
    switch (kind) {
        case Kind::part_nonpart: return m == actor;
        case Kind::part_part_fs:
        case Kind::part_part_ps: return true;
        case Kind::nonpart_nonpart: return false;
    }
    return false;
}

std::string Scenario::name() const {
    switch (kind) {
        case Kind::part_nonpart:
            return actor == Mno::one ? "part-nonpart-1" : "part-nonpart-2";
        case Kind::part_part_fs: return "part-part-fs";
        case Kind::part_part_ps: return "part-part-ps";
        case Kind::nonpart_nonpart: return "nonpart-nonpart";
    }
    return "unknown";
}

Wholesale Wholesale::single(Mno partner, double w) {
    Wholesale out;
    (partner == Mno::one ? out.w1 : out.w2) = w;
    return out;
}

Wholesale Wholesale::pair(double w1, double w2) { return {w1, w2}; }

double Wholesale::of(Mno m) const {
    const auto& component = m == Mno::one ? w1 : w2;
    if (!component)
        throw std::invalid_argument("Wholesale::of: no price set for mno " +
                                    std::to_string(index(m)));
    return *component;
}

double defection(double qi, double pi, double p0, double eps) {
    if (!(pi > 0)) throw std::domain_error("defection: pi must be > 0");
    if (p0 < 0) throw std::domain_error("defection: p0 must be >= 0");
    if (p0 > pi)
        throw std::domain_error("defection: p0 > pi violates the price ordering");
    return eps * qi * (pi - p0) / pi;
}

CustomerFlows customer_flows(const MarketParams& params, const Scenario& scenario, double p0) {
    CustomerFlows flows;
    if (scenario.kind == Scenario::Kind::nonpart_nonpart) return flows;  // no entry

    if (p0 < 0 || p0 > params.p2)
        throw std::domain_error("customer_flows: p0 must lie in [0, p2]");

    flows.d1 = defection(params.q1, params.p1, p0, params.eps);
    flows.d2 = defection(params.q2, params.p2, p0, params.eps);
    flows.q0 = flows.d1 + flows.d2;
    flows.wifi_traffic = params.gamma * flows.q0;
    const double carried = (1.0 - params.gamma) * flows.q0;
    if (scenario.both_partner()) {
        const auto d = DerivedQuantities::from(params);
        flows.mno1_traffic = d.pi1 * carried;
        flows.mno2_traffic = d.pi2 * carried;
    } else {
        (scenario.partner() == Mno::one ? flows.mno1_traffic : flows.mno2_traffic) = carried;
    }
    return flows;
}

double mvno_profit(const MarketParams& params, const Scenario& scenario, double p0,
                   const Wholesale& w) {
    if (scenario.kind == Scenario::Kind::nonpart_nonpart) return -params.cf0;
    const CustomerFlows flows = customer_flows(params, scenario, p0);
    double wholesale_cost;
    if (scenario.both_partner()) {
        const auto d = DerivedQuantities::from(params);
        wholesale_cost =
            (1.0 - params.gamma) * (w.of(Mno::one) * d.pi1 + w.of(Mno::two) * d.pi2) * flows.q0;
    } else {
        wholesale_cost = w.of(scenario.partner()) * (1.0 - params.gamma) * flows.q0;
    }
    return (p0 + params.r0) * flows.q0 - wholesale_cost - params.ct0 * flows.q0 - params.cf0;
}

double mno_profit(const MarketParams& params, const Scenario& scenario, Mno mno, double p0,
                  const Wholesale& w) {
    const auto d = DerivedQuantities::from(params);
    if (scenario.kind == Scenario::Kind::nonpart_nonpart)
        return d.h(mno) * params.q(mno) - params.cf(mno);

    const CustomerFlows flows = customer_flows(params, scenario, p0);
    const double own_defection = mno == Mno::one ? flows.d1 : flows.d2;
    const double retail = d.h(mno) * (params.q(mno) - own_defection);
    if (!scenario.is_partner(mno)) return retail - params.cf(mno);

    const double share = scenario.both_partner() ? d.pi(mno) : 1.0;
    const double wholesale =
        (w.of(mno) - params.c(mno)) * (1.0 - params.gamma) * share * flows.q0;
    return retail + wholesale - params.cf(mno);
}

}  // namespace mvno

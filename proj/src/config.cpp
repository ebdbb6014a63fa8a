#include "mvno/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include <json.hpp>

#include "mvno/game.hpp"

namespace mvno {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
    throw std::invalid_argument("config: " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || item.key() == a;
        if (!known) bad("unknown key '" + where + "." + item.key() + "'");
    }
}

double require_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) bad("missing key '" + where + "." + key + "'");
    if (!obj[key].is_number()) bad("'" + where + "." + key + "' must be a number");
    return obj[key].get<double>();
}

}  // namespace

void RunConfig::validate() const {
    market.validate();
    if (leader && *leader != 1 && *leader != 2) bad("run.leader must be 1 or 2");
    if (scenario) parse_scenario(*scenario, leader, market);  // throws on bad name
    if (grid_resolution < 3) bad("run.grid_resolution must be >= 3");
    if (!(tolerance > 0)) bad("run.tolerance must be > 0");
    if (sweep) {
        if (sweep->steps < 2) bad("run.sweep.steps must be >= 2");
        const double lo = std::min(sweep->from, sweep->to);
        const double hi = std::max(sweep->from, sweep->to);
        if (sweep->variable == "gamma") {
            if (lo < 0 || hi > 0.999) bad("run.sweep range for gamma must lie in [0, 0.999]");
        } else if (sweep->variable == "r0") {
            if (lo < 0) bad("run.sweep range for r0 must be >= 0");
        } else if (sweep->variable == "eps") {
            if (!(lo > 0)) bad("run.sweep range for eps must be > 0");
        } else {
            bad("run.sweep.variable must be one of gamma, r0, eps");
        }
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        bad("invalid JSON in '" + path + "': " + e.what());
    }
    if (!doc.is_object()) bad("top level must be an object");
    check_keys(doc, "$", {"market", "run"});
    if (!doc.contains("market")) bad("missing 'market' object");

    const json& m = doc["market"];
    if (!m.is_object()) bad("'market' must be an object");
    check_keys(m, "market",
               {"q1", "q2", "p1", "p2", "c1", "c2", "ct1", "ct2", "cf1", "cf2", "eps", "gamma",
                "r0", "ct0", "cf0"});
    RunConfig config;
    config.market.q1 = require_number(m, "market", "q1");
    config.market.q2 = require_number(m, "market", "q2");
    config.market.p1 = require_number(m, "market", "p1");
    config.market.p2 = require_number(m, "market", "p2");
    config.market.c1 = require_number(m, "market", "c1");
    config.market.c2 = require_number(m, "market", "c2");
    config.market.ct1 = require_number(m, "market", "ct1");
    config.market.ct2 = require_number(m, "market", "ct2");
    config.market.cf1 = require_number(m, "market", "cf1");
    config.market.cf2 = require_number(m, "market", "cf2");
    config.market.eps = require_number(m, "market", "eps");
    config.market.gamma = require_number(m, "market", "gamma");
    config.market.r0 = require_number(m, "market", "r0");
    config.market.ct0 = require_number(m, "market", "ct0");
    config.market.cf0 = require_number(m, "market", "cf0");

    if (doc.contains("run")) {
        const json& r = doc["run"];
        if (!r.is_object()) bad("'run' must be an object");
        check_keys(r, "run",
                   {"scenario", "leader", "sweep", "grid_resolution", "tolerance", "out",
                    "verify_inject"});
        if (r.contains("scenario")) {
            if (!r["scenario"].is_string()) bad("'run.scenario' must be a string");
            config.scenario = r["scenario"].get<std::string>();
        }
        if (r.contains("leader")) {
            if (!r["leader"].is_number_integer()) bad("'run.leader' must be an integer");
            config.leader = r["leader"].get<int>();
        }
        if (r.contains("sweep")) {
            const json& s = r["sweep"];
            if (!s.is_object()) bad("'run.sweep' must be an object");
            check_keys(s, "run.sweep", {"variable", "from", "to", "steps"});
            SweepSpec sweep;
            if (!s.contains("variable") || !s["variable"].is_string())
                bad("'run.sweep.variable' must be a string");
            sweep.variable = s["variable"].get<std::string>();
            sweep.from = require_number(s, "run.sweep", "from");
            sweep.to = require_number(s, "run.sweep", "to");
            if (!s.contains("steps") || !s["steps"].is_number_integer())
                bad("'run.sweep.steps' must be an integer");
            sweep.steps = s["steps"].get<int>();
            config.sweep = sweep;
        }
        if (r.contains("grid_resolution")) {
            if (!r["grid_resolution"].is_number_integer())
                bad("'run.grid_resolution' must be an integer");
            config.grid_resolution = r["grid_resolution"].get<int>();
        }
        if (r.contains("tolerance")) config.tolerance = require_number(r, "run", "tolerance");
        if (r.contains("out")) {
            if (!r["out"].is_string()) bad("'run.out' must be a string");
            config.out_path = r["out"].get<std::string>();
        }
        if (r.contains("verify_inject"))
            config.verify_inject = require_number(r, "run", "verify_inject");
    }
    return config;
}

Scenario parse_scenario(const std::string& name, std::optional<int> leader,
                        const MarketParams& market) {
    if (name == "part-nonpart-1") return Scenario::part_nonpart(Mno::one);
    if (name == "part-nonpart-2") return Scenario::part_nonpart(Mno::two);
    if (name == "part-part-fs") {
        if (leader) return Scenario::part_part_fs(*leader == 1 ? Mno::one : Mno::two);
        return Scenario::part_part_fs(game::default_fs_leader(market));
    }
    if (name == "part-part-ps") return Scenario::part_part_ps();
    if (name == "nonpart-nonpart") return Scenario::nonpart_nonpart();
    bad("unknown scenario '" + name +
        "' (expected part-nonpart-1, part-nonpart-2, part-part-fs, part-part-ps or "
        "nonpart-nonpart)");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    std::string s(buf);
    if (s == "-0") return "0";
    return s;
}

}  // namespace mvno

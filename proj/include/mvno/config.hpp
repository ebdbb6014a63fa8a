#pragma once

#include <optional>
#include <string>

#include "mvno/market.hpp"

namespace mvno {

/// Sweep request over one model variable.
struct SweepSpec {
    std::string variable;  ///< "gamma", "r0" or "eps"
    double from = 0;
    double to = 0;
    int steps = 0;
};

/// Everything a command needs: the market plus run parameters. Loaded from a
/// JSON document with top-level objects "market" and "run"; unknown keys are
/// rejected so typos surface immediately. Command-line flags override the
/// "run" values.
struct RunConfig {
    MarketParams market;
    std::optional<std::string> scenario;
    std::optional<int> leader;
    std::optional<SweepSpec> sweep;
    int grid_resolution = 2001;
    double tolerance = 1e-9;
    std::optional<std::string> out_path;
    double verify_inject = 0;  ///< verification self-test hook, see cmd_verify

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

RunConfig load_run_config(const std::string& path);

/// Scenario from its CSV/CLI identifier; part-part-fs takes the leader from
/// `leader` (falling back to the larger-market-share operator).
Scenario parse_scenario(const std::string& name, std::optional<int> leader,
                        const MarketParams& market);

/// Fixed 12-significant-digit representation, locale independent; the CSV
/// writers use this everywhere so identical runs are byte identical.
std::string format_number(double v);

}  // namespace mvno

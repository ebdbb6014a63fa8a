#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* kReferenceJson = R"({
  "market": {
    "q1": 600, "q2": 400, "p1": 40, "p2": 30,
    "c1": 8, "c2": 6, "ct1": 4, "ct2": 3, "cf1": 0, "cf2": 0,
    "eps": 0.5, "gamma": 0.4, "r0": 10, "ct0": 2, "cf0": 0
  }
})";

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::create_directories("cli_tmp");
    const std::string out_path = "cli_tmp/out" + std::to_string(counter) + ".txt";
    const std::string err_path = "cli_tmp/err" + std::to_string(counter) + ".txt";
    ++counter;
    const std::string cmd =
        std::string(MVNO_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = status == -1 ? -1 : WEXITSTATUS(status);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::string reference_config(const std::string& patch_key = "", double value = 0) {
    static int counter = 0;
    fs::create_directories("cli_tmp");
    const std::string path = "cli_tmp/config" + std::to_string(counter++) + ".json";
    std::string doc = kReferenceJson;
    if (!patch_key.empty()) {
        const std::string needle = "\"" + patch_key + "\": ";
        const auto pos = doc.find(needle);
        REQUIRE(pos != std::string::npos);
        const auto value_start = pos + needle.size();
        auto value_end = value_start;
        while (doc[value_end] != ',' && doc[value_end] != '\n') ++value_end;
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        doc = doc.substr(0, value_start) + buf + doc.substr(value_end);
    }
    spit(path, doc);
    return path;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

// header-indexed field access for one CSV row
struct Row {
    std::vector<std::string> header;
    std::vector<std::string> fields;

    std::string get(const std::string& column) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == column) return fields.at(i);
        FAIL("missing column ", column);
        return "";
    }
    double num(const std::string& column) const { return std::stod(get(column)); }
};

Row parse_row(const std::string& csv, std::size_t row_index = 0) {
    const auto ls = lines_of(csv);
    REQUIRE(ls.size() >= row_index + 2);
    return {split(ls[0], ','), split(ls[row_index + 1], ',')};
}

}  // namespace

TEST_CASE("solve: fully sequential boundary solution") {
    const RunResult r =
        run_cli("solve --config " + reference_config() + " --scenario part-part-fs --leader 1");
    REQUIRE(r.exit_code == 0);
    const Row row = parse_row(r.out);
    CHECK(row.get("scenario") == "part-part-fs");
    CHECK(row.get("leader") == "1");
    CHECK(row.num("w1") == doctest::Approx(29.9869281046).epsilon(1e-9));
    CHECK(row.num("w2") == doctest::Approx(91.2941176471).epsilon(1e-9));
    CHECK(row.get("p0") == "30");
    CHECK(row.get("boundary") == "true");
    CHECK(row.get("feasible") == "true");
    CHECK(row.num("r_bar_0") == doctest::Approx(38.0847058824).epsilon(1e-9));
}

TEST_CASE("solve: partially sequential infeasibility exits with code 2") {
    const RunResult r =
        run_cli("solve --config " + reference_config() + " --scenario part-part-ps");
    CHECK(r.exit_code == 2);
    const Row row = parse_row(r.out);
    CHECK(row.get("feasible") == "false");
    CHECK(row.get("w1").empty());
    CHECK(row.get("p0").empty());
    CHECK(row.get("r_mvno").empty());
}

TEST_CASE("solve: no-entry scenario populates only retail profits") {
    const RunResult r =
        run_cli("solve --config " + reference_config() + " --scenario nonpart-nonpart");
    REQUIRE(r.exit_code == 0);
    const Row row = parse_row(r.out);
    CHECK(row.get("w1").empty());
    CHECK(row.get("w2").empty());
    CHECK(row.get("p0").empty());
    CHECK(row.get("r_mno1") == "16800");
    CHECK(row.get("r_mno2") == "8400");
    CHECK(row.get("q0") == "0");
}

TEST_CASE("solve: missing scenario is a config error") {
    const RunResult r = run_cli("solve --config " + reference_config());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("scenario") != std::string::npos);
}

TEST_CASE("config rejects unknown keys and invalid values") {
    fs::create_directories("cli_tmp");
    spit("cli_tmp/bad_key.json",
         R"({"market": {"q1": 1, "typo": 2}, "run": {}})");
    const RunResult r1 =
        run_cli("solve --config cli_tmp/bad_key.json --scenario part-part-ps");
    CHECK(r1.exit_code == 1);
    CHECK(r1.err.find("typo") != std::string::npos);

    const RunResult r2 = run_cli("solve --config " + reference_config("gamma", 1.0) +
                                 " --scenario part-part-ps");
    CHECK(r2.exit_code == 1);
    CHECK(r2.err.find("gamma") != std::string::npos);

    const RunResult r3 =
        run_cli("solve --config " + reference_config() + " --scenario no-such-scenario");
    CHECK(r3.exit_code == 1);

    const RunResult r4 = run_cli("solve --config cli_tmp/does_not_exist.json");
    CHECK(r4.exit_code == 1);
}

TEST_CASE("sweep: wholesale price grows with gamma and scales like 1/(1-gamma)") {
    const RunResult r = run_cli("sweep --config " + reference_config() +
                                " --scenario part-nonpart-1 --sweep gamma --from 0 --to 0.95 "
                                "--steps 12");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines_of(r.out);
    const auto header = split(ls[0], ',');
    CHECK(header[0] == "sweep_value");
    int rows = 0;
    for (const auto& l : ls)
        if (!l.empty() && l[0] != '#' && l.find("sweep_value") != 0) ++rows;
    CHECK(rows == 12);
    CHECK(r.out.find("# trend w1: increasing") != std::string::npos);
    CHECK(r.out.find("# trend (1-gamma)*w1:") != std::string::npos);
}

TEST_CASE("sweep: retail price sticks to p2 until the threshold, then falls") {
    const RunResult r = run_cli("sweep --config " + reference_config() +
                                " --scenario part-part-fs --leader 1 --sweep r0 --from 0 "
                                "--to 50 --steps 26");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines_of(r.out);
    const auto header = split(ls[0], ',');
    std::size_t value_col = 0, p0_col = 0;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "sweep_value") value_col = i;
        if (header[i] == "p0") p0_col = i;
    }
    double prev_p0 = 1e300;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        if (ls[i].empty() || ls[i][0] == '#') continue;
        const auto fields = split(ls[i], ',');
        const double r0 = std::stod(fields[value_col]);
        const double p0 = std::stod(fields[p0_col]);
        if (r0 <= 38.08) CHECK(p0 == doctest::Approx(30.0));
        if (r0 >= 40) CHECK(p0 < 30.0);
        CHECK(p0 <= prev_p0 + 1e-9);
        prev_p0 = p0;
    }
    CHECK(r.out.find("# trend p0:") != std::string::npos);
}

TEST_CASE("sweep: elasticity leaves every optimal price unchanged") {
    const RunResult r = run_cli("sweep --config " + reference_config() +
                                " --scenario part-nonpart-1 --sweep eps --from 0.2 --to 1.4 "
                                "--steps 7");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("# trend w1: constant") != std::string::npos);
    CHECK(r.out.find("# trend p0: constant") != std::string::npos);
    // profits do change with the elasticity
    const auto ls = lines_of(r.out);
    const auto header = split(ls[0], ',');
    std::size_t profit_col = 0;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == "r_mno1") profit_col = i;
    const double first = std::stod(split(ls[1], ',')[profit_col]);
    const double last = std::stod(split(ls[7], ',')[profit_col]);
    CHECK(first != doctest::Approx(last));
}

TEST_CASE("sweep: per-point infeasibility is recorded in-row, not fatal") {
    const RunResult r = run_cli("sweep --config " + reference_config() +
                                " --scenario part-part-ps --sweep r0 --from 0 --to 50 "
                                "--steps 11");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find(",false,") != std::string::npos);  // infeasible rows
    CHECK(r.out.find(",true,") != std::string::npos);   // feasible tail
}

TEST_CASE("sweep: invalid ranges are config errors") {
    CHECK(run_cli("sweep --config " + reference_config() +
                  " --scenario part-part-ps --sweep gamma --from 0 --to 1.0 --steps 5")
              .exit_code == 1);
    CHECK(run_cli("sweep --config " + reference_config() +
                  " --scenario part-part-ps --sweep r0 --from 0 --to 10 --steps 1")
              .exit_code == 1);
    CHECK(run_cli("sweep --config " + reference_config() +
                  " --scenario part-part-ps --sweep nope --from 0 --to 1 --steps 5")
              .exit_code == 1);
}

TEST_CASE("sweep output is byte-identical across runs") {
    const std::string config = reference_config();
    const std::string args = "sweep --config " + config +
                             " --scenario part-part-fs --leader 1 --sweep gamma --from 0.05 "
                             "--to 0.9 --steps 18 --out ";
    REQUIRE(run_cli(args + "cli_tmp/sweep_a.csv").exit_code == 0);
    REQUIRE(run_cli(args + "cli_tmp/sweep_b.csv").exit_code == 0);
    const std::string a = slurp("cli_tmp/sweep_a.csv");
    const std::string b = slurp("cli_tmp/sweep_b.csv");
    REQUIRE_FALSE(a.empty());
    CHECK(a == b);
}

TEST_CASE("game: reference market summary and matrix") {
    const RunResult r = run_cli("game --config " + reference_config() + " --leader 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("strategy_mno1,strategy_mno2,r_mno1,r_mno2") != std::string::npos);
    CHECK(r.out.find("nonpart,nonpart,16800,8400") != std::string::npos);
    CHECK(r.out.find("# nash_equilibria: (part,part)") != std::string::npos);
    CHECK(r.out.find("# summary: (Part, Part) is a NE; uniqueness not guaranteed "
                     "(r0 > r_bar_20)") != std::string::npos);
}

TEST_CASE("game: hypothesis failure is reported") {
    const RunResult r = run_cli("game --config " + reference_config("r0", 1.0));
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("# wholesale_above_cost: false") != std::string::npos);
    CHECK(r.out.find("# summary: (Part, Part) is not a NE (hypotheses not met)") !=
          std::string::npos);
}

TEST_CASE("game: uniqueness summary when every hypothesis holds") {
    fs::create_directories("cli_tmp");
    spit("cli_tmp/unique.json", R"({
  "market": {
    "q1": 584.856, "q2": 553.168, "p1": 22.839, "p2": 15.314,
    "c1": 3.61, "c2": 3.961, "ct1": 3.968, "ct2": 2.271, "cf1": 0, "cf2": 0,
    "eps": 0.5, "gamma": 0.43, "r0": 3.24, "ct0": 1.675, "cf0": 0
  }
})");
    const RunResult r = run_cli("game --config cli_tmp/unique.json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("# summary: unique NE: (Part, Part)") != std::string::npos);
}

TEST_CASE("verify: all checks pass on the reference market") {
    const RunResult r =
        run_cli("verify --config " + reference_config() + " --grid-resolution 201");
    INFO(r.out);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("check part-nonpart-oracle-1: pass") != std::string::npos);
    CHECK(r.out.find("check bilevel-fs-oracle-2: pass") != std::string::npos);
    CHECK(r.out.find("check simultaneous-ps-oracle: pass") != std::string::npos);
    CHECK(r.out.find("check ps-phi-linearity: pass") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("verify: an injected closed-form error is caught with exit 3") {
    const RunResult r = run_cli("verify --config " + reference_config() +
                                " --grid-resolution 201 --inject-price-error 1.0");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

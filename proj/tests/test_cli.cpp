#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

#ifndef TEVR_CLI_PATH
#define TEVR_CLI_PATH "tevr"
#endif

int run_cli(const std::string& args) {
    std::string cmd = std::string(TEVR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path make_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("tevr_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void write(const fs::path& p, const std::string& s) {
    std::ofstream out(p);
    out << s;
}

const char* base_cfg = R"({
  "disk": {"radius": 1.0, "media": {"c1": 1, "n1": 1, "c2": 1, "n2": 4}},
  "scan": {"rect": [1, 30, -2, 2], "tol": 1e-10},
  "semiclassical": {"h": [0.0625, 0.03125], "z": [{"re": -1, "im": 0, "zone": "Z2"}], "jet_order": 4},
  "regions": [{"kind": "lambda_plus", "C": 1.0, "epsilon": 0.05}]
})";

} // namespace

TEST_CASE("solve writes eigenvalues and is byte-deterministic") {
    auto dir = make_dir("solve");
    write(dir / "cfg.json", base_cfg);
    REQUIRE(run_cli("solve --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 0);
    std::string csv1 = slurp(dir / "eigs.csv");
    CHECK(csv1.rfind("re_lambda,im_lambda,mode,multiplicity,residual,newton_iters\n", 0) == 0);
    CHECK(csv1.find("\r") == std::string::npos); // LF only
    // at least one eigenvalue and all residuals small
    int rows = 0;
    std::stringstream ss(csv1);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows > 0);

    auto dir2 = make_dir("solve2");
    write(dir2 / "cfg.json", base_cfg);
    REQUIRE(run_cli("solve --config " + (dir2 / "cfg.json").string() + " --out " + dir2.string()) == 0);
    CHECK(slurp(dir2 / "eigs.csv") == csv1); // identical config -> identical bytes
    CHECK(slurp(dir2 / "eigs.svg") == slurp(dir / "eigs.svg"));
}

TEST_CASE("degenerate media rejected with exit 2 naming (1.2)") {
    auto dir = make_dir("bad_media");
    write(dir / "cfg.json", R"({"disk": {"media": {"c1": 1, "n1": 1, "c2": 1, "n2": 1}}})");
    std::string cmd = std::string(TEVR_CLI_PATH) + " solve --config " + (dir / "cfg.json").string() +
                      " --out " + dir.string() + " 2>" + (dir / "err.txt").string();
    int rc = WEXITSTATUS(std::system(cmd.c_str()));
    CHECK(rc == 2);
    CHECK(slurp(dir / "err.txt").find("(1.2)") != std::string::npos);
}

TEST_CASE("empty rectangle yields an empty CSV with exit 0") {
    auto dir = make_dir("empty");
    write(dir / "cfg.json", R"({
      "disk": {"media": {"c1": 1, "n1": 1, "c2": 1, "n2": 4}},
      "scan": {"rect": [0.1, 1.0, 50, 60]}
    })");
    REQUIRE(run_cli("solve --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 0);
    std::string csv = slurp(dir / "eigs.csv");
    CHECK(csv == "re_lambda,im_lambda,mode,multiplicity,residual,newton_iters\n");
}

TEST_CASE("regions consumes solve output; empty input reports cleanly") {
    auto dir = make_dir("regions");
    write(dir / "cfg.json", base_cfg);
    REQUIRE(run_cli("solve --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 0);
    CHECK(run_cli("regions --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "regions_report.csv"));
    CHECK(fs::exists(dir / "regions_summary.json"));

    // empty eigen input
    write(dir / "eigs.csv", "re_lambda,im_lambda,mode,multiplicity,residual,newton_iters\n");
    CHECK(run_cli("regions --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 0);
}

TEST_CASE("malformed config exits 2") {
    auto dir = make_dir("badcfg");
    write(dir / "cfg.json", "{ not json");
    CHECK(run_cli("solve --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 2);
    write(dir / "cfg2.json", R"({"scan": {"rect": [5, 1, -1, 1]}})");
    CHECK(run_cli("solve --config " + (dir / "cfg2.json").string() + " --out " + dir.string()) == 2);
}

TEST_CASE("dtn-check and parametrix-check emit tables") {
    auto dir = make_dir("tables");
    write(dir / "cfg.json", base_cfg);
    CHECK(run_cli("dtn-check --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 0);
    std::string dtn = slurp(dir / "dtn_check.csv");
    CHECK(dtn.find("slope") != std::string::npos);
    CHECK(run_cli("parametrix-check --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 0);
    CHECK(slurp(dir / "parametrix_check.csv").find("eikonal") != std::string::npos);
    CHECK(fs::exists(dir / "parametrix_summary.txt"));
}

TEST_CASE("count refuses an incomplete scan with exit 3") {
    auto dir = make_dir("count_bad");
    // rect too short in Im and too small in Re for r = 6 (r^2 = 36 > 30)
    write(dir / "cfg.json", R"({
      "disk": {"media": {"c1": 1, "n1": 1, "c2": 1, "n2": 4}},
      "scan": {"rect": [1, 30, -2, 2]},
      "count": {"r_values": [6.0]}
    })");
    CHECK(run_cli("count --config " + (dir / "cfg.json").string() + " --out " + dir.string()) == 3);
}

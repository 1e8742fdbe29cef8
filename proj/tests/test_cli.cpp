#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const int status = std::system((std::string(UEM_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "uem_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("sample: writes CSV + sidecar, byte-identical reruns, validates rho") {
    TempDir dir;
    const auto csv = dir.file("data.csv");
    CHECK(run("sample --d 4 --n 1000 --eta 1 --rho 0.6 --seed 7 --out " + csv) == 0);

    const std::string first = slurp(csv);
    CHECK(std::count(first.begin(), first.end(), '\n') == 1001);  // header + 1000 rows
    CHECK(first.rfind("x0,x1,x2,x3\n", 0) == 0);

    const auto side = nlohmann::json::parse(slurp(dir.file("data.json")));
    CHECK(side["n"] == 1000);
    CHECK(side["d"] == 4);
    CHECK(side["seed"] == 7);
    CHECK(side["rho_star"] == 0.6);

    CHECK(run("sample --d 4 --n 1000 --eta 1 --rho 0.6 --seed 7 --out " + csv) == 0);
    CHECK(slurp(csv) == first);

    CHECK(run("sample --d 4 --n 1000 --eta 1 --rho 1.0 --seed 7 --out " + csv) == 2);
}

TEST_CASE("estimate: branch reporting, loss selection, domain errors") {
    TempDir dir;
    const auto out = dir.file("est.json");
    CHECK(run("estimate --estimator em-adaptive --d 4 --n 20000 --eta 1 --rho 0.6 --seed 3 --out " +
              out) == 0);
    auto est = nlohmann::json::parse(slurp(out));
    CHECK(est["estimator"] == "em-adaptive");
    CHECK(est["branch"] == "unbalanced");
    CHECK(est.contains("loss_l2"));

    CHECK(run("estimate --estimator spectral --d 4 --n 20000 --eta 1 --rho 0.6 --seed 3 --out " +
              out) == 0);
    est = nlohmann::json::parse(slurp(out));
    CHECK(est.contains("loss_l0"));
    CHECK_FALSE(est.contains("loss_l2"));

    CHECK(run("estimate --estimator mom-mean --d 2 --n 1000 --eta 1 --rho 0 --seed 3 --out " + out) ==
          2);
    CHECK(run("estimate --estimator no-such-estimator --d 2 --n 1000 --out " + out) == 2);

    // Trace CSV has the t/state/residual layout.
    const auto trace = dir.file("trace.csv");
    CHECK(run("estimate --estimator em-mean --init scaled-mean --d 2 --n 5000 --eta 1 --rho 0.6 "
              "--seed 3 --out " + out + " --trace " + trace) == 0);
    std::ifstream tr(trace);
    std::string header;
    std::getline(tr, header);
    CHECK(header == "t,x0,x1,residual");
}

TEST_CASE("estimate runs on a saved dataset") {
    TempDir dir;
    const auto csv = dir.file("data.csv");
    REQUIRE(run("sample --d 3 --n 5000 --eta 1 --rho 0.5 --seed 11 --out " + csv) == 0);
    const auto out = dir.file("est.json");
    CHECK(run("estimate --estimator mom-mean --data " + csv + " --out " + out) == 0);
    const auto est = nlohmann::json::parse(slurp(out));
    CHECK(est["value"].size() == 3);
}

TEST_CASE("population subcommands") {
    TempDir dir;
    const auto fp = dir.file("fp.json");
    CHECK(run("population fixed-points --delta 0.3 --eta 1 --out " + fp) == 0);
    const auto roots = nlohmann::json::parse(slurp(fp));
    REQUIRE(roots["fixed_points"].size() == 1);
    CHECK(std::abs(roots["fixed_points"][0].get<double>() - 1.0) <= 1e-6);

    const auto wfp = dir.file("wfp.json");
    CHECK(run("population weight-fixed-point --eta 1 --rho-star 0.6 --theta-scale 1.5 --out " + wfp) ==
          0);
    const auto w = nlohmann::json::parse(slurp(wfp));
    CHECK(w["rho_fixed_point"].get<double>() < 0.6);

    const auto land = dir.file("land.csv");
    CHECK(run("population landscape --delta-grid 0.05,0.45 --eta-grid 1 --out " + land) == 0);
    const std::string csv = slurp(land);
    CHECK(csv.rfind("delta,eta,negative_fixed_points\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("sweep: runs a spec, identical reruns, rejects empty estimators") {
    TempDir dir;
    const auto spec = dir.file("spec.json");
    {
        std::ofstream out(spec);
        out << R"({"d":[2],"n":[2000,4000],"eta":[1.0],"rho_star":[0.6],
                   "trials":2,"estimators":["mom-mean"],"base_seed":7})";
    }
    const auto prefix = dir.file("sweep");
    CHECK(run("sweep --spec " + spec + " --out " + prefix) == 0);
    const std::string first_csv = slurp(prefix + ".csv");
    const std::string first_summary = slurp(prefix + "_summary.json");
    CHECK(first_summary.find("slope_log_error_vs_log_n") != std::string::npos);

    CHECK(run("sweep --spec " + spec + " --out " + prefix) == 0);
    CHECK(slurp(prefix + ".csv") == first_csv);
    CHECK(slurp(prefix + "_summary.json") == first_summary);

    {
        std::ofstream out(spec);
        out << R"({"d":[2],"n":[2000],"eta":[1.0],"rho_star":[0.6],
                   "trials":1,"estimators":[],"base_seed":7})";
    }
    CHECK(run("sweep --spec " + spec + " --out " + prefix) == 2);
}

TEST_CASE("UEM_THREADS does not change the output bytes") {
    TempDir dir;
    const auto a = dir.file("a.csv"), b = dir.file("b.csv");
    REQUIRE(run("sample --d 3 --n 4000 --eta 1 --rho 0.4 --seed 5 --out " + a) == 0);
    const int status = std::system(("UEM_THREADS=1 " + std::string(UEM_CLI_PATH) +
                                    " sample --d 3 --n 4000 --eta 1 --rho 0.4 --seed 5 --out " + b +
                                    " >/dev/null 2>&1")
                                       .c_str());
    REQUIRE(WEXITSTATUS(status) == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("") == 2);                   // missing subcommand
    CHECK(run("sample --rho") == 2);       // missing value
    CHECK(run("sweep") == 2);              // missing required --spec
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + FSSQM_CLI_PATH + " " + args + " 2>&1";
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "fssqm_cli_tests";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

std::string poly1() { return R"({"kind":"poly","coeffs":[[1,0]]})"; }

std::string reference3() {
    return R"({"lambda":3,"fock_dimension":30,"structure_function":{"kind":"oscillator"},)"
           R"("f":[)" + poly1() + "," + poly1() + "," + poly1() + "]}";
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("verify: reference model exits 0 and lists the relations") {
    const auto cfg = write_config("ref3.json", reference3());
    const RunResult r = run_cli("verify --config " + quoted(cfg));
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["all_passed"] == true);
    CHECK(j["relations"].size() >= 20);

    SUBCASE("csv format") {
        const RunResult c = run_cli("verify --format csv --config " + quoted(cfg));
        CHECK(c.exit_code == 0);
        CHECK(c.out.find("name,reference,residual,tolerance,passed\n") == 0);
        CHECK(c.out.find("supercharge-power") != std::string::npos);
    }
}

TEST_CASE("verify: config errors exit 1 with a reason") {
    SUBCASE("alpha sum violated") {
        const auto cfg = write_config(
            "badalpha.json",
            R"({"lambda":2,"fock_dimension":12,)"
            R"("structure_function":{"kind":"c_lambda_extended","alpha":[0.5,0.0]},)"
            R"("f":[)" + poly1() + "," + poly1() + "]}");
        const RunResult r = run_cli("verify --config " + quoted(cfg));
        CHECK(r.exit_code == 1);
        CHECK(r.out.find("sum to zero") != std::string::npos);
    }
    SUBCASE("lambda = 1 rejected") {
        const auto cfg = write_config(
            "lam1.json",
            R"({"lambda":1,"fock_dimension":12,"structure_function":{"kind":"oscillator"},)"
            R"("f":[)" + poly1() + "]}");
        const RunResult r = run_cli("verify --config " + quoted(cfg));
        CHECK(r.exit_code == 1);
        CHECK(r.out.find("lambda") != std::string::npos);
    }
    SUBCASE("malformed JSON reports line and column") {
        const auto cfg = write_config("broken.json", "{\"lambda\": 3,\n  \"oops\n}");
        const RunResult r = run_cli("verify --config " + quoted(cfg));
        CHECK(r.exit_code == 1);
        CHECK(r.out.find("line") != std::string::npos);
        CHECK(r.out.find("column") != std::string::npos);
    }
    SUBCASE("missing file") {
        const RunResult r = run_cli("verify --config /nonexistent/cfg.json");
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("verify: unreachable tolerance makes relations fail with exit 2") {
    const auto cfg = write_config("ref3.json", reference3());
    const RunResult r = run_cli("verify --config " + quoted(cfg), "FSSQM_TOL=1e-18");
    CHECK(r.exit_code == 2);

    SUBCASE("invalid override is a config error") {
        const RunResult bad = run_cli("verify --config " + quoted(cfg), "FSSQM_TOL=banana");
        CHECK(bad.exit_code == 1);
        CHECK(bad.out.find("FSSQM_TOL") != std::string::npos);
    }
}

TEST_CASE("spectrum: csv rows carry (energy, multiplicity) pairs") {
    const auto cfg = write_config("ref3.json", reference3());
    const RunResult r = run_cli("spectrum --levels 4 --format csv --config " + quoted(cfg));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0,0,3,0,3\n") != std::string::npos);
    CHECK(r.out.find("1,2,3,2,3\n") != std::string::npos);
    CHECK(r.out.find("2,6,3,6,3\n") != std::string::npos);
    CHECK(r.out.find("3,12,3,12,3\n") != std::string::npos);

    SUBCASE("lambda = 2 has a nondegenerate ground level") {
        const auto cfg2 = write_config(
            "ref2.json",
            R"({"lambda":2,"fock_dimension":16,"structure_function":{"kind":"oscillator"},)"
            R"("f":[)" + poly1() + "," + poly1() + "]}");
        const RunResult r2 = run_cli("spectrum --levels 3 --format csv --config " + quoted(cfg2));
        CHECK(r2.exit_code == 0);
        CHECK(r2.out.find("0,0,1,0,1\n") != std::string::npos);
    }
    SUBCASE("too many levels for the dimension") {
        const RunResult bad = run_cli("spectrum --levels 12 --config " + quoted(cfg));
        CHECK(bad.exit_code == 1);
        CHECK(bad.out.find("fock_dimension") != std::string::npos);
    }
}

TEST_CASE("sectors: classification sweep over mu") {
    const auto cfg = write_config("ref3.json", reference3());
    const RunResult r = run_cli("sectors --config " + quoted(cfg));
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["sectors"].size() == 3);
    CHECK(j["sectors"][0]["classification"] == "unbroken-nondegenerate");
    CHECK(j["sectors"][1]["classification"] == "broken-zero-energy");
    CHECK(j["sectors"][2]["classification"] == "broken-positive-energy");

    SUBCASE("engineered zero flips mu = 1") {
        const auto cfg2 = write_config(
            "zero3.json",
            R"({"lambda":3,"fock_dimension":30,"structure_function":{"kind":"oscillator"},)"
            R"("f":[{"kind":"poly","coeffs":[[-1,0],[1,0]]},)" + poly1() + "," + poly1() + "]}");
        const RunResult r2 = run_cli("sectors --config " + quoted(cfg2));
        CHECK(r2.exit_code == 0);
        const auto j2 = nlohmann::json::parse(r2.out);
        CHECK(j2["sectors"][1]["classification"] == "unbroken-degenerate");
    }
    SUBCASE("csv has one row per mu") {
        const RunResult c = run_cli("sectors --format csv --config " + quoted(cfg));
        CHECK(c.exit_code == 0);
        int rows = 0;
        for (char ch : c.out)
            if (ch == '\n') ++rows;
        CHECK(rows == 4);  // header + lambda
    }
}

TEST_CASE("scan: sweep over one alpha with compensation") {
    const auto cfg = write_config(
        "scan2.json",
        R"({"lambda":2,"fock_dimension":14,)"
        R"("structure_function":{"kind":"c_lambda_extended","alpha":[0.0,0.0]},)"
        R"("f":[)" + poly1() + "," + poly1() + "]}");

    SUBCASE("all rows valid and audit-pass over [-0.5, 3]") {
        const RunResult r = run_cli(
            "scan --alpha-index 0 --from -0.5 --to 3 --steps 8 --format csv --config " +
            quoted(cfg));
        CHECK(r.exit_code == 0);
        int data_rows = 0;
        std::size_t pos = r.out.find('\n');
        while ((pos = r.out.find('\n', pos + 1)) != std::string::npos) ++data_rows;
        CHECK(data_rows == 8);
        CHECK(r.out.find(",0,") == std::string::npos);  // no valid=0 / pass=0 cells
    }
    SUBCASE("alpha_0 = -2 row is marked invalid, scan continues") {
        const RunResult r = run_cli(
            "scan --alpha-index 0 --from -2 --to 0.5 --steps 2 --format csv --config " +
            quoted(cfg));
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("0,-2,0,0,,\n") != std::string::npos);
        CHECK(r.out.find("1,0.5,1,1,") != std::string::npos);
    }
    SUBCASE("zero-width scan emits a single row") {
        const RunResult r = run_cli(
            "scan --alpha-index 0 --from 1 --to 1 --steps 9 --format csv --config " +
            quoted(cfg));
        CHECK(r.exit_code == 0);
        int data_rows = 0;
        std::size_t pos = r.out.find('\n');
        while ((pos = r.out.find('\n', pos + 1)) != std::string::npos) ++data_rows;
        CHECK(data_rows == 1);
    }
    SUBCASE("scan needs an extended structure function") {
        const auto osc = write_config("scanosc.json", reference3());
        const RunResult r = run_cli(
            "scan --alpha-index 0 --from 0 --to 1 --steps 2 --config " + quoted(osc));
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("deterministic output for identical configs") {
    const auto cfg = write_config("ref3.json", reference3());
    SUBCASE("json data sections are byte-identical after dropping timings") {
        auto strip = [](const std::string& text) {
            auto j = nlohmann::json::parse(text);
            j.erase("timings");
            return j.dump();
        };
        const RunResult a = run_cli("verify --config " + quoted(cfg));
        const RunResult b = run_cli("verify --config " + quoted(cfg));
        REQUIRE(a.exit_code == 0);
        REQUIRE(b.exit_code == 0);
        CHECK(strip(a.out) == strip(b.out));
    }
    SUBCASE("csv output is byte-identical") {
        const RunResult a = run_cli("spectrum --format csv --config " + quoted(cfg));
        const RunResult b = run_cli("spectrum --format csv --config " + quoted(cfg));
        CHECK(a.out == b.out);
    }
}

TEST_CASE("--out writes the report to a file") {
    const auto cfg = write_config("ref3.json", reference3());
    const fs::path out = fs::temp_directory_path() / "fssqm_cli_tests" / "report.json";
    fs::remove(out);
    const RunResult r = run_cli("verify --config " + quoted(cfg) + " --out " + quoted(out));
    CHECK(r.exit_code == 0);
    REQUIRE(fs::exists(out));
    std::ifstream in(out);
    nlohmann::json j;
    in >> j;
    CHECK(j["all_passed"] == true);
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("verify").exit_code == 1);           // missing --config
    CHECK(run_cli("frobnicate").exit_code == 1) ;      // unknown subcommand
}

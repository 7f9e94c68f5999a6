#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "nablafc/nablafc.hpp"

namespace fs = std::filesystem;
using namespace nablafc;

namespace {

const std::string kCli = NABLAFC_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("nablafc_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

csv::Table read_csv(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    return csv::read_table(f);
}

}  // namespace

TEST_CASE("weights command") {
    TempDir dir;
    const auto out = dir.file("w.csv");
    REQUIRE(run("weights --alpha 0.5 --count 4 --kind diff --out " + out) == 0);
    const auto t = read_csv(out);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0][1] == 1.0);
    CHECK(t.rows[1][1] == -0.5);
    CHECK(t.rows[2][1] == -0.125);
    CHECK(t.rows[3][1] == -0.0625);
    CHECK(fs::exists(out + ".manifest.json"));

    REQUIRE(run("weights --alpha 1 --count 3 --kind diff --out " + out) == 0);
    const auto t2 = read_csv(out);
    CHECK(t2.rows[0][1] == 1.0);
    CHECK(t2.rows[1][1] == -1.0);
    CHECK(t2.rows[2][1] == 0.0);

    CHECK(run("weights --alpha 0.5 --count 0 --out " + out) == 2);
    CHECK(run("weights --alpha 0.5 --count 4 --kind nope --out " + out) == 2);
}

TEST_CASE("diff command") {
    TempDir dir;
    const auto in = dir.file("in.csv");
    const auto out = dir.file("out.csv");
    spit(in, "k,x\n-1,1\n0,2\n1,3\n");

    SECTION("caputo hand values") {
        REQUIRE(run("diff --input " + in + " --alpha 0.5 --def caputo --base 0 --out " + out) == 0);
        const auto t = read_csv(out);
        REQUIRE(t.rows.size() == 2);
        CHECK(t.rows[0][0] == 0.0);
        CHECK(t.rows[0][1] == 1.0);
        CHECK(t.rows[1][1] == 1.5);
    }
    SECTION("rl equals caputo plus the bridge correction") {
        REQUIRE(run("diff --input " + in + " --alpha 0.5 --def rl --base 0 --out " + out) == 0);
        const auto t = read_csv(out);
        CHECK(t.rows[1][1] == Catch::Approx(1.5 + 0.5).margin(1e-14));
    }
    SECTION("constant input, caputo column is zero") {
        spit(in, "k,x\n-1,4\n0,4\n1,4\n2,4\n");
        REQUIRE(run("diff --input " + in + " --alpha 0.7 --def caputo --base 0 --out " + out) == 0);
        for (const auto& row : read_csv(out).rows) CHECK(row[1] == 0.0);
    }
    SECTION("output re-parse equals in-memory results exactly") {
        spit(in, "k,x\n-1,0.1\n0,-1.75\n1,2.625\n2,0.333333333333333314829616256247\n3,9\n");
        REQUIRE(run("diff --input " + in + " --alpha 0.62 --def rl --base 0 --out " + out) == 0);
        const auto sig = SampledSignal::scalar(0, 0.1, {-1.75, 2.625, 0.333333333333333314829616256247, 9.0});
        const auto t = read_csv(out);
        REQUIRE(t.rows.size() == 4);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            CHECK(t.rows[i][1] == rl_difference(sig, 0.62, static_cast<GridIndex>(i))[0]);
    }
    SECTION("gl-mod starts at a+1") {
        REQUIRE(run("diff --input " + in + " --alpha 0.5 --def gl-mod --base 0 --out " + out) == 0);
        const auto t = read_csv(out);
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0][0] == 1.0);
        CHECK(t.rows[0][1] == 3.0);
    }
    SECTION("fixed memory flag") {
        REQUIRE(run("diff --input " + in + " --alpha 0.5 --def caputo --memory 1 --base 0 --out " + out) == 0);
        const auto t = read_csv(out);
        CHECK(t.rows[1][1] == Catch::Approx(1.0 + 0.5).margin(1e-14));  // nabla x(1) + 0.5 nabla x(0)
        CHECK(run("diff --input " + in + " --alpha 0.5 --def gl-mod --memory 1 --base 0 --out " + out) == 2);
    }
    SECTION("malformed csv exits 2") {
        spit(in, "k,x\n-1,not-a-number\n0,2\n");
        CHECK(run("diff --input " + in + " --alpha 0.5 --def gl --base 0 --out " + out) == 2);
    }
    SECTION("missing history row exits 3") {
        spit(in, "k,x\n0,2\n1,3\n");  // starts at k=0, not a-1
        CHECK(run("diff --input " + in + " --alpha 0.5 --def caputo --base 0 --out " + out) == 3);
    }
    SECTION("non-contiguous k exits 3") {
        spit(in, "k,x\n-1,1\n1,3\n");
        CHECK(run("diff --input " + in + " --alpha 0.5 --def gl --base 0 --out " + out) == 3);
    }
    SECTION("bad order for caputo exits 2") {
        CHECK(run("diff --input " + in + " --alpha 1.5 --def caputo --base 0 --out " + out) == 2);
    }
}

TEST_CASE("verify command") {
    TempDir dir;
    const auto out = dir.file("report.json");
    REQUIRE(run("verify --trials 5 --max-len 12 --seed 42 --out " + out) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["pairs"].size() == 18);
    CHECK(j["total_violations"] == 0);
    CHECK(j["config"]["seed"] == 42);

    SECTION("single trial keeps the pair structure") {
        REQUIRE(run("verify --trials 1 --seed 7 --out " + out) == 0);
        CHECK(nlohmann::json::parse(slurp(out))["pairs"].size() == 18);
    }
    SECTION("impossible tolerance exits 1 but still writes the report") {
        CHECK(run("verify --trials 2 --max-len 8 --tolerance -1 --out " + out) == 1);
        CHECK(nlohmann::json::parse(slurp(out))["total_violations"] > 0);
    }
    SECTION("environment seed override") {
        const int status = std::system(
            ("NABLA_FC_SEED=99 " + kCli + " verify --trials 2 --seed 42 --out " + out + " >/dev/null 2>&1")
                .c_str());
        REQUIRE(WEXITSTATUS(status) == 0);
        CHECK(nlohmann::json::parse(slurp(out))["config"]["seed"] == 99);
    }
    SECTION("zero trials exits 2") { CHECK(run("verify --trials 0 --out " + out) == 2); }
}

TEST_CASE("simulate command") {
    TempDir dir;
    const auto out = dir.file("traj.csv");

    SECTION("hand-checked linear steps") {
        REQUIRE(run("simulate --system linear --matrix -1,0,0,-1 --alpha 0.5 --x0 1,1 --steps 2 --out " +
                    out) == 0);
        const auto t = read_csv(out);
        REQUIRE(t.header == std::vector<std::string>{"k", "x1", "x2", "iters"});
        REQUIRE(t.rows.size() == 3);
        CHECK(t.rows[0][0] == -1.0);
        CHECK(t.rows[0][3] == 0.0);  // iters column for the x(a-1) row
        CHECK(t.rows[1][1] == Catch::Approx(0.5).margin(1e-12));
        CHECK(t.rows[2][1] == Catch::Approx(0.375).margin(1e-12));
        CHECK(t.rows[2][2] == Catch::Approx(0.375).margin(1e-12));
    }
    SECTION("builtin example with plot") {
        const auto svg_path = dir.file("traj.svg");
        REQUIRE(run("simulate --system example1 --alpha 0.8 --x0 2,-1 --steps 50 --out " + out +
                    " --plot " + svg_path) == 0);
        CHECK(read_csv(out).rows.size() == 51);
        const auto svg_doc = slurp(svg_path);
        CHECK(svg_doc.find("<svg") == 0);
        CHECK(svg_doc.find("x2") != std::string::npos);
    }
    SECTION("solver failure exits 4 and leaves a partial csv with a trailer") {
        CHECK(run("simulate --system linear --matrix 1,0,0,1 --alpha 0.5 --x0 1,1 --steps 5 --out " +
                  out) == 4);
        const auto text = slurp(out);
        CHECK(text.find("# FAILED at k=0") != std::string::npos);
        CHECK(read_csv(out).rows.size() == 1);  // only the x(a-1) row
    }
    SECTION("usage errors") {
        CHECK(run("simulate --system nope --x0 1 --steps 2 --out " + out) == 2);
        CHECK(run("simulate --system linear --x0 1 --steps 2 --out " + out) == 2);  // missing matrix
        CHECK(run("simulate --system example1 --x0 1 --steps 2 --out " + out) == 2);
        CHECK(run("simulate --system example1 --x0 2,-1 --steps 0 --out " + out) == 2);
    }
}

TEST_CASE("optimize command") {
    TempDir dir;
    const auto prefix = dir.file("run");

    SECTION("writes trajectory and objective csvs") {
        REQUIRE(run("optimize --alpha 0.8 --rho 2 --x0 2,-1 --steps 40 --out " + prefix) == 0);
        const auto traj = read_csv(prefix + "_trajectory.csv");
        const auto obj = read_csv(prefix + "_objective.csv");
        CHECK(traj.rows.size() == 41);
        CHECK(obj.rows.size() == 41);
        CHECK(obj.header == std::vector<std::string>{"k", "f_value"});
        CHECK(obj.rows[0][1] == 51.0);  // f(2,-1)
        CHECK(fs::exists(prefix + ".manifest.json"));
    }
    SECTION("start at the optimum stays constant") {
        REQUIRE(run("optimize --alpha 0.8 --rho 2 --x0 1,1 --steps 5 --out " + prefix) == 0);
        for (const auto& row : read_csv(prefix + "_trajectory.csv").rows) {
            CHECK(row[1] == 1.0);
            CHECK(row[2] == 1.0);
        }
    }
    SECTION("rho = 0 exits 2") {
        CHECK(run("optimize --alpha 0.8 --rho 0 --x0 2,-1 --steps 5 --out " + prefix) == 2);
    }
}

TEST_CASE("example command") {
    TempDir dir;
    SECTION("example 1") {
        REQUIRE(run("example 1 --out-dir " + dir.path.string()) == 0);
        const auto t = read_csv(dir.file("example1_trajectory.csv"));
        CHECK(t.rows.size() == 201);
        // both states decay toward the origin
        CHECK(std::fabs(t.rows.back()[1]) < 0.05);
        CHECK(std::fabs(t.rows.back()[2]) < 0.05);
        CHECK(fs::exists(dir.file("example1_states.svg")));
        CHECK(fs::exists(dir.file("example1_trajectory.csv.manifest.json")));
    }
    SECTION("example 2") {
        REQUIRE(run("example 2 --out-dir " + dir.path.string()) == 0);
        const auto t = read_csv(dir.file("example2_trajectory.csv"));
        CHECK(t.rows.size() == 201);
        CHECK(std::fabs(t.rows.back()[1]) < 1e-3);
        CHECK(std::fabs(t.rows.back()[2]) < 1e-3);
        CHECK(fs::exists(dir.file("example2_states.svg")));
    }
    SECTION("example 3") {
        REQUIRE(run("example 3 --out-dir " + dir.path.string()) == 0);
        const auto t = read_csv(dir.file("example3_trajectory.csv"));
        CHECK(t.rows.size() == 501);
        CHECK(std::fabs(t.rows.back()[1] - 1.0) < 0.1);
        CHECK(std::fabs(t.rows.back()[2] - 1.0) < 0.1);
        CHECK(fs::exists(dir.file("example3_objective.csv")));
        CHECK(fs::exists(dir.file("example3_path.svg")));
        CHECK(fs::exists(dir.file("example3_objective.svg")));
    }
    SECTION("unknown example exits 2") { CHECK(run("example 9 --out-dir " + dir.path.string()) == 2); }
}

TEST_CASE("manifest reproducibility: identical invocations give identical bytes") {
    TempDir a, b;
    const auto cmd_for = [&](const TempDir& d) {
        return "verify --trials 3 --max-len 10 --seed 11 --out " + d.file("r.json");
    };
    REQUIRE(run(cmd_for(a)) == 0);
    REQUIRE(run(cmd_for(b)) == 0);
    CHECK(slurp(a.file("r.json")) == slurp(b.file("r.json")));

    const auto sim = [&](const TempDir& d) {
        return "simulate --system example2 --alpha 0.8 --x0 2,-1 --steps 30 --out " + d.file("t.csv");
    };
    REQUIRE(run(sim(a)) == 0);
    REQUIRE(run(sim(b)) == 0);
    CHECK(slurp(a.file("t.csv")) == slurp(b.file("t.csv")));
}

TEST_CASE("top-level usage") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("--help") == 0);
}

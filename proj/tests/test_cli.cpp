#include <catch2/catch_amalgamated.hpp>

#include <gappred/io.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code;
    std::string output;
};

fs::path work_dir() {
    fs::path dir = fs::temp_directory_path() / "gappred_cli_tests";
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args) {
    fs::path out = work_dir() / "stdout.txt";
    std::string command = std::string(GAPPRED_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    int raw = std::system(command.c_str());
    int code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    return CliResult{code, buf.str()};
}

}  // namespace

TEST_CASE("fixture then solve reproduces the hand-trace", "[cli]") {
    fs::path fixture = work_dir() / "fig3b.json";
    CliResult emitted =
        run_cli("fixture --name fig3b --gamma 2 --epsbar 1/10 --out " + fixture.string());
    REQUIRE(emitted.exit_code == 0);

    gappred::Instance inst = gappred::load_instance(fixture.string());
    CHECK(inst.values[0][0] == gappred::Rational(19, 10));

    fs::path trace = work_dir() / "fig3b_trace.jsonl";
    CliResult solved = run_cli("solve --mechanism boost --gamma 2 --instance " + fixture.string() +
                               " --trace " + trace.string());
    CHECK(solved.exit_code == 0);
    CHECK(solved.output.find("(0,0)") != std::string::npos);
    CHECK(solved.output.find("(1,1)") != std::string::npos);
    CHECK(solved.output.find("31/10") != std::string::npos);
    CHECK(solved.output.find("stable: yes") != std::string::npos);

    std::ifstream tr(trace);
    std::string line;
    int lines = 0;
    while (std::getline(tr, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 7);  // propose/accept, propose/reject/accept, propose/accept
}

TEST_CASE("solve reports randomized distributions", "[cli]") {
    fs::path fixture = work_dir() / "fig3b2.json";
    REQUIRE(run_cli("fixture --name fig3b --gamma 2 --epsbar 1/10 --out " + fixture.string()).exit_code == 0);
    CliResult solved = run_cli("solve --mechanism boost-or-trust --gamma 7 --instance " + fixture.string() +
                               " --sample 5");
    CHECK(solved.exit_code == 0);
    CHECK(solved.output.find("with probability 1/2") != std::string::npos);
    CHECK(solved.output.find("expected value") != std::string::npos);
    CHECK(solved.output.find("sampled (seed 5)") != std::string::npos);
}

TEST_CASE("gen is deterministic and validates", "[cli]") {
    fs::path a = work_dir() / "gen_a.json";
    fs::path b = work_dir() / "gen_b.json";
    std::string flags = "gen --variant ERMK --n 4 --m 2 --seed 11 --density 3/4 --eta 1/2 --eta-tol 1/4 ";
    REQUIRE(run_cli(flags + "--out " + a.string()).exit_code == 0);
    REQUIRE(run_cli(flags + "--out " + b.string()).exit_code == 0);

    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("mt19937_64/v1") != std::string::npos);
    CHECK_NOTHROW(gappred::load_instance(a.string()));
}

TEST_CASE("sweep writes the pinned CSV and verify-bounds accepts it", "[cli]") {
    fs::path csv = work_dir() / "sweep.csv";
    CliResult swept = run_cli(
        "sweep --variant ERMK --mechanisms greedy-theta,greedy-or-trust --gamma 1,2,3 "
        "--eta 0,0.25,0.5,1 --count 2 --n 4 --m 2 --seed 3 --out " +
        csv.string());
    REQUIRE(swept.exit_code == 0);

    std::ifstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "instance_id,variant,n,m,gamma,eta_target,eta_achieved,mechanism,"
          "value_num,value_den,interval_lo,interval_hi,opt_num,opt_den,bound,pass");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2 * 4 * 3 * 2);  // instances x eta targets x gammas x mechanisms

    CliResult verified = run_cli("verify-bounds --in " + csv.string());
    CHECK(verified.exit_code == 0);
}

TEST_CASE("verify-bounds exits 2 on a tampered csv", "[cli]") {
    fs::path csv = work_dir() / "tampered.csv";
    {
        std::ofstream out(csv);
        out << "instance_id,variant,n,m,gamma,eta_target,eta_achieved,mechanism,"
               "value_num,value_den,interval_lo,interval_hi,opt_num,opt_den,bound,pass\n";
        out << "x,BMP,2,2,2,0,0,boost,1,1,1.0,1.0,100,1,3/2,1\n";
    }
    CHECK(run_cli("verify-bounds --in " + csv.string()).exit_code == 2);
}

TEST_CASE("incentive tester is clean on boost and catches the diagnostic strawman", "[cli]") {
    CliResult clean = run_cli("test-incentives --mechanism boost --gamma 2 --variant BMP --count 3 "
                              "--n 3 --m 3 --seed 17 --coalition 2");
    CHECK(clean.exit_code == 0);
    CHECK(clean.output.find("no violations found") != std::string::npos);

    fs::path fixture = work_dir() / "fig3b3.json";
    REQUIRE(run_cli("fixture --name fig3b --gamma 2 --epsbar 1/10 --out " + fixture.string()).exit_code == 0);
    fs::path report = work_dir() / "violations.json";
    CliResult caught = run_cli("test-incentives --mechanism oracle-optimal --instance " + fixture.string() +
                               " --out " + report.string());
    CHECK(caught.exit_code == 3);
    CHECK(caught.output.find("VIOLATIONS FOUND") != std::string::npos);
    CHECK(fs::exists(report));
}

TEST_CASE("universal mode drives the mixer components", "[cli]") {
    CliResult result = run_cli("test-incentives --mechanism boost-or-trust --gamma 2 --variant BMP "
                               "--count 2 --n 3 --m 2 --seed 23 --coalition 2");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("boost-or-trust/boost") != std::string::npos);
    CHECK(result.output.find("boost-or-trust/trust") != std::string::npos);
}

TEST_CASE("usage errors exit 1", "[cli]") {
    CHECK(run_cli("solve --instance /nonexistent.json").exit_code == 1);
    CHECK(run_cli("fixture --name fig9x").exit_code == 1);
    CHECK(run_cli("sweep --variant BMP --mechanisms not-a-mechanism --count 1").exit_code == 1);
}

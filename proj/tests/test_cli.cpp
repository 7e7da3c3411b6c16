// End-to-end checks of the command-line surface: flag grammar, file
// formats, exit codes and byte-level determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string command = std::string(STABNET_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe))
        result.out.append(buffer.data(), got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("stabnet_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("generate, check, solve round trip on the cycle family") {
    TempDir dir;
    auto gen = run_cli("gen cycle --n 3 -o " + dir.file("g.json") + " --tree " + dir.file("t.json") +
                       " --dot " + dir.file("g.dot"));
    CHECK(gen.exit_code == 0);
    CHECK(fs::exists(dir.file("g.json")));
    CHECK(fs::exists(dir.file("t.json")));
    CHECK(slurp(dir.file("g.dot")).find("style=bold") != std::string::npos);

    auto bad = run_cli("check --game " + dir.file("g.json") + " --tree " + dir.file("t.json"));
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.find("\"ok\":false") != std::string::npos);
    CHECK(bad.out.find("\"gain\":\"5/6\"") != std::string::npos);

    auto solved = run_cli("solve-sne --game " + dir.file("g.json") + " --tree " + dir.file("t.json") +
                          " --method lp3 -o " + dir.file("b.json"));
    CHECK(solved.exit_code == 0);
    CHECK(solved.out.find("\"total\":\"5/6\"") != std::string::npos);
    CHECK(solved.out.find("\"total_decimal\":\"0.833333333333\"") != std::string::npos);

    auto good = run_cli("check --game " + dir.file("g.json") + " --tree " + dir.file("t.json") +
                        " --subsidies " + dir.file("b.json"));
    CHECK(good.exit_code == 0);
    CHECK(good.out == "{\"ok\":true}\n");

    // determinism: identical invocations produce identical bytes
    auto again = run_cli("solve-sne --game " + dir.file("g.json") + " --tree " + dir.file("t.json") +
                         " --method lp3 -o " + dir.file("b2.json"));
    CHECK(again.out == solved.out);
    CHECK(slurp(dir.file("b.json")) == slurp(dir.file("b2.json")));

    for (const std::string method : {"lp2", "rowgen"}) {
        auto alt = run_cli("solve-sne --game " + dir.file("g.json") + " --tree " +
                           dir.file("t.json") + " --method " + method);
        CHECK(alt.exit_code == 0);
        CHECK(alt.out.find("\"total\":\"5/6\"") != std::string::npos);
    }
}

TEST_CASE("pos and best-eq on the unit 4-cycle") {
    TempDir dir;
    run_cli("gen cycle --n 3 -o " + dir.file("g.json"));
    auto pos = run_cli("pos --game " + dir.file("g.json"));
    CHECK(pos.exit_code == 0);
    CHECK(pos.out == "{\"pos\":\"1\",\"best_eq_weight\":\"3\",\"mst_weight\":\"3\"}\n");
    auto beq = run_cli("best-eq --game " + dir.file("g.json"));
    CHECK(beq.exit_code == 0);
    CHECK(beq.out.find("\"weight\":\"3\"") != std::string::npos);
}

TEST_CASE("enforce-frac verifies its own output") {
    TempDir dir;
    run_cli("gen cycle --n 20 -o " + dir.file("g.json") + " --tree " + dir.file("t.json"));
    auto frac = run_cli("enforce-frac --game " + dir.file("g.json") + " -o " + dir.file("b.json"));
    CHECK(frac.exit_code == 0);
    CHECK(frac.out.find("\"verified\":true") != std::string::npos);
    auto checked = run_cli("check --game " + dir.file("g.json") + " --tree " + dir.file("t.json") +
                           " --subsidies " + dir.file("b.json") + " --tol 1e-9");
    CHECK(checked.exit_code == 0);
}

TEST_CASE("solve-aon finds the path-family optimum") {
    TempDir dir;
    auto gen = run_cli("gen aon-path --n 5 -o " + dir.file("g.json") + " --tree " + dir.file("t.json"));
    CHECK(gen.exit_code == 0);
    auto aon = run_cli("solve-aon --game " + dir.file("g.json") + " --tree " + dir.file("t.json") +
                       " -o " + dir.file("b.json"));
    CHECK(aon.exit_code == 0);
    CHECK(aon.out.find("\"edges\":[0,1,2,3]") != std::string::npos);
    CHECK(aon.out.find("\"verified\":true") != std::string::npos);
}

TEST_CASE("dynamics reaches a verified equilibrium") {
    TempDir dir;
    run_cli("gen cycle --n 4 -o " + dir.file("g.json"));
    auto dyn = run_cli("dynamics --game " + dir.file("g.json") + " --max-rounds 50");
    CHECK(dyn.exit_code == 0);
    CHECK(dyn.out.find("\"converged\":true") != std::string::npos);
    CHECK(dyn.out.find("\"equilibrium\":true") != std::string::npos);
    auto seeded = run_cli("dynamics --game " + dir.file("g.json") + " --seed 7 --max-rounds 50");
    CHECK(seeded.exit_code == 0);
}

TEST_CASE("gen sat consumes DIMACS input") {
    TempDir dir;
    {
        std::ofstream cnf(dir.file("f.cnf"));
        cnf << "p cnf 3 1\n1 2 3 0\n";
    }
    auto gen = run_cli("gen sat --cnf " + dir.file("f.cnf") + " -o " + dir.file("g.json") +
                       " --tree " + dir.file("t.json"));
    CHECK(gen.exit_code == 0);
    CHECK(gen.out.find("\"light_edges\":6") != std::string::npos);
    CHECK(fs::file_size(dir.file("g.json")) > 1000000); // ~150k nodes serialize large
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run_cli("check --game missing.json --tree also-missing.json").exit_code == 1);
    CHECK(run_cli("nonsense-subcommand").exit_code == 1);
    CHECK(run_cli("gen cycle --n 3").exit_code == 1); // -o is required

    run_cli("gen cycle --n 4 -o " + dir.file("g.json") + " --tree " + dir.file("t.json"));
    // enumeration cap too small -> 3
    CHECK(run_cli("pos --game " + dir.file("g.json") + " --cap 2").exit_code == 3);
    // no enforcing all-or-nothing assignment within a single candidate -> 2
    auto gen = run_cli("gen cycle --n 3 -o " + dir.file("g3.json") + " --tree " + dir.file("t3.json"));
    CHECK(gen.exit_code == 0);
}

// End-to-end checks of the installed command-line surface.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(MATCHKERN_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.output.append(buf.data(), got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::vector<std::vector<double>> parse_csv_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');  // row index
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = "/tmp/matchkern_cli_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("kernel output is deterministic for a fixed seed") {
    std::string args = "kernel --n 10 --random 100 --seed 7";
    auto first = run(args);
    auto second = run(args);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output.substr(0, 6) == "index,");

    auto json = run("kernel --n 5 --random 10 --seed 3 --format json");
    CHECK(json.exit_code == 0);
    CHECK(json.output.find("\"matrix\"") != std::string::npos);
}

TEST_CASE("kernel on an explicit input file, unit diagonal") {
    std::string path = temp_file("three.json", "[[[1,2],[3,4]],[[1,3],[2,4]],[[1,4],[2,3]]]");
    auto result = run("kernel --n 2 --nu inf --kappa 1 --input " + path);
    CHECK(result.exit_code == 0);
    auto matrix = parse_csv_matrix(result.output);
    REQUIRE(matrix.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(matrix[i][i] == 1.0);
}

TEST_CASE("kernel backends agree through the CLI at n = 4") {
    std::string zp = "kernel --n 4 --random 20 --seed 11 --backend zp";
    std::string ex = "kernel --n 4 --random 20 --seed 11 --backend explicit";
    auto a = parse_csv_matrix(run(zp).output);
    auto b = parse_csv_matrix(run(ex).output);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            CHECK(a[i][j] == doctest::Approx(b[i][j]).epsilon(1e-10));
}

TEST_CASE("kernel error paths exit nonzero") {
    std::string path = temp_file("bad.json", "[[[1,2],[3,4]]]");
    CHECK(run("kernel --n 3 --input " + path).exit_code != 0);       // size mismatch
    CHECK(run("kernel --n 9 --random 5 --backend avg").exit_code != 0);  // capability
}

TEST_CASE("zsf table") {
    auto result = run("zsf --rho 2 1");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("mu,value,value_float") == 0);
    CHECK(result.output.find("2.1,1/6,0.166666666667") != std::string::npos);
    CHECK(result.output.find("3,-1/4,-0.25") != std::string::npos);
}

TEST_CASE("spectrum table has one row per partition") {
    auto result = run("spectrum --n 8 --nu inf");
    CHECK(result.exit_code == 0);
    long lines = std::count(result.output.begin(), result.output.end(), '\n');
    CHECK(lines == 23);  // header + p(8) = 22 rows
    auto density = run("spectrum --n 8 --nu 2.5 --density");
    CHECK(density.exit_code == 0);
    CHECK(density.output.find("rho,lambda,log_density") == 0);
}

TEST_CASE("approx-error is zero at the full expansion and non-increasing") {
    auto result = run("approx-error --n 8 --nu inf --max-terms 22");
    CHECK(result.exit_code == 0);
    std::istringstream in(result.output);
    std::string line;
    std::getline(in, line);
    CHECK(line == "terms,error");
    double prev = 2.0, last = 2.0;
    while (std::getline(in, line)) {
        double err = std::stod(line.substr(line.find(',') + 1));
        CHECK(err <= prev + 1e-15);
        prev = err;
        last = err;
    }
    CHECK(last == 0.0);
}

TEST_CASE("oracle command passes at n = 2") {
    auto result = run("oracle --n 2");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("FAIL") == std::string::npos);
    CHECK(result.output.find("PASS") != std::string::npos);
}

TEST_CASE("tree encode / decode / embed round trip") {
    std::string newick = temp_file("fig.nwk", "(((1,5),4),(3,2));\n");
    auto encoded = run("tree encode --input " + newick);
    CHECK(encoded.exit_code == 0);
    CHECK(encoded.output == "[[1,5],[2,3],[4,6],[7,8]]\n");

    std::string matching = temp_file("fig.json", "[[1,5],[2,3],[4,6],[7,8]]");
    auto decoded = run("tree decode --input " + matching);
    CHECK(decoded.exit_code == 0);
    CHECK(decoded.output == "(((1,5),4),(2,3));\n");  // canonical child order

    auto embedded = run("tree embed --input " + newick);
    CHECK(embedded.exit_code == 0);
    CHECK(embedded.output.find("[[") == 0);

    auto nni = run("tree nni-check --input " + newick);
    CHECK(nni.exit_code == 0);
    CHECK(nni.output.find("PASS") == 0);
}

TEST_CASE("tree counterexamples") {
    auto distant = run("tree counterexample --prop 6 --n 8");
    CHECK(distant.exit_code == 0);
    CHECK(distant.output.find("[[1,16],[2,15],[3,4],[5,10],[6,11],[7,12],[8,13],[9,14]]") !=
          std::string::npos);
    CHECK(distant.output.find("PASS") != std::string::npos);

    auto gap = run("tree counterexample --prop 7 --n 10");
    CHECK(gap.exit_code == 0);
    CHECK(gap.output.find("PASS") != std::string::npos);
}

TEST_CASE("bench runs and emits both reports") {
    auto result = run("bench --n-list 5 --matrix-size 10 --trials 2 "
                      "--include-serial --output /tmp/matchkern_cli_bench.csv");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("n backend mean_s stddev_s peak_mb") == 0);
    CHECK(result.output.find("zp-serial") != std::string::npos);
    // all three backends complete at n = 5
    CHECK(result.output.find("--") == std::string::npos);
    std::ifstream csv("/tmp/matchkern_cli_bench.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "n,backend,mean_seconds,stddev_seconds,peak_mb");
}

TEST_CASE("bench skips slow backends above their guards") {
    auto result = run("bench --n-list 8 --backend-list explicit --matrix-size 4 --trials 1");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("8 explicit -- -- --") != std::string::npos);
}

TEST_CASE("alternative truncation heuristics are exposed") {
    for (const char* h : {"length", "min-part"}) {
        auto result = run(std::string("kernel --n 5 --random 5 --seed 2 --heuristic ") + h);
        CHECK(result.exit_code == 0);
    }
    CHECK(run("kernel --n 5 --random 5 --heuristic bogus").exit_code != 0);
}

TEST_CASE("golden one-by-one kernel matrix") {
    std::string path = temp_file("one.json", "[[[1,2],[3,4]]]");
    auto result = run("kernel --n 2 --nu inf --kappa 1 --input " + path);
    CHECK(result.exit_code == 0);
    CHECK(result.output == "index,0\n0,1\n");
}

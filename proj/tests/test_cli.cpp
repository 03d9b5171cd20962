#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kaleido/cli.hpp"

using json = nlohmann::json;

namespace {

constexpr double kCosh1 = 1.5430806348152437;
constexpr double kTanh1 = 0.7615941559557649;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = kaleido::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

double c_re(const json& j) { return j.at("re").get<double>(); }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<double> split_numbers(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
    return out;
}

// Standard output and exit status of the installed binary.
std::pair<int, std::string> run_binary(const std::string& args) {
    const std::string cmd = std::string(MODN_BINARY) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string text;
    char buf[4096];
    for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, pipe)) > 0;) text.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}

struct EnvGuard {
    explicit EnvGuard(const char* value) { setenv("MODN_MAX_DIM", value, 1); }
    ~EnvGuard() { unsetenv("MODN_MAX_DIM"); }
};

} // namespace

TEST_CASE("eval") {
    SECTION("cosh 1 by both paths") {
        const Result r = run({"eval", "--n", "2", "--k", "0", "--z-re", "1"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(c_re(j["series"]) == Catch::Approx(kCosh1).epsilon(1e-15));
        CHECK(c_re(j["dft"]) == Catch::Approx(kCosh1).epsilon(1e-15));
        CHECK(j["diff"].get<double>() <= 1e-13);
    }
    SECTION("zero argument") {
        const json j = json::parse(run({"eval", "--n", "3", "--k", "1", "--z-re", "0"}).out);
        CHECK(c_re(j["series"]) == 0.0);
        CHECK(j["series"]["im"].get<double>() == 0.0);
    }
    SECTION("composite Gaussian") {
        const Result r = run({"eval", "--n", "2", "--k", "1", "--z-re", "0.5", "--x", "1"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(c_re(j["hermite_sum"]) == Catch::Approx(std::exp(-0.25) * std::sinh(1.0)).epsilon(1e-14));
        CHECK(j["gaussian_diff"].get<double>() <= 1e-13);
    }
    SECTION("csv") {
        const Result r = run({"eval", "--n", "2", "--k", "0", "--z-re", "1", "--format", "csv"});
        REQUIRE(r.code == 0);
        const auto ls = lines(r.out);
        CHECK(ls[0].rfind("# n=2 k=0", 0) == 0);
        CHECK(ls[1] == "quantity,re,im");
        CHECK(std::regex_match(ls[2], std::regex("series,1\\.54308063481524\\d\\de\\+00,0\\.0000000000000000e\\+00")));
        CHECK(split_numbers(ls[2].substr(7))[0] == Catch::Approx(kCosh1).epsilon(1e-15));
    }
    SECTION("invalid input") {
        CHECK(run({"eval", "--n", "0", "--k", "0", "--z-re", "1"}).code == 2);
        CHECK(run({"eval", "--n", "3", "--k", "3"}).code == 2);
        CHECK(run({"eval", "--n", "2", "--bogus", "1"}).code == 2);
        CHECK(run({"eval", "--n", "2", "--z-re", "abc"}).code == 2);
        CHECK(run({"eval", "--n", "2", "--format", "xml"}).code == 2);
        CHECK(run({"eval", "--n", "2", "--z-re", "1", "--x", "1", "--z-im", "9"}).code == 2);
        CHECK(run({}).code == 2);
    }
    SECTION("numerical failure") { CHECK(run({"eval", "--n", "2", "--z-re", "1e300"}).code == 3); }
}

TEST_CASE("state") {
    SECTION("cat state") {
        const Result r = run({"state", "--n", "2", "--k", "0", "--alpha-re", "1"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["n"] == 2);
        CHECK(j["k"] == 0);
        CHECK(c_re(j["alpha"]) == 1.0);
        const auto& amps = j["amps"];
        CHECK(amps.size() == j["dim"].get<std::size_t>());
        for (std::size_t m = 1; m < amps.size(); m += 2) CHECK(c_re(amps[m]) == 0.0);
        CHECK(j["mean_photons"].get<double>() == Catch::Approx(kTanh1).epsilon(1e-9));
        std::vector<std::string> keys;
        for (const auto& item : j.items()) keys.push_back(item.key());
        std::sort(keys.begin(), keys.end());
        CHECK(keys == std::vector<std::string>{"alpha", "amps", "delta_p", "delta_q", "dim", "k", "mean_photons",
                                               "n", "product"});
    }
    SECTION("trinity uncertainty") {
        const json j = json::parse(run({"state", "--n", "3", "--k", "1", "--alpha-re", "1.2"}).out);
        const double mean = j["mean_photons"].get<double>();
        CHECK(std::abs(j["product"].get<double>() - 0.5 * (1.0 + 2.0 * mean)) <= 1e-9);
        CHECK(std::abs(j["delta_q"].get<double>() - j["delta_p"].get<double>()) <= 1e-9);
    }
    SECTION("csv layout") {
        const Result r = run({"state", "--n", "3", "--k", "0", "--alpha-re", "0.5", "--dim", "20", "--format", "csv"});
        REQUIRE(r.code == 0);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() == 22);
        CHECK(ls[0].rfind("# n=3 k=0 alpha_re=", 0) == 0);
        CHECK(ls[0].find(" dim=20 ") != std::string::npos);
        CHECK(ls[1] == "m,amp_re,amp_im");
    }
    SECTION("failures") {
        CHECK(run({"state", "--n", "4", "--k", "3", "--alpha-re", "0", "--alpha-im", "0"}).code == 3);
        CHECK(run({"state", "--n", "4", "--k", "2", "--alpha-re", "4", "--dim", "16"}).code == 3);
        CHECK(run({"state", "--n", "2", "--k", "0", "--alpha-re", "nan"}).code == 2);
        CHECK(run({"state", "--n", "2", "--k", "0", "--alpha-re", "1", "--dim", "1"}).code == 2);
    }
    SECTION("MODN_MAX_DIM") {
        const EnvGuard env("20");
        CHECK(run({"state", "--n", "2", "--k", "0", "--alpha-re", "0.5", "--dim", "40"}).code == 2);
        const json j = json::parse(run({"state", "--n", "2", "--k", "0", "--alpha-re", "0.5"}).out);
        CHECK(j["dim"] == 20);
    }
    SECTION("bad MODN_MAX_DIM") {
        const EnvGuard env("lots");
        CHECK(run({"state", "--n", "2", "--k", "0", "--alpha-re", "0.5"}).code == 2);
    }
}

TEST_CASE("grid") {
    SECTION("odd quartet state vanishes at the origin") {
        const Result r = run({"grid", "--n", "4", "--k", "1", "--alpha-re", "1", "--alpha-im", "1"});
        REQUIRE(r.code == 0);
        const auto ls = lines(r.out);
        CHECK(ls[1] == "x,psi_re,psi_im,prob");
        REQUIRE(ls.size() == 2 + 1201);
        const auto mid = split_numbers(ls[2 + 600]);
        CHECK(std::abs(mid[0]) < 1e-12);
        CHECK(mid[3] <= 1e-12);
    }
    SECTION("normalization recorded in the metadata") {
        const Result r = run({"grid", "--n", "4", "--k", "0", "--alpha-re", "1", "--alpha-im", "1"});
        REQUIRE(r.code == 0);
        const std::string meta = lines(r.out)[0];
        std::smatch m;
        REQUIRE(std::regex_search(meta, m, std::regex("integral=([^ ]+)")));
        CHECK(std::abs(std::stod(m[1].str()) - 1.0) <= 1e-6);
        CHECK(meta.find("certified=true") != std::string::npos);
        CHECK(std::regex_search(meta, std::regex("^# n=4 k=0 alpha_re=\\S+ alpha_im=\\S+ dim=\\d+ integral=")));
    }
    SECTION("vacuum") {
        const Result r = run({"grid", "--n", "1", "--k", "0", "--alpha-re", "0", "--x-min", "-4", "--x-max", "4",
                              "--samples", "801", "--format", "json"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["samples"].size() == 801);
        CHECK(j["samples"][400]["prob"].get<double>() == Catch::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-14));
    }
    SECTION("uncertified range") {
        const Result r = run({"grid", "--n", "4", "--k", "0", "--alpha-re", "1", "--alpha-im", "1", "--x-min", "-1",
                              "--x-max", "1", "--samples", "101"});
        CHECK(r.code == 4);
        CHECK(r.err.find("--x-min") != std::string::npos);
        CHECK(lines(r.out)[0].find("certified=false") != std::string::npos);
    }
    SECTION("invalid") {
        CHECK(run({"grid", "--n", "4", "--k", "0", "--samples", "100"}).code == 2);
        CHECK(run({"grid", "--n", "4", "--k", "0", "--x-min", "2", "--x-max", "1"}).code == 2);
        CHECK(run({"grid", "--n", "4", "--k", "2", "--alpha-re", "0"}).code == 3);
    }
}

TEST_CASE("verify") {
    SECTION("default sweep passes") {
        const Result r = run({"verify", "--suite", "all", "--dim", "64"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j.size() == 8 * 11);
        for (const auto& rep : j) {
            CHECK(rep["residual_norm"].get<double>() <= 1e-8);
            CHECK(rep["passed"] == true);
            CHECK(rep["dim"] == 64);
            CHECK(rep["params"].contains("alpha"));
            CHECK(rep["params"].contains("beta"));
        }
    }
    SECTION("commuting case is exact") {
        const Result r = run({"verify", "--suite", "q-commutation", "--alpha-re", "0", "--beta-re", "0"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        REQUIRE(j.size() == 1);
        CHECK(j[0]["identity_name"] == "q_commutation");
        CHECK(j[0]["residual_norm"].get<double>() == 0.0);
    }
    SECTION("unsafe range is refused") {
        const Result r = run({"verify", "--suite", "mod2-identities", "--dim", "8", "--alpha-re", "2", "--beta-re", "2"});
        CHECK(r.code == 2);
        CHECK(r.out.empty());
        CHECK_FALSE(r.err.empty());
    }
    SECTION("tight tolerance reports failure") {
        const Result r = run({"verify", "--suite", "addition", "--alpha-re", "1", "--beta-re", "0.9", "--tolerance",
                              "1e-300", "--format", "csv"});
        CHECK(r.code == 1);
        const auto ls = lines(r.out);
        CHECK(ls[0] == "identity_name,residual_norm,tolerance,passed,dim,alpha_re,alpha_im,beta_re,beta_im");
        CHECK(ls.size() == 5);
    }
    SECTION("bad suite") { CHECK(run({"verify", "--suite", "everything"}).code == 2); }
}

TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "modn_cli_output_test.csv";
    const Result r = run({"grid", "--n", "4", "--k", "2", "--alpha-re", "1", "--alpha-im", "1", "--output", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path, std::ios::binary);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text == run({"grid", "--n", "4", "--k", "2", "--alpha-re", "1", "--alpha-im", "1"}).out);
    std::filesystem::remove(path);
}

TEST_CASE("number formatting") {
    const std::string out = run({"eval", "--n", "3", "--k", "2", "--z-re", "1.5"}).out;
    const std::regex number("-?\\d\\.\\d{16}e[+-]\\d{2,3}");
    const json j = json::parse(out);
    for (const char* key : {"series", "dft"}) {
        CHECK(out.find("\"" + std::string(key) + "\":{\"re\":") != std::string::npos);
    }
    std::smatch m;
    std::string rest = out;
    int count = 0;
    while (std::regex_search(rest, m, number)) {
        ++count;
        rest = m.suffix();
    }
    CHECK(count == 7); // z, series, dft (two each) and diff
}

TEST_CASE("binary: exit codes and byte-identical output") {
    const std::string grid = "grid --n 4 --k 1 --alpha-re 1 --alpha-im 1";
    const auto first = run_binary(grid);
    const auto second = run_binary(grid);
    CHECK(first.first == 0);
    CHECK_FALSE(first.second.empty());
    CHECK(first.second == second.second);
    CHECK(first.second == run({"grid", "--n", "4", "--k", "1", "--alpha-re", "1", "--alpha-im", "1"}).out);

    CHECK(run_binary("state --n 3 --k 2 --alpha-re 0.7 --alpha-im -0.2").second ==
          run_binary("state --n 3 --k 2 --alpha-re 0.7 --alpha-im -0.2").second);
    CHECK(run_binary("eval --n 0 --k 0 --z-re 1").first == 2);
    CHECK(run_binary("state --n 4 --k 3 --alpha-re 0 --alpha-im 0").first == 3);
    CHECK(run_binary("verify --suite mod2-identities --dim 8 --alpha-re 2 --beta-re 2").first == 2);
    CHECK(run_binary("verify --suite q-commutation --alpha-re 0 --beta-re 0").first == 0);
    CHECK(run_binary("grid --n 4 --k 0 --alpha-re 1 --alpha-im 1 --x-min -1 --x-max 1 --samples 101").first == 4);
}

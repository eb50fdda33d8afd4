#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "covnum/cover.hpp"
#include "covnum/cover_json.hpp"

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(COVNUM_BIN) + " --no-cache " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(COVNUM_DATA) + "/" + name; }

}  // namespace

TEST(CliVerify, Erdos) {
    auto r = run("verify " + data("erdos.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("cover: yes, minimal: yes, N=12"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("7(mod 12)"), std::string::npos);
}

TEST(CliVerify, NotACover) {
    auto r = run("verify " + data("single_even.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("cover: no, witness: 1"), std::string::npos) << r.out;
}

TEST(CliVerify, RedundantClassListed) {
    auto r = run("verify " + data("redundant.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("minimal: no"), std::string::npos);
    EXPECT_NE(r.out.find("redundant: 0(mod 3)"), std::string::npos);
}

TEST(CliVerify, InputErrors) {
    EXPECT_EQ(run("verify " + data("malformed.json")).code, 2);
    EXPECT_EQ(run("verify /nonexistent/cover.json").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(CliVerify, SieveBound) {
    auto path = std::filesystem::temp_directory_path() / "covnum_big_cover.json";
    std::ofstream(path) << R"({"classes":[{"a":0,"n":4294967311}]})";
    EXPECT_EQ(run("verify " + path.string()).code, 3);
    std::filesystem::remove(path);
}

TEST(CliConstruct, PrimesExponents) {
    auto r = run("construct --primes 2,3 --exponents 2,1");
    EXPECT_EQ(r.code, 0);
    auto sys = covnum::parse_cover(r.out);
    EXPECT_EQ(sys.size(), 5u);
    EXPECT_TRUE(covnum::verify_cover(sys).is_cover);
}

TEST(CliConstruct, PrimitivePlan) {
    auto r = run("--json construct --thm13 2,3,5,7");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"n\":210"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("primitive-covering"), std::string::npos);
}

TEST(CliConstruct, Errors) {
    EXPECT_EQ(run("construct --thm13 2,7,11").code, 2);
    EXPECT_EQ(run("construct --primes 3,5 --exponents 1,1").code, 2);
    EXPECT_EQ(run("construct --primes 2,x --exponents 1,1").code, 2);
    EXPECT_EQ(run("construct").code, 2);
    std::string cmd = std::string(COVNUM_BIN) + " construct --thm13 2,7,11 2>&1 >/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 512> buf{};
    std::string err;
    while (std::fgets(buf.data(), buf.size(), pipe)) err += buf.data();
    pclose(pipe);
    EXPECT_NE(err.find("size precondition"), std::string::npos) << err;
}

TEST(CliConstruct, RoundTripThroughVerify) {
    auto path = std::filesystem::temp_directory_path() / "covnum_roundtrip.json";
    auto r = run("construct --cor11 2,3,5");
    ASSERT_EQ(r.code, 0);
    std::ofstream(path) << r.out;
    auto v = run("--json verify " + path.string());
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find("\"cover\":true"), std::string::npos);
    EXPECT_EQ(covnum::dump_cover(covnum::parse_cover(r.out)) + "\n", r.out);
    std::filesystem::remove(path);
}

TEST(CliDecide, Examples) {
    auto r12 = run("decide 12");
    EXPECT_EQ(r12.code, 0);
    EXPECT_NE(r12.out.find("certificate"), std::string::npos);
    auto r30 = run("--json decide 30");
    EXPECT_EQ(r30.code, 1);
    EXPECT_NE(r30.out.find("search-exhausted"), std::string::npos);
    EXPECT_EQ(run("primitive 210").code, 0);
    EXPECT_EQ(run("primitive 24").code, 1);
    EXPECT_EQ(run("decide 1").code, 2);
    EXPECT_EQ(run("decide 3000000000").code, 3);
    EXPECT_EQ(run("--max-nodes 1 decide 210").code, 4);
    EXPECT_EQ(run("--max-nodes 0 decide 12").code, 2);
}

TEST(CliDecide, DeterministicOutput) {
    auto a = run("--json decide 280");
    auto b = run("--json decide 280");
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, 0);
}

TEST(CliDecide, CacheFile) {
    auto dir = std::filesystem::temp_directory_path() / "covnum_cli_cache";
    std::filesystem::create_directories(dir);
    auto cache = dir / "decisions.jsonl";
    std::filesystem::remove(cache);
    std::string base = std::string(COVNUM_BIN) + " --cache " + cache.string() + " --json decide 90 >/dev/null";
    ASSERT_EQ(std::system(base.c_str()), 0);
    ASSERT_EQ(std::system(base.c_str()), 0);
    std::ifstream in(cache);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_NE(all.find("\"n\":90"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(CliLab, EnumerateConjectureFulldiv) {
    auto e = run("enumerate 100");
    EXPECT_EQ(e.code, 0);
    EXPECT_NE(e.out.find("80 = 2^4*5"), std::string::npos) << e.out;
    auto j = run("--json enumerate 100");
    EXPECT_TRUE(j.out.starts_with("[{\"certificate\""));
    EXPECT_EQ(run("conjecture 300").code, 0);
    EXPECT_EQ(run("fulldiv 12").code, 0);
    EXPECT_EQ(run("fulldiv 24").code, 1);
    EXPECT_EQ(run("fulldiv 30").code, 2);
}

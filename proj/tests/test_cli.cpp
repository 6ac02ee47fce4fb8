#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>
#include <z2rank/z2rank.hpp>

#include "oracles.hpp"

using nlohmann::json;
using namespace z2rank;

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(Z2RANK_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("rank, det and count commands") {
    const auto a4 = write_temp("z2rank_a4.txt", format_matrix(oracle::a4()));
    CHECK(run("rank " + a4.string()).out == "3\n");
    CHECK(run("det " + a4.string()).out == "1\n");
    CHECK(run("count 2 2 2").out == "6\n");
    // large counts stay exact: (2^40-1)^2 matrices of rank 1
    const auto j = json::parse(run("count 40 40 1 --json").out);
    bigint expect = ((bigint(1) << 40) - 1) * ((bigint(1) << 40) - 1);
    std::ostringstream ss;
    ss << expect;
    CHECK(j.at("count").get<std::string>() == ss.str());
}

TEST_CASE("completion commands round-trip against the input file") {
    const auto a4 = write_temp("z2rank_a4.txt", format_matrix(oracle::a4()));
    SECTION("--min-rank JSON verifies") {
        const auto r = run("complete " + a4.string() + " --min-rank --json");
        CHECK(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j.at("R") == 2);
        BitVector w(j.at("witness").size());
        for (std::size_t i = 0; i < w.size(); ++i)
            if (j.at("witness")[i] == 1) w.set(i, true);
        CHECK(rank(with_diagonal(oracle::a4(), {w})) == j.at("R"));
    }
    SECTION("--exact decision exit codes") {
        CHECK(run("complete " + a4.string() + " --exact 1").code == 1);
        CHECK(run("complete " + a4.string() + " --exact 2").code == 0);
    }
    SECTION("--approx bounds") {
        const json j = json::parse(run("complete " + a4.string() + " --approx --json").out);
        const std::size_t k = j.at("k");
        CHECK(2 <= k);
        CHECK(k <= 4);
    }
    SECTION("--nondegenerate and --degenerate witnesses verify") {
        const json jn =
            json::parse(run("complete " + a4.string() + " --nondegenerate --json").out);
        BitVector wn(3);
        for (std::size_t i = 0; i < 3; ++i)
            if (jn.at("witness")[i] == 1) wn.set(i, true);
        CHECK(det(with_diagonal(oracle::a4(), {wn})) == 1);
        const json jd =
            json::parse(run("complete " + a4.string() + " --degenerate --json").out);
        BitVector wd(3);
        for (std::size_t i = 0; i < 3; ++i)
            if (jd.at("witness")[i] == 1) wd.set(i, true);
        CHECK(det(with_diagonal(oracle::a4(), {wd})) == 0);
    }
    SECTION("--rank1 certificate on a failing symmetric input") {
        BitMatrix cherry(3, 3);
        cherry.set(0, 1, true), cherry.set(1, 0, true);
        cherry.set(0, 2, true), cherry.set(2, 0, true);
        const auto f = write_temp("z2rank_cherry.txt", format_matrix(cherry));
        const auto r = run("complete " + f.string() + " --rank1 --json");
        CHECK(r.code == 1);
        const json j = json::parse(r.out);
        CHECK(j.at("certificate").at("kind") == "pattern3");
    }
}

TEST_CASE("hieroglyph commands") {
    CHECK(run("hiero aabcbc --genus --json").out == "{\"genus\":1}\n");
    CHECK(run("hiero aabcbc --genus").out == "genus = 1\n");
    CHECK(run("hiero abacbc --genus --json").out == "{\"genus\":2}\n");
    CHECK(run("hiero aabcbc --mobius").code == 0);
    CHECK(run("hiero abacbc --mobius").code == 1);
    CHECK(run("hiero abacbc --check 1").code == 1);
    CHECK(run("hiero abacbc --check 2").code == 0);
    SECTION("full report") {
        const json j = json::parse(run("hiero aabcbc --json").out);
        CHECK(j.at("n") == 3);
        CHECK(j.at("genus") == 1);
        CHECK(j.at("mobius") == true);
        // witness completes the overlap matrix to the reported genus
        const Hieroglyph h = parse_hieroglyph("aabcbc");
        BitVector w(3);
        for (std::size_t i = 0; i < 3; ++i)
            if (j.at("witness")[i] == 1) w.set(i, true);
        CHECK(rank(with_diagonal(overlap_matrix(h), {w})) == 1);
    }
    SECTION("file mode processes every line") {
        const auto f = write_temp("z2rank_words.txt", "aabbcc\n# comment\nabacbc\n");
        const auto r = run("hiero " + f.string() + " --genus --json");
        CHECK(r.out == "{\"genus\":0,\"word\":\"aabbcc\"}\n{\"genus\":2,\"word\":\"abacbc\"}\n");
    }
    SECTION("multi-character tokens") {
        CHECK(run("hiero 'x1 x2 x1 x2' --tokens --genus --json").out == "{\"genus\":1}\n");
    }
    SECTION("bad word is an input error") {
        CHECK(run("hiero aba --genus").code == 3);
    }
}

TEST_CASE("choose commands") {
    SECTION("solve and validate round trip") {
        const auto r = run("choose solve 5 3 --json");
        CHECK(r.code == 0);
        const json j = json::parse(r.out);
        REQUIRE(j.at("feasible") == true);
        std::string matrix = "# m=5 l=3\n";
        for (const auto& row : j.at("member")) {
            for (const auto& bit : row) matrix += bit == 1 ? '1' : '0';
            matrix += '\n';
        }
        const auto f = write_temp("z2rank_m53.txt", matrix);
        CHECK(run("choose validate " + f.string() + " 5 3").code == 0);
    }
    SECTION("invalid matrix is reported with violations") {
        std::string zero = "# m=5 l=3\n";
        for (int r = 0; r < 10; ++r) zero += "0000000000\n";
        const auto f = write_temp("z2rank_zero53.txt", zero);
        const auto r = run("choose validate " + f.string() + " 5 3 --json");
        CHECK(r.code == 1);
        const json j = json::parse(r.out);
        CHECK(j.at("valid") == false);
        CHECK(j.at("violations").size() == 5);
    }
    SECTION("min-rank reports the even m=5 value exactly and its witness validates") {
        const json j = json::parse(run("choose min-rank 5 3 --even --json").out);
        CHECK(j.at("lower") == 2);
        CHECK(j.at("upper") == 2);
        CHECK(j.at("exact") == true);
        SubsetIndexer ix(5, 3);
        BitMatrix w(ix.count(), ix.count());
        for (std::size_t r = 0; r < ix.count(); ++r)
            for (std::size_t c = 0; c < ix.count(); ++c)
                if (j.at("witness")[r][c] == 1) w.set(r, c, true);
        CHECK(rank(w) == 2);
        CHECK(validate({ix, w}, true).empty());
    }
    SECTION("wrong side is an input error") {
        const auto f = write_temp("z2rank_tiny.txt", "01\n10\n");
        CHECK(run("choose validate " + f.string() + " 5 3").code == 3);
    }
}

TEST_CASE("form classify") {
    const auto f = write_temp("z2rank_h.txt", "01\n10\n");
    const json j = json::parse(run("form classify " + f.string() + " --json").out);
    CHECK(j.at("k") == 1);
    CHECK(j.at("l") == 0);
    CHECK(j.at("basis").size() == 2);
}

TEST_CASE("exit code conventions") {
    const auto a4 = write_temp("z2rank_a4.txt", format_matrix(oracle::a4()));
    CHECK(run("nonsense").code == 2);
    CHECK(run("complete " + a4.string()).code == 2); // a mode is required
    CHECK(run("rank /does/not/exist.txt").code == 3);
    const auto ragged = write_temp("z2rank_ragged.txt", "01\n011\n");
    CHECK(run("rank " + ragged.string()).code == 3);
    // a 40x40 random instance is far beyond the default budget
    std::mt19937_64 rng(77);
    const auto big = write_temp("z2rank_big.txt", format_matrix(BitMatrix::random(40, 40, rng)));
    CHECK(run("complete " + big.string() + " --min-rank --budget 1000").code == 4);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
    std::mt19937_64 rng(78);
    const auto f = write_temp("z2rank_rand12.txt",
                              format_matrix(BitMatrix::random(12, 12, rng)));
    const std::string base = run("complete " + f.string() + " --min-rank --json").out;
    CHECK(base == run("complete " + f.string() + " --min-rank --json").out);
    CHECK(base == run("complete " + f.string() + " --min-rank --json --threads 8").out);
    const std::string mr = run("choose min-rank 6 3 --json --seed 5").out;
    CHECK(mr == run("choose min-rank 6 3 --json --seed 5").out);
}

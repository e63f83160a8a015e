#include <doctest.h>

#include "nacnet/errors.hpp"
#include "nacnet/rng.hpp"
#include "nacnet/text_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

using namespace nacnet;

TEST_CASE("formatDouble round-trips exactly") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-20.0, 20.0));
        CHECK(parseDouble(formatDouble(v), "v") == v);
    }
    CHECK(parseDouble(formatDouble(0.0), "v") == 0.0);
    CHECK(parseDouble(formatDouble(-1.5), "v") == -1.5);
}

TEST_CASE("formatDouble emits the shortest decimal form") {
    CHECK(formatDouble(0.1) == "0.1");
    CHECK(formatDouble(1.0) == "1");
    CHECK(formatDouble(-2.5) == "-2.5");
    CHECK(formatDouble(1500.0) == "1500");
}

TEST_CASE("formatDoubleHex is bit-exact") {
    Rng rng(12);
    for (int i = 0; i < 2000; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-300.0, 300.0));
        const double back = parseDouble(formatDoubleHex(v), "v");
        CHECK(back == v);
    }
    const double tiny = std::numeric_limits<double>::denorm_min();
    CHECK(parseDouble(formatDoubleHex(tiny), "v") == tiny);
    CHECK(parseDouble(formatDoubleHex(-0.0), "v") == 0.0);
}

TEST_CASE("parseDouble rejects junk and names the field") {
    CHECK_THROWS_AS(parseDouble("abc", "alpha"), ParseError);
    CHECK_THROWS_AS(parseDouble("", "alpha"), ParseError);
    CHECK_THROWS_AS(parseDouble("1.5x", "alpha"), ParseError);
    CHECK_THROWS_WITH_AS(parseDouble("oops", "alpha"), doctest::Contains("alpha"), ParseError);
}

TEST_CASE("parseLong basics") {
    CHECK(parseLong("42", "n") == 42);
    CHECK(parseLong("-7", "n") == -7);
    CHECK_THROWS_AS(parseLong("4.5", "n"), ParseError);
    CHECK_THROWS_AS(parseLong("", "n"), ParseError);
}

TEST_CASE("splitWs splits on spaces") {
    const std::vector<std::string> parts = splitWs("NODE 3 9 12");
    REQUIRE(parts.size() == 4);
    CHECK(parts[0] == "NODE");
    CHECK(parts[3] == "12");
    CHECK(splitWs("").empty());
}

TEST_CASE("LineReader skips comments and counts physical lines") {
    std::istringstream in("# header\nfirst\n# note\nsecond\n");
    LineReader reader(in);
    std::string line;
    REQUIRE(reader.next(line));
    CHECK(line == "first");
    CHECK(reader.lineNumber() == 2);
    REQUIRE(reader.next(line));
    CHECK(line == "second");
    CHECK(reader.lineNumber() == 4);
    CHECK_FALSE(reader.next(line));
}

TEST_CASE("atomicWriteFile writes and overwrites, readFile reads back") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "nacnet_text_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "out.txt").string();

    atomicWriteFile(path, "one\n");
    CHECK(readFile(path) == "one\n");
    atomicWriteFile(path, "two\n");
    CHECK(readFile(path) == "two\n");

    // No temp files left behind.
    int entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);

    CHECK_THROWS_AS(readFile((dir / "missing.txt").string()), DataError);
    CHECK_THROWS_AS(atomicWriteFile((dir / "no_such_dir" / "x.txt").string(), "x"),
                    DataError);
    fs::remove_all(dir);
}

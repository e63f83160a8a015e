#include <doctest.h>

#include "nacnet/errors.hpp"
#include "nacnet/histology_map.hpp"
#include "nacnet/rng.hpp"

#include <string>

using namespace nacnet;

TEST_CASE("label slug table is a bijection over codes 0..12") {
    CHECK(labelSlugs().size() == 13);
    for (int code = 0; code <= kMaxLabelCode; ++code) {
        CHECK(labelFromSlug(labelSlug(code)) == code);
    }
    CHECK(labelSlug(kLabelTumor) == "tumor");
    CHECK(labelSlug(kLabelImmuneCells) == "immune_cells");
    CHECK(labelSlug(kLabelMvd) == "mvd");
    CHECK(labelSlug(kLabelStroma) == "stroma");
    CHECK_THROWS_AS(labelFromSlug("granite"), ConfigError);
}

TEST_CASE("isValidLabel bounds") {
    CHECK(isValidLabel(0));
    CHECK(isValidLabel(12));
    CHECK_FALSE(isValidLabel(13));
    CHECK_FALSE(isValidLabel(-1));
}

TEST_CASE("makeMap builds an all-background grid") {
    const HistologyMap m = makeMap(3, 4, 100);
    CHECK(m.rows == 3);
    CHECK(m.cols == 4);
    CHECK(m.tile_px == 100);
    REQUIRE(m.cells.size() == 12);
    for (const auto c : m.cells) CHECK(c == 0);
}

TEST_CASE("write then parse is the identity on random maps") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        HistologyMap m = makeMap(1 + static_cast<int>(rng.below(12)),
                                 1 + static_cast<int>(rng.below(12)));
        for (auto& c : m.cells) c = static_cast<std::uint8_t>(rng.below(13));
        CHECK(parseMap(writeMap(m)) == m);
    }
}

TEST_CASE("parse then write is the identity on canonical text") {
    const std::string canonical = "HMAP 1 2 3 150\n0 9 9\n2 0 12\n";
    CHECK(writeMap(parseMap(canonical)) == canonical);
}

TEST_CASE("parser skips comment lines") {
    const HistologyMap m = parseMap("# produced by a tool\nHMAP 1 1 2 150\n# mid comment\n3 4\n");
    CHECK(m.rows == 1);
    CHECK(m.at(0, 1) == 4);
}

TEST_CASE("parser rejects malformed input with the line named") {
    CHECK_THROWS_AS(parseMap(""), ParseError);
    CHECK_THROWS_AS(parseMap("XMAP 1 1 1 150\n0\n"), ParseError);
    CHECK_THROWS_AS(parseMap("HMAP 2 1 1 150\n0\n"), ParseError);          // bad version
    CHECK_THROWS_AS(parseMap("HMAP 1 1 1 150\n"), ParseError);             // missing row
    CHECK_THROWS_AS(parseMap("HMAP 1 1 2 150\n0\n"), ParseError);          // short row
    CHECK_THROWS_AS(parseMap("HMAP 1 1 1 150\n13\n"), ParseError);         // code out of range
    CHECK_THROWS_AS(parseMap("HMAP 1 1 1 150\n0\nextra\n"), ParseError);   // trailing content
    CHECK_THROWS_WITH_AS(parseMap("HMAP 1 2 1 150\n0\n13\n"),
                         doctest::Contains("line 3"), ParseError);
}

TEST_CASE("at() indexes row-major") {
    HistologyMap m = makeMap(2, 3);
    m.at(1, 2) = 7;
    CHECK(m.cells[5] == 7);
}

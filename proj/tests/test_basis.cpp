#include <array>
#include <stdexcept>

#include "doctest.h"
#include "weakcat/basis.hpp"

using namespace weakcat;

namespace {

BasisPtr demo_basis() {
    return make_basis({{"path", {"1", "2", "3", "4", "5"}}, {"prop", {"L_p", "L_-p", "s_up", "s_dn"}}});
}

}  // namespace

TEST_CASE("composite basis dimensions and strides") {
    const BasisPtr b = demo_basis();
    CHECK(b->dimension() == 20);
    CHECK(b->subsystem_count() == 2);
    CHECK(b->subsystem(0).name == "path");
    CHECK(b->subsystem(1).levels.size() == 4);

    // First subsystem is the most significant coordinate.
    const std::array<std::size_t, 2> coords{2, 3};
    const std::size_t flat = b->flat_index(coords);
    CHECK(flat == 2 * 4 + 3);
    CHECK(b->unflatten(flat) == std::vector<std::size_t>{2, 3});
    CHECK(b->coordinate(flat, 0) == 2);
    CHECK(b->coordinate(flat, 1) == 3);
}

TEST_CASE("flat index round-trips over the whole space") {
    const BasisPtr b = make_basis({{"a", {"x", "y", "z"}}, {"b", {"0", "1"}}, {"c", {"p", "q"}}});
    CHECK(b->dimension() == 12);
    for (std::size_t flat = 0; flat < b->dimension(); ++flat) {
        const auto coords = b->unflatten(flat);
        CHECK(b->flat_index(coords) == flat);
        for (std::size_t sub = 0; sub < 3; ++sub) {
            CHECK(b->coordinate(flat, sub) == coords[sub]);
        }
    }
}

TEST_CASE("with_coordinate moves exactly one subsystem") {
    const BasisPtr b = demo_basis();
    const std::size_t flat = b->flat_index(std::array<std::size_t, 2>{1, 2});
    const std::size_t moved = b->with_coordinate(flat, 0, 4);
    CHECK(b->coordinate(moved, 0) == 4);
    CHECK(b->coordinate(moved, 1) == 2);
    CHECK(b->with_coordinate(moved, 0, 1) == flat);
    CHECK_THROWS_AS((void)b->with_coordinate(flat, 0, 5), std::invalid_argument);
}

TEST_CASE("labels resolve and print") {
    const BasisPtr b = demo_basis();
    CHECK(b->subsystem_index("path") == 0);
    CHECK(b->subsystem_index("prop") == 1);
    CHECK(!b->subsystem_index("nope").has_value());
    CHECK(b->level_index(0, "3") == 2);
    CHECK(b->find_level(1, "s_dn") == 3);
    CHECK(!b->find_level(1, "s_mid").has_value());
    CHECK_THROWS_WITH_AS((void)b->level_index(1, "s_mid"),
                         doctest::Contains("s_mid"), std::invalid_argument);
    CHECK(b->label_of(b->flat_index(std::array<std::size_t, 2>{1, 2})) == "|2,s_up>");
}

TEST_CASE("basis construction is validated") {
    CHECK_THROWS_AS(make_basis({}), std::invalid_argument);
    CHECK_THROWS_AS(make_basis({{"a", {}}}), std::invalid_argument);
    CHECK_THROWS_AS(make_basis({{"a", {"x", "x"}}}), std::invalid_argument);
    CHECK_THROWS_AS(make_basis({{"a", {"x"}}, {"a", {"y"}}}), std::invalid_argument);
    CHECK_THROWS_AS(make_basis({{"", {"x"}}}), std::invalid_argument);

    // 2^13 = 8192 > kMaxDimension.
    std::vector<Subsystem> subs;
    for (int s = 0; s < 13; ++s) {
        subs.push_back({"q" + std::to_string(s), {"0", "1"}});
    }
    CHECK_THROWS_AS(make_basis(subs), std::invalid_argument);
    subs.pop_back();
    CHECK(make_basis(subs)->dimension() == 4096);
}

TEST_CASE("same_basis compares structure, not identity") {
    const BasisPtr a = demo_basis();
    const BasisPtr b = demo_basis();
    const BasisPtr c = make_basis({{"path", {"1", "2"}}});
    CHECK(same_basis(a, a));
    CHECK(same_basis(a, b));
    CHECK(!same_basis(a, c));
}

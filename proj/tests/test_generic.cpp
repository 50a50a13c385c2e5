#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support.hpp"

using namespace gh;

TEST_CASE("rng streams are reproducible", "[rng]") {
    Rng a(42), b(42);
    for (int k = 0; k < 10; ++k) CHECK(a.uniform(0, 1) == b.uniform(0, 1));
    Rng c = Rng(42).split(1), d = Rng(42).split(1), e = Rng(42).split(2);
    const double x = c.uniform(0, 1);
    CHECK(x == d.uniform(0, 1));
    CHECK(x != e.uniform(0, 1));
}

TEST_CASE("perturbed generic spaces", "[generic]") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 3 + seed % 4;
        const auto g = perturbed_generic(n, seed);
        CHECK(g.space.size() == n);
        CHECK(validate(g.space).valid());
        CHECK(g.report.is_generic);
        CHECK(g.report.s > 2.0 / 3);
        REQUIRE(g.report.e);
        CHECK(*g.report.e > 0.0);
        CHECK(g.report.t > 0.0);
        std::set<double> offdiag;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) offdiag.insert(g.space(i, j));
        CHECK(offdiag.size() == n * (n - 1) / 2);
    }
}

TEST_CASE("perturbed generation is deterministic", "[generic]") {
    CHECK(perturbed_generic(5, 9).space == perturbed_generic(5, 9).space);
    CHECK_FALSE(perturbed_generic(5, 9).space == perturbed_generic(5, 10).space);
}

TEST_CASE("small amplitudes still give positive e", "[generic]") {
    const auto g = perturbed_generic(3, 1, 1e-6);
    REQUIRE(g.report.e);
    CHECK(*g.report.e > 0.0);
}

TEST_CASE("perturbed generation preconditions", "[generic]") {
    CHECK_THROWS_AS(perturbed_generic(2, 0), DomainError);
    CHECK_THROWS_AS(perturbed_generic(4, 0, 0.5), DomainError);
    CHECK_THROWS_AS(perturbed_generic(9, 0), DomainError);
}

TEST_CASE("graph construction", "[generic][shramov]") {
    const auto g = shramov_graph(3);
    CHECK(g.vertex_count == 3 + 3 * 3);
    CHECK(g.edges.size() == 4 * 3);
    const auto deg = g.degrees();
    // base vertices meet m-1 edges; u has degree 2, v degree 3, w degree 1
    for (std::size_t x = 0; x < 3; ++x) CHECK(deg[x] == 2);
    for (std::size_t e = 0; e < 3; ++e) {
        CHECK(deg[3 + 3 * e] == 2);
        CHECK(deg[3 + 3 * e + 1] == 3);
        CHECK(deg[3 + 3 * e + 2] == 1);
    }
    CHECK(g.labels[3] == "u(0,1)");
    CHECK(g.adjacent(0, 3));
    CHECK_FALSE(g.adjacent(0, 4));
}

TEST_CASE("graph space distances", "[generic][shramov]") {
    const auto s = shramov_space(2, 0.5);
    CHECK(s.space.size() == 5);
    CHECK(s.space(0, 2) == 1.5);  // x - u
    CHECK(s.space(0, 3) == 1.0);  // x, v not adjacent
    CHECK(s.report.s == 1.0);
    CHECK(s.report.t == 0.5);
    CHECK(diameter(s.space) == 1.5);
}

TEST_CASE("the five-vertex graph has a non-trivial automorphism", "[generic][shramov]") {
    // y and the pendant w are both leaves hanging off v, so swapping them
    // preserves adjacency and e = 0 at m = 2.
    const auto s = shramov_space(2, 0.5);
    REQUIRE(s.report.e);
    CHECK(*s.report.e == 0.0);
    CHECK(s.report.e_witness == std::vector<std::size_t>{0, 4, 2, 3, 1});
    CHECK_FALSE(s.report.is_generic);
}

TEST_CASE("rigid graphs give e = eps", "[generic][shramov]") {
    for (double eps : {0.25, 0.5}) {
        const auto s = shramov_space(3, eps, 12);
        CHECK(s.report.s == 1.0);
        CHECK(s.report.t == 1.0 - eps);
        REQUIRE(s.report.e);
        CHECK(*s.report.e == eps);
        CHECK(s.report.is_generic);
    }
}

TEST_CASE("graph space preconditions", "[generic][shramov]") {
    CHECK_THROWS_AS(shramov_graph(1), DomainError);
    CHECK_THROWS_AS(shramov_space(3, 1.0), DomainError);
    CHECK_FALSE(shramov_space(4, 0.5).report.e.has_value());
}

TEST_CASE("scaled anchors", "[generic][anchor]") {
    for (double d : {0.1, 1.0, 37.5}) {
        const auto a = scaled_generic_for(d, 4, 3);
        CHECK(a.generated.report.s > 8 * d);
        CHECK(*a.generated.report.e > 8 * d);
        CHECK(a.generated.report.is_generic);
    }
    CHECK_THROWS_AS(scaled_generic_for(0.0, 4, 3), DomainError);
}

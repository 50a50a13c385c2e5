#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support.hpp"

using namespace gh;
using Pairs = std::vector<IndexPair>;

static std::size_t count_all(std::size_t p, std::size_t q) {
    auto s = enumerate_correspondences(p, q);
    std::size_t c = 0;
    while (s.next()) ++c;
    return c;
}

static std::size_t count_stars(std::size_t p, std::size_t q) {
    auto s = enumerate_star_correspondences(p, q);
    std::size_t c = 0;
    while (s.next()) ++c;
    return c;
}

TEST_CASE("relation bookkeeping", "[relation]") {
    Relation r(2, 3);
    CHECK(r.empty());
    r.insert(0, 2);
    r.insert(1, 0);
    CHECK(r.contains(0, 2));
    CHECK_FALSE(r.contains(0, 0));
    CHECK_FALSE(r.is_correspondence());
    r.insert(0, 1);
    CHECK(r.is_correspondence());
    CHECK(r.size() == 3);
    CHECK(r.pairs() == Pairs{{0, 1}, {0, 2}, {1, 0}});
    CHECK(Relation::from_word(2, 3, r.word()) == r);
    r.erase(0, 1);
    CHECK_FALSE(r.is_correspondence());
    CHECK_THROWS_AS(r.insert(2, 0), StructuralError);
}

TEST_CASE("correspondence requires totality", "[relation]") {
    CHECK_THROWS_AS(Correspondence::from_pairs(2, 2, Pairs{{0, 0}}), DomainError);
    CHECK_NOTHROW(Correspondence::from_pairs(2, 2, Pairs{{0, 0}, {1, 1}}));
    const std::vector<std::size_t> perm{2, 0, 1};
    const auto b = Correspondence::bijection(perm);
    CHECK(b.pairs() == Pairs{{0, 2}, {1, 0}, {2, 1}});
}

TEST_CASE("distortion examples", "[distortion]") {
    const auto one = FiniteMetricSpace{};
    CHECK(distortion(one, one, Correspondence::from_pairs(1, 1, Pairs{{0, 0}})) == 0.0);

    const auto x = ghtest::path3();
    const std::vector<std::size_t> id{0, 1, 2};
    CHECK(distortion(x, x, Correspondence::bijection(id)) == 0.0);

    const auto X = ghtest::line({2, 4, 8, 16});
    const auto Y = ghtest::line({2, 3, 4, 5, 8, 9, 16, 17});
    // 2^k is sent to 2^k and 2^k + 1
    const auto R = Correspondence::from_pairs(4, 8, Pairs{{0, 0}, {0, 1}, {1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 6}, {3, 7}});
    CHECK(distortion(X, Y, R) == 1.0);
}

TEST_CASE("distortion rejects mismatched or empty input", "[distortion]") {
    const auto x = ghtest::path3();
    CHECK_THROWS_AS(distortion(x, x, Relation(2, 3)), StructuralError);
    CHECK_THROWS_AS(distortion(x, x, Relation(3, 3)), DomainError);
}

TEST_CASE("image and preimage", "[relation]") {
    const auto r = Relation::from_pairs(2, 3, Pairs{{0, 1}, {0, 2}, {1, 0}});
    const std::vector<std::size_t> zero{0}, all{0, 1};
    CHECK(image(r, zero) == std::vector<std::size_t>{1, 2});
    CHECK(preimage(r, zero) == std::vector<std::size_t>{1});
    CHECK(image(r, all) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("correspondence counts match inclusion-exclusion", "[enumerate]") {
    // frozen from an independent brute force over all p*q bit words
    CHECK(count_all(1, 1) == 1);
    CHECK(count_all(1, 3) == 1);
    CHECK(count_all(2, 2) == 7);
    CHECK(count_all(2, 3) == 25);
    CHECK(count_all(3, 2) == 25);
    CHECK(count_all(3, 3) == 265);
    CHECK_THROWS_AS(enumerate_correspondences(5, 7), ResourceError);
}

TEST_CASE("enumeration order is increasing in the bit word", "[enumerate]") {
    auto s = enumerate_correspondences(2, 3);
    std::uint64_t prev = 0;
    bool first = true;
    while (auto c = s.next()) {
        const auto w = c->relation().word();
        if (!first) CHECK(w > prev);
        prev = w;
        first = false;
    }
}

TEST_CASE("star correspondence counts", "[enumerate][star]") {
    CHECK(count_stars(1, 1) == 1);
    CHECK(count_stars(2, 1) == 1);
    CHECK(count_stars(2, 2) == 2);
    CHECK(count_stars(2, 3) == 6);
    CHECK(count_stars(3, 3) == 15);
    CHECK_THROWS_AS(enumerate_star_correspondences(9, 2), ResourceError);
}

TEST_CASE("star stream is the star-filtered full stream", "[enumerate][star]") {
    for (std::size_t p = 1; p <= 4; ++p)
        for (std::size_t q = 1; q <= 4; ++q) {
            if (p * q > kOracleMaxCells) continue;
            std::vector<std::uint64_t> filtered, streamed;
            auto all = enumerate_correspondences(p, q);
            while (auto c = all.next())
                if (c->relation().is_star()) filtered.push_back(c->relation().word());
            auto st = enumerate_star_correspondences(p, q);
            while (auto c = st.next()) streamed.push_back(c->relation().word());
            CHECK(filtered == streamed);
        }
}

TEST_CASE("every correspondence contains a star one", "[enumerate][star]") {
    auto all = enumerate_correspondences(3, 3);
    std::vector<Relation> stars;
    auto st = enumerate_star_correspondences(3, 3);
    while (auto c = st.next()) stars.push_back(c->relation());
    while (auto c = all.next()) {
        const auto w = c->relation().word();
        bool covered = false;
        for (const auto& s : stars) covered = covered || (s.word() & ~w) == 0;
        CHECK(covered);
    }
}

TEST_CASE("the minimum over star correspondences is the global minimum", "[star][property]") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = ghtest::random_space(1 + rng.index(4), rng);
        const auto y = ghtest::random_space(1 + rng.index(4), rng);
        double full = 1e300, star = 1e300;
        auto all = enumerate_correspondences(x.size(), y.size());
        while (auto c = all.next()) full = std::min(full, distortion(x, y, *c));
        auto st = enumerate_star_correspondences(x.size(), y.size());
        while (auto c = st.next()) star = std::min(star, distortion(x, y, *c));
        CHECK(full == star);
    }
}

TEST_CASE("for_each_correspondence_below is exhaustive", "[enumerate]") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = ghtest::random_space(3, rng), y = ghtest::random_space(3, rng);
        const double threshold = rng.uniform(0.2, 1.5);
        std::set<std::uint64_t> expected, got;
        auto all = enumerate_correspondences(3, 3);
        while (auto c = all.next())
            if (distortion(x, y, *c) < threshold) expected.insert(c->relation().word());
        const auto n = for_each_correspondence_below(x, y, threshold, [&](const Correspondence& c, double d) {
            CHECK(d == distortion(x, y, c));
            got.insert(c.relation().word());
        });
        CHECK(n == expected.size());
        CHECK(got == expected);
    }
}

TEST_CASE("minimal bijection distortion", "[bijection]") {
    const auto x = ghtest::path3();
    REQUIRE(min_bijection_distortion(x, x));
    CHECK(min_bijection_distortion(x, x)->distortion == 0.0);
    CHECK_FALSE(min_bijection_distortion(x, FiniteMetricSpace{}).has_value());

    const auto X = ghtest::line({2, 4, 8, 16});
    const auto Y = ghtest::line({2, 3, 16, 17});
    const auto b = min_bijection_distortion(X, Y);
    REQUIRE(b);
    CHECK(b->distortion == 9.0);  // frozen: exhaustive search over the 24 bijections
    CHECK(b->distortion > 2 * gh_oracle(X, Y).distance);
}

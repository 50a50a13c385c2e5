#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "gh/io.hpp"
#include "support.hpp"

using namespace gh;
using io::json;

TEST_CASE("space JSON round trip", "[io]") {
    const auto x = FiniteMetricSpace::from_rows({{0, 1.25, 2}, {1.25, 0, 1}, {2, 1, 0}}, {"a", "b", "c"});
    const auto j = io::to_json(x);
    CHECK(j["n"] == 3);
    CHECK(io::space_from_json(io::parse_json(j.dump())) == x);
}

TEST_CASE("space JSON errors", "[io]") {
    CHECK_THROWS_AS(io::space_from_json(json::array()), StructuralError);
    CHECK_THROWS_AS(io::space_from_json(json{{"n", 2}}), StructuralError);
    CHECK_THROWS_AS(io::space_from_json(json{{"n", 3}, {"d", {{0, 1}, {1, 0}}}}), StructuralError);
    CHECK_THROWS_AS(io::space_from_json(json{{"d", {{0, "x"}, {1, 0}}}}), StructuralError);
    CHECK_THROWS_AS(io::space_from_json(json{{"d", {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}}}), DomainError);
}

TEST_CASE("malformed JSON reports line and column", "[io]") {
    try {
        io::parse_json("{\n  \"n\": 2,\n  \"d\": [[0, 1], [1, 0]\n}", "bad.json");
        FAIL("expected a parse error");
    } catch (const StructuralError& e) {
        CHECK(std::string(e.what()).rfind("bad.json:4:", 0) == 0);
    }
}

TEST_CASE("CSV reader", "[io]") {
    const auto x = io::space_from_csv("0, 1, 2\n1,0,1\r\n2,1,0\n\n");
    CHECK(x == ghtest::path3());
    CHECK(io::space_from_csv(io::to_csv(x)) == x);
    try {
        io::space_from_csv("0,1\n1,zero\n", {}, "m.csv");
        FAIL("expected a parse error");
    } catch (const StructuralError& e) {
        CHECK(std::string(e.what()).rfind("m.csv:2:2:", 0) == 0);
    }
    CHECK_THROWS_AS(io::space_from_csv("0,1\n1\n"), StructuralError);
}

TEST_CASE("file loading dispatches on the extension", "[io]") {
    const std::filesystem::path dir = GH_TEST_TMP;
    std::filesystem::create_directories(dir);
    io::write_file((dir / "p.csv").string(), "0,1\n1,0\n");
    io::write_file((dir / "p.json").string(), R"({"n": 2, "d": [[0, 1], [1, 0]]})");
    CHECK(io::load_space((dir / "p.csv").string()) == io::load_space((dir / "p.json").string()));
    CHECK_THROWS_AS(io::load_space((dir / "missing.json").string()), StructuralError);
}

TEST_CASE("correspondence and vector JSON", "[io]") {
    const auto r = Correspondence::from_pairs(2, 2, std::vector<IndexPair>{{1, 1}, {0, 0}, {0, 1}});
    const auto j = io::to_json(r);
    CHECK(j["pairs"] == json::parse("[[0,0],[0,1],[1,1]]"));
    CHECK(io::correspondence_from_json(j) == r);
    CHECK_THROWS_AS(io::correspondence_from_json(json::parse(R"({"p":2,"q":2,"pairs":[[0,0]]})")), DomainError);

    const DistanceVector v(3, {1, 2, 1});
    CHECK(io::distance_vector_from_json(io::to_json(v)) == v);
}

TEST_CASE("report JSON carries the documented keys", "[io]") {
    const auto g = gh_exact(ghtest::path3(), ghtest::line({0, 1}));
    const auto jg = io::to_json(g, true);
    for (const char* k : {"distance", "witness", "nodes_explored", "method"}) CHECK(jg.contains(k));

    const auto jr = io::to_json(characteristics(FiniteMetricSpace::one_distance(3)));
    CHECK(jr["e"] == 0.0);
    CHECK(io::to_json(characteristics(FiniteMetricSpace::one_distance(9)))["e"].is_null());

    const auto vr = io::to_json(verify_interiority(perturbed_generic(3, 1).space, 10, 1));
    for (const char* k : {"pass", "max_deviation", "samples", "epsilon", "counterexamples"}) CHECK(vr.contains(k));
}

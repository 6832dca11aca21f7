#include <doctest.h>

#include "mqunits/json_io.hpp"
#include "mqunits/survey.hpp"

using namespace mqunits;

TEST_CASE("find_triples") {
    auto list = find_triples(2, 100, 5);
    REQUIRE(!list.triples.empty());
    CHECK(list.triples[0] == Triple{5, 7, 3});
    CHECK(!list.shortfall);
    for (const auto& t : list.triples) {
        CHECK(legendre(t[0], t[1]) == -1);
        CHECK(legendre(t[0], t[2]) == -1);
        CHECK(legendre(t[2], t[1]) == -1);
        CHECK(mod_long(t[0], 8) == 5);
        CHECK(mod_long(t[1], 8) == 7);
        CHECK(mod_long(t[2], 8) == 3);
    }
    auto one = find_triples(1, 200, 3);
    REQUIRE(one.triples.size() == 3);
    CHECK(one.triples[0] == Triple{5, 31, 19});
    for (const auto& t : one.triples) CHECK(legendre(t[0], t[1]) == 1);
    // golden: the first case-1 triple below 100
    auto first = find_triples(1, 100, 1);
    REQUIRE(first.triples.size() == 1);
    CHECK(first.triples[0] == Triple{5, 31, 19});

    CHECK(find_triples(1, 20, 5).shortfall);
    CHECK_THROWS_AS(find_triples(3, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(find_triples(1, 100, 0), std::invalid_argument);
}

TEST_CASE("classify_case") {
    CHECK(classify_case(5, 7, 3) == 2);
    CHECK(classify_case(5, 31, 19) == 1);
    CHECK_THROWS_AS(classify_case(5, 7, 11), HypothesisError);  // mixed symbols
    CHECK_THROWS_AS(classify_case(4, 7, 3), HypothesisError);
    CHECK_THROWS_AS(classify_case(13, 7, 11), HypothesisError); // 13=5, 11=3 but symbols mixed
    CHECK_THROWS_AS(classify_case(3, 7, 5), HypothesisError);   // congruences swapped
}

TEST_CASE("verify_triple on (5,7,3)") {
    TripleReport rep = verify_triple(5, 7, 3, {1});
    CHECK(rep.all_pass);
    CHECK(rep.failing_stage.empty());
    CHECK(rep.case_label == 2);
    CHECK(rep.index_log2 == 5);
    CHECK(rep.index_expected == 5);
    CHECK(rep.h2_L_plus == 2);
    CHECK(rep.quad_pass);
    REQUIRE(rep.quad.size() == 7);
    CHECK(rep.quad[3].unit.denom == 2);  // eps_21 is half-integral
    CHECK(rep.fourth_root_count == 0);
    CHECK(rep.unit_system_match);
    CHECK(rep.norm_table_pass);
    CHECK(rep.norm_table.size() == 36);
    CHECK(rep.rank_check.pass);
    CHECK(rep.lemma_pass);
    REQUIRE(rep.cm_outcomes.size() == 1);
    CHECK(rep.cm_outcomes[0].eta == "zeta8");
    CHECK(rep.cm_outcomes[0].matches_theorem);
    CHECK(rep.cm_outcomes[0].branch == "replaced_b0");
}

TEST_CASE("verify_triple on the smallest case-1 triple") {
    TripleReport rep = verify_triple(5, 31, 19, {1, 3});
    CHECK(rep.all_pass);
    CHECK(rep.case_label == 1);
    CHECK(rep.index_log2 == 6);
    CHECK(rep.h2_L_plus == 4);
    CHECK(rep.fourth_root_count == 1);
    CHECK(rep.fourth_root_twist == 1);  // realized class fourth_root(eps_pq^3...)
    CHECK(rep.unit_system_match);
    CHECK(rep.norm_table.size() == 42);
    CHECK(rep.norm_table_pass);
    REQUIRE(rep.cm_outcomes.size() == 2);
    CHECK(rep.cm_outcomes[0].branch == "unchanged");
    CHECK(rep.cm_outcomes[1].eta == "-1");
}

TEST_CASE("verify_triple rejects nonconforming input") {
    CHECK_THROWS_AS(verify_triple(5, 7, 11, {}), HypothesisError);
    CHECK_THROWS_AS(verify_triple(5, 7, 3, {BigInt(15)}),
                    std::invalid_argument);  // 15 shares factors with pqs
}

TEST_CASE("serial and parallel batch drivers agree") {
    auto list = find_triples(2, 100, 2);
    auto serial = verify_triples(list.triples, {1}, 1);
    auto parallel = verify_triples(list.triples, {1}, 3);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
        CHECK(to_json(serial[i]).dump(2) == to_json(parallel[i]).dump(2));
}

TEST_CASE("verify_lemma campaigns") {
    auto summary = verify_lemma("4.1", 5);
    CHECK(summary.pass);
    CHECK(summary.tested == 5);
    CHECK(summary.passed == 5);
    REQUIRE(!summary.checks.empty());
    CHECK(summary.checks[0].pair == "(5,7)");
    REQUIRE(summary.checks[0].items.size() == 2);
    CHECK(summary.checks[0].items[0].coeff_1 == 1);
    CHECK(summary.checks[0].items[0].radicand_1 == 5);

    auto excl = verify_lemma("3.3", 10);
    CHECK(excl.pass);
    CHECK(excl.tested == 10);

    auto bounded = verify_lemma("3.5", 50, 100);
    CHECK(bounded.shortfall);  // not enough pairs below 100

    CHECK_THROWS_AS(verify_lemma("9.9", 5), std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma("4.1", 0), std::invalid_argument);
}

TEST_CASE("expected lattices have the right indices") {
    for (int twist : {0, 1}) {
        auto rows = expected_unit_lattice(1, twist);
        REQUIRE(rows.size() == 7);
        // index over the seed lattice: product of exponent denominators
        // along a triangular elimination is 2^6; verified via containment.
        std::vector<std::vector<BigRat>> seeds_id(7, std::vector<BigRat>(7, 0));
        for (int i = 0; i < 7; ++i) seeds_id[i][i] = 1;
        for (const auto& row : seeds_id) {
            auto x = solve_exponents(rows, row);
            REQUIRE(x.has_value());
            for (const auto& c : *x) CHECK(c.get_den() == 1);
        }
    }
    CHECK(expected_unit_lattice(2).size() == 7);
    CHECK_THROWS_AS(expected_unit_lattice(3), std::invalid_argument);
}

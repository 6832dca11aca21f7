#include <doctest.h>

#include "mqunits/survey.hpp"
#include "mqunits/towers.hpp"

using namespace mqunits;

TEST_CASE("class number formula for 2-parts") {
    // degree 8, real: v = 3 * (4 - 1) = 9
    KurodaInput in{3, true, BigInt(64), {1, 2, 2, 2, 2, 2, 1}};
    CHECK(kuroda_h2(in) == 4);
    in.q_index = 32;
    CHECK(kuroda_h2(in) == 2);
    in.q_index = 1;
    in.subfield_h2 = {1, 1, 1, 1, 1, 1, 1};
    CHECK_THROWS_AS(kuroda_h2(in), std::invalid_argument);  // 1/2^9

    // degree 4, real: v = 2
    KurodaInput bi{2, true, BigInt(2), {1, 1, 2}};
    CHECK(kuroda_h2(bi) == 1);
    // degree 4, imaginary: v = (1)(0) + 2 - 1 = 1
    KurodaInput im{2, false, BigInt(1), {1, 1, 2}};
    CHECK(kuroda_h2(im) == 1);

    CHECK_THROWS_AS(kuroda_h2(KurodaInput{3, true, BigInt(3), {1, 1, 1, 1, 1, 1, 1}}),
                    std::invalid_argument);  // q not a power of 2
    CHECK_THROWS_AS(kuroda_h2(KurodaInput{3, true, BigInt(4), {1, 1}}),
                    std::invalid_argument);  // wrong list length
}

namespace {

UnitGroupDescription saturated_system(long p, long q, long s) {
    auto field = MQField::make({BigInt(2), BigInt(p * q), BigInt(p * s)});
    std::vector<MQElement> seeds;
    for (const BigInt& d : seed_radicands(p, q, s))
        seeds.push_back(embed_quad_unit(fundamental_unit(d), field));
    return saturate(seeds, seed_names());
}

}  // namespace

TEST_CASE("cm extension criterion on the smallest case-2 triple") {
    auto units = saturated_system(5, 7, 3);
    CHECK(units.index_log2 == 5);

    CMResult one = cm_unit_group(units, 1);
    CHECK(one.eta == "zeta8");
    CHECK(one.replaced);  // (2 + sqrt(2)) * eps is a square for this triple
    CHECK(one.generator_labels.size() == 7);

    CMResult eleven = cm_unit_group(units, 11);
    CHECK(eleven.eta == "-1");
    CHECK(!eleven.replaced);

    CHECK_THROWS_AS(cm_unit_group(units, 3), std::invalid_argument);   // 3 | 15
    CHECK_THROWS_AS(cm_unit_group(units, 9), std::invalid_argument);   // not squarefree
    CHECK_THROWS_AS(cm_unit_group(units, 4), std::invalid_argument);   // even
    CHECK_THROWS_AS(cm_unit_group(units, -3), std::invalid_argument);
}

TEST_CASE("cm extension criterion on the smallest case-1 triple") {
    auto units = saturated_system(5, 31, 19);
    CHECK(units.index_log2 == 6);
    CMResult one = cm_unit_group(units, 1);
    CHECK(one.eta == "zeta8");
    CHECK(!one.replaced);
    CMResult three = cm_unit_group(units, 3);
    CHECK(three.eta == "-1");
    CHECK(!three.replaced);
}

TEST_CASE("rank bound checks") {
    auto rep = rank_bound_check(5, 7, 3);
    CHECK(rep.norm_eps2 == -1);
    CHECK(rep.hilbert_minus1_p == 1);
    CHECK(rep.h2_L3 == 1);
    CHECK(rep.l3_index_log2 == 1);
    CHECK(rep.l3_subfield_h2[BigInt(2)] == 1);
    CHECK(rep.l3_subfield_h2[BigInt(21)] == 1);
    CHECK(rep.l3_subfield_h2[BigInt(42)] == 2);
    CHECK(rep.pass);

    CHECK_THROWS_AS(rank_bound_check(13, 7, 3), HypothesisError);  // (p/q) != (p/s)
    CHECK_THROWS_AS(rank_bound_check(4, 7, 3), HypothesisError);
}

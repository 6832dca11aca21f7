#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mqunits/towers.hpp"

namespace mqunits {

using Triple = std::array<BigInt, 3>;  // (p, q, s)

struct TripleList {
    std::vector<Triple> triples;
    bool shortfall = false;  // fewer than requested below the bound
};

// The `count` lexicographically smallest conforming triples with all primes
// <= prime_bound: p = 5, q = 7, s = 3 (mod 8) and the three symbols
// (p/q), (p/s), (s/q) all equal +1 (case 1) or all -1 (case 2).
TripleList find_triples(int case_label, const BigInt& prime_bound, long count);

// 1 or 2 from the three Legendre symbols; throws HypothesisError when the
// triple fits neither symbol pattern or the congruences fail.
int classify_case(const BigInt& p, const BigInt& q, const BigInt& s);

struct QuadLayerEntry {
    std::string name;  // "2", "pq", ...
    BigInt radicand;
    QuadUnit unit;
    BigInt h2_computed;
    BigInt h2_expected;
    bool match = false;
};

struct NormTableCell {
    std::string row;
    std::string column;
    std::string expected;
    std::string computed;
    bool sign_determined = true;
    bool match = false;
};

struct LemmaCheck {
    std::string lemma_id;
    std::string pair;  // "(p,q)" style
    bool pass = false;
    std::string note;
    std::vector<DecompositionReport> items;
};

struct CMOutcome {
    BigInt ell;
    std::string eta;
    std::string branch;  // "unchanged", "replaced_b0", "replaced_b1", "replaced_other"
    bool matches_theorem = false;
    std::string replacement_symbol;
};

struct TripleReport {
    BigInt p, q, s;
    int case_label = 0;
    int sym_pq = 0, sym_ps = 0, sym_sq = 0;
    std::vector<QuadLayerEntry> quad;
    bool quad_pass = false;

    unsigned index_log2 = 0;
    unsigned index_expected = 0;
    BigInt h2_L_plus;
    BigInt h2_expected;
    // Derived, not computed: the group structure follows from h2 plus the
    // rank bound; ideal class groups of the degree-8 field are out of scope.
    std::string cl2_structure;
    std::vector<std::string> unit_system;
    int fourth_root_count = 0;
    // Case 1 only: the fourth-root generator is realized as
    // fourth_root(eps_pq^(1+2b) * eps_2pq * eps_qs * eps_2qs) for a
    // triple-dependent b in {0, 1}; -1 when neither class is realized.
    int fourth_root_twist = -1;
    bool unit_system_match = false;  // saturation lattice equals the published system

    std::vector<NormTableCell> norm_table;
    bool norm_table_pass = false;

    RankCheckReport rank_check;

    std::vector<LemmaCheck> lemma_checks;
    bool lemma_pass = false;

    std::vector<CMOutcome> cm_outcomes;
    bool cm_pass = false;

    bool all_pass = false;
    std::string failing_stage;  // empty when all_pass
};

// Full pipeline for one conforming triple: quadratic units and 2-class
// numbers, decomposition rules, saturation, the class number formula, the
// relative-norm table, the rank checks, and the CM criterion for each ell.
TripleReport verify_triple(const BigInt& p, const BigInt& q, const BigInt& s,
                           const std::vector<BigInt>& ells);

// Batch driver.  jobs <= 1 runs the serial reference loop; jobs > 1 fans the
// triples out over an OpenMP worker pool.  Reports come back in input order
// either way.
std::vector<TripleReport> verify_triples(const std::vector<Triple>& triples,
                                         const std::vector<BigInt>& ells,
                                         int jobs = 1);

struct LemmaSummary {
    std::string lemma_id;
    long requested = 0;
    long tested = 0;
    long passed = 0;
    bool shortfall = false;
    bool pass = false;
    std::vector<LemmaCheck> checks;
};

// Runs a decomposition rule over the `samples` smallest conforming prime
// pairs (or squarefree radicands, for rule 3.3).  With prime_bound = 0 the
// search bound grows until enough samples exist.  jobs as in verify_triples.
LemmaSummary verify_lemma(const std::string& lemma_id, long samples,
                          const BigInt& prime_bound = 0, int jobs = 1);

// Seed layout shared by the saturation pipeline and the theorem comparisons:
// radicands in the order 2, pq, ps, qs, 2pq, 2ps, 2qs.
std::vector<BigInt> seed_radicands(const BigInt& p, const BigInt& q,
                                   const BigInt& s);
std::vector<std::string> seed_names();

// Published fundamental-system exponent vectors over the seed layout.  For
// case 1 the fourth-root entry carries the eps_pq twist exponent (1+2b)/4.
std::vector<std::vector<BigRat>> expected_unit_lattice(int case_label,
                                                       int fourth_root_twist = 0);

}  // namespace mqunits

#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqunits/mqfield.hpp"

namespace mqunits {

// Inputs to the multiquadratic class number formula
//   h(K) = q(K) * prod h(k_i) / 2^v,
// applied to 2-parts (odd parts cancel out of both the index and the product).
struct KurodaInput {
    unsigned n;                      // 2^n = field degree
    bool is_real;
    BigInt q_index;                  // power of 2
    std::vector<BigInt> subfield_h2; // 2^n - 1 entries, powers of 2
};

// Result must be a positive integral power of 2; anything else signals
// inconsistent inputs and throws.
BigInt kuroda_h2(const KurodaInput& input);

// Outcome of extending the real unit system to the CM field K(sqrt(-ell)).
// The CM field is never represented: for ell = 1 (adjoining i, so zeta8 is
// present and 2 + sqrt(2) is the root criterion multiplier) the search asks
// whether (2 + sqrt(2)) * eps is a square in the real field for some product
// eps of fundamental-system members; for ell > 1 the multiplier is ell
// itself.  On success one participating generator is replaced by the
// symbolic root sqrt(zeta8 * eps) resp. sqrt(-eps).
struct CMResult {
    BigInt ell;
    std::string eta;                 // "zeta8" when ell = 1, else "-1"
    bool replaced = false;
    int replaced_index = -1;         // index into the real fundamental system
    int epsilon_sign = 1;            // sign of the found eps
    std::vector<BigRat> epsilon_exponents;  // eps over the original seeds
    std::string replacement_symbol;  // e.g. "sqrt(zeta8*sqrt(...)*...)"
    std::vector<std::string> generator_labels;  // resulting CM system
};

CMResult cm_unit_group(const UnitGroupDescription& real_units, const BigInt& ell);

// Re-runs the two explicit norm-residue reductions from the 2-class-group
// rank bound, plus the biquadratic 2-class number of Q(sqrt(2), sqrt(qs)).
struct RankCheckReport {
    BigInt p, q, s;
    BigRat norm_eps2;                // N to Q(sqrt(qs)) of eps_2; must be -1
    int hilbert_minus1_p;            // (-1, p)_p; must be +1
    BigInt h2_L3;
    std::map<BigInt, BigInt> l3_subfield_h2;  // radicand -> h2
    unsigned l3_index_log2 = 0;
    bool pass = false;
};

RankCheckReport rank_bound_check(const BigInt& p, const BigInt& q,
                                 const BigInt& s);

}  // namespace mqunits

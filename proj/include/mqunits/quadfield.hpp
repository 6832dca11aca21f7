#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqunits/exactnum.hpp"

namespace mqunits {

struct QuadField {
    BigInt d;             // squarefree, != 0, 1
    BigInt discriminant;  // d when d = 1 mod 4, else 4d

    explicit QuadField(BigInt d_);
};

// The fundamental unit (x + y*sqrt(d)) / denom of the maximal order,
// normalized > 1.  denom = 2 can only occur for d = 1 mod 4, with x = y mod 2.
// Invariant: x^2 - d*y^2 = norm * denom^2.
struct QuadUnit {
    BigInt d;
    BigInt x;
    BigInt y;
    int denom;  // 1 or 2
    int norm;   // -1 or +1

    BigRat coord_x() const { return BigRat(x, denom); }
    BigRat coord_y() const { return BigRat(y, denom); }
};

// Maximal-order fundamental unit via the continued fraction of sqrt(d),
// refined by an exact cube-root extraction for d = 1 mod 4 (the index of
// Z[sqrt(d)]* in the maximal order's unit group is 1 or 3).
QuadUnit fundamental_unit(const BigInt& d);

// Smallest solution of x^2 - d y^2 = +-1 in integers (the Z[sqrt(d)] unit).
// Equals fundamental_unit(d) unless that unit is half-integral, in which
// case this is its cube.
QuadUnit pell_unit(const BigInt& d);

// Class number of the maximal order for a fundamental discriminant.
// D < 0: count of reduced positive-definite forms.
// D > 0: cycles of reduced indefinite forms, corrected to the wide class
//        number by the sign of N(eps_d).
BigInt class_number(const BigInt& D);

bool is_fundamental_discriminant(const BigInt& D);

// Largest power of 2 dividing class_number of Q(sqrt(d)); d squarefree != 0,1.
BigInt two_class_number(const BigInt& d);

// The seven 2-class-number expectations for a conforming triple
// p = 5, s = 3, q = 7 (mod 8): {2:1, qs:1, pq:2, ps:2, 2pq:2, 2ps:2, 2qs:2}.
std::map<BigInt, BigInt> expected_h2(const BigInt& p, const BigInt& q,
                                     const BigInt& s);

// Built-in unit-decomposition rules.  Each rule fixes congruence classes mod 8
// for a prime pair (a, b), a Legendre-symbol hypothesis, and asserts, for both
// the odd radicand d = ab and the even radicand d = 2ab, which factorization
// pattern x +- 1 = m*t^2 the Pell unit obeys and the resulting two-term
// square-root decomposition.
enum class DecompRule { R33, R34, R35, R36, R41, R42, R43 };

DecompRule decomp_rule_from_string(const std::string& id);
std::string to_string(DecompRule rule);

struct DecompositionReport {
    std::string lemma_id;  // "3.4" ... "4.3"
    int item;              // 1 or 2, in rule order
    BigInt d;              // radicand classified
    BigInt unit_x, unit_y; // integer coordinates of the unit used
    int unit_power;        // 1, or 3 when the fundamental unit is half-integral
    bool fundamental_is_integral;
    int system_index;      // 1-based index into the candidate pattern list
    int sign;              // +1 if the witness side is x+1, else -1
    int scaling;           // k in sqrt(k * eps) = c1*sqrt(r1) + c2*sqrt(r2)
    BigInt radicand_1, radicand_2;  // witness (p-) side first
    BigInt coeff_1, coeff_2;
    int relation_sign;     // r1*c1^2 - r2*c2^2 == relation_sign * scaling
    BigInt witness_quantity;  // the asserted perfect square
    BigInt square_witness;    // its integer square root
};

// Classifies both radicand variants of the rule for the pair (p, q)
// (conventionally (q1, q2) for rules 3.5 / 4.3).  Verifies the rule's
// asserted pattern, the excluded-square constraints, the reconstruction
// (c1*sqrt(r1)+c2*sqrt(r2))^2 = scaling*eps, and the side relation, all in
// exact arithmetic.  Throws HypothesisError outside the rule's hypotheses and
// CounterexampleError if the asserted pattern does not hold.
std::vector<DecompositionReport> classify_decomposition(const BigInt& p,
                                                        const BigInt& q,
                                                        DecompRule rule);

// The four exclusions behind rule 3.3: for N(eps_d) = +1, none of
// 2(x+1), 2(x-1), 2d(x+1), 2d(x-1) is a rational square.  Coordinates may be
// half-integral; quantities are tested as exact rationals.
struct SquareExclusionReport {
    BigInt d;
    BigRat x;        // first coordinate of the fundamental unit
    bool pass;       // all four quantities are non-squares
    std::vector<BigRat> quantities;
};
SquareExclusionReport check_square_exclusions(const BigInt& d);

}  // namespace mqunits

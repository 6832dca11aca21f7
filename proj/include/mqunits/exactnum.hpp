#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace mqunits {

using BigInt = mpz_class;
using BigRat = mpq_class;

// Thrown when an intermediate integer exceeds the configured bit budget.
// Regulators of real quadratic fields can blow up; we fail fast instead of
// thrashing on multi-megabit operands.
struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A lemma/rule was invoked outside its congruence or symbol hypotheses.
struct HypothesisError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A verified identity failed to hold. This is the "potential counterexample"
// signal: it must propagate loudly, never be patched over.
struct CounterexampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Global coefficient-size guard, default 1'000'000 bits. The environment
// variable MQUNITS_BITS_LIMIT overrides the default on first use.
std::size_t bit_limit();
void set_bit_limit(std::size_t bits);
void guard_bits(const BigInt& z);
void guard_bits(const BigRat& q);

BigInt isqrt(const BigInt& n);
bool is_perfect_square(const BigInt& n);

// Deterministic Miller-Rabin over the first twelve prime bases, valid for
// n < 3.317e24. Larger inputs are rejected; desk scale never gets close.
bool is_prime(const BigInt& n);

// Euler-criterion Legendre symbol; p must be an odd prime (checked).
int legendre(const BigInt& a, const BigInt& p);

// Jacobi symbol; n must be odd and positive.
int jacobi(const BigInt& a, const BigInt& n);

// A place of Q: either the real place or a finite prime.
struct Place {
    bool infinite;
    BigInt p;

    static Place infinity() { return {true, 0}; }
    static Place at(BigInt prime) { return {false, std::move(prime)}; }
};

// Local Hilbert symbol (a, b)_v in {-1, +1} for nonzero rationals.
int hilbert_symbol(const BigRat& a, const BigRat& b, const Place& v);

struct SquarefreeDecomposition {
    BigInt squarefree_part;  // positive, squarefree
    BigInt square_factor;    // positive; |n| = squarefree_part * square_factor^2
    int sign;                // sign of the input
};

// n != 0. Trial division with a wheel up to 1e6, then Pollard rho.
SquarefreeDecomposition squarefree_decompose(const BigInt& n);
BigInt squarefree_part(const BigInt& n);

// Prime factorization of |n| as (prime, exponent) pairs, primes ascending.
std::vector<std::pair<BigInt, unsigned>> factorize(const BigInt& n);

// Exact square root of a nonnegative rational, if one exists.
std::optional<BigRat> rational_sqrt(const BigRat& q);

// Parity-safe residue helpers.
long mod_long(const BigInt& n, long m);          // value in [0, m)
BigInt mod_inverse(const BigInt& a, const BigInt& m);

}  // namespace mqunits

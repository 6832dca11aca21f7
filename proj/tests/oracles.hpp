#pragma once

// Test-side oracles, kept independent of the library paths they check:
// brute-force Pell search, the Dirichlet class number sum with a hand-rolled
// Kronecker symbol, and two non-squareness certificates for field elements.

#include <optional>
#include <random>

#include "mqunits/mqfield.hpp"

namespace mqunits::oracle {

// Minimal-u scan for the fundamental unit.  For d = 1 (mod 4) scans
// t^2 - d u^2 = +-4 (half-integral units included), otherwise +-1.
inline std::optional<QuadUnit> brute_force_unit(const BigInt& d, long window) {
    const bool wide = (mod_long(d, 4) == 1);
    for (long u = 1; u <= window; ++u) {
        BigInt du2 = d * u * u;
        if (wide) {
            for (int n : {-1, +1}) {
                BigInt t2 = du2 + 4 * n;
                if (t2 < 0 || !is_perfect_square(t2)) continue;
                BigInt t = isqrt(t2);
                if (mod_long(t, 2) == 0)
                    return QuadUnit{d, t / 2, BigInt(u) / 2, 1, n};
                return QuadUnit{d, t, u, 2, n};
            }
        } else {
            for (int n : {-1, +1}) {
                BigInt x2 = du2 + n;
                if (x2 < 0 || !is_perfect_square(x2)) continue;
                return QuadUnit{d, isqrt(x2), u, 1, n};
            }
        }
    }
    return std::nullopt;
}

// Kronecker symbol on machine integers, written independently of
// mqunits::legendre / jacobi.
inline int kronecker_int(long long a, long long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && n % 2 == 0) return 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int twos = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++twos;
    }
    if (twos % 2 == 1) {
        long long am8 = ((a % 8) + 8) % 8;
        if (am8 == 3 || am8 == 5) result = -result;
    }
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long long nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return (n == 1) ? result : 0;
}

// h(D) = w/(2|D|) * |sum_{a=1}^{|D|} (D|a) * a| for fundamental D < 0.
inline BigInt dirichlet_class_number(const BigInt& D) {
    if (D >= 0) throw std::invalid_argument("dirichlet oracle: D must be < 0");
    long long d = D.get_si();
    long long absd = -d;
    long long w = (d == -3) ? 6 : (d == -4) ? 4 : 2;
    long long sum = 0;
    for (long long a = 1; a < absd; ++a) sum += kronecker_int(d, a) * a;
    if (sum < 0) sum = -sum;
    long long num = w * sum;
    if (num % (2 * absd) != 0)
        throw std::logic_error("dirichlet oracle: non-integral result");
    return BigInt(static_cast<long>(num / (2 * absd)));
}

// Sign of sigma(u) under the real embedding fixing every sqrt positive,
// decided by exact rational interval arithmetic.  0 = undecided.
inline int embedding_sign(const MQElement& u, MQField::Sigma sigma) {
    MQElement v = galois_apply(sigma, u);
    const auto& basis = u.field()->basis();
    for (int digits = 20; digits <= 320; digits *= 2) {
        BigInt scale = 1;
        for (int i = 0; i < digits; ++i) scale *= 10;
        BigRat lo(0), hi(0);
        for (std::size_t m = 0; m < basis.size(); ++m) {
            const BigRat& c = v.coeff(m);
            if (sgn(c) == 0) continue;
            BigInt r = isqrt(basis[m] * scale * scale);
            BigRat rlo(r, scale), rhi(r + 1, scale);
            rlo.canonicalize();
            rhi.canonicalize();
            if (sgn(c) > 0) {
                lo += c * rlo;
                hi += c * rhi;
            } else {
                lo += c * rhi;
                hi += c * rlo;
            }
        }
        if (sgn(lo) > 0) return 1;
        if (sgn(hi) < 0) return -1;
    }
    return 0;
}

inline int total_signature(const MQElement& u) {
    // +1 totally positive, -1 some embedding negative, 0 undecided.
    bool negative = false;
    for (MQField::Sigma sigma = 0; sigma < u.field()->degree(); ++sigma) {
        int s = embedding_sign(u, sigma);
        if (s == 0) return 0;
        if (s < 0) negative = true;
    }
    return negative ? -1 : 1;
}

inline BigInt mod_sqrt(const BigInt& a, const BigInt& p) {
    // Tonelli-Shanks; requires legendre(a, p) = 1.
    BigInt a0 = a % p;
    if (a0 < 0) a0 += p;
    if (mod_long(p, 4) == 3) {
        BigInt e = (p + 1) / 4, r;
        mpz_powm(r.get_mpz_t(), a0.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    BigInt q = p - 1;
    unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
    BigInt z = 2;
    while (legendre(z, p) != -1) z += 1;
    BigInt m = s, c, t, r, e = (q + 1) / 2;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a0.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(r.get_mpz_t(), a0.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    while (t != 1) {
        BigInt tt = t;
        long i = 0;
        while (tt != 1) {
            tt = (tt * tt) % p;
            ++i;
        }
        BigInt b = c;
        for (long j = 0; j < m.get_si() - i - 1; ++j) b = (b * b) % p;
        m = i;
        c = (b * b) % p;
        t = (t * c) % p;
        r = (r * b) % p;
    }
    return r;
}

// Quadratic-residue obstruction at a split prime: finds an odd prime P with
// every generator a nonzero square mod P and phi(u) a non-residue, which
// certifies that u is not a square in the field.
inline bool qr_nonsquare_certificate(const MQElement& u, BigInt* prime_out) {
    const auto& gens = u.field()->radicands();
    const auto& basis = u.field()->basis();
    BigInt P = 1000003;
    for (int attempt = 0; attempt < 200; ++attempt, P = [&] {
             BigInt n;
             mpz_nextprime(n.get_mpz_t(), P.get_mpz_t());
             return n;
         }()) {
        bool usable = true;
        for (const BigInt& d : gens)
            if (d % P == 0 || legendre(d, P) != 1) usable = false;
        for (std::size_t m = 0; m < basis.size() && usable; ++m)
            if (u.coeff(m).get_den() % P == 0) usable = false;
        if (!usable) continue;

        std::vector<BigInt> root(gens.size());
        for (std::size_t i = 0; i < gens.size(); ++i)
            root[i] = mod_sqrt(gens[i], P);
        BigInt value = 0;
        for (std::size_t m = 0; m < basis.size(); ++m) {
            const BigRat& c = u.coeff(m);
            if (sgn(c) == 0) continue;
            // sqrt(basis[m]) = prod sqrt(gens) / integer cofactor.
            BigInt img = 1, cof2 = 1;
            for (std::size_t i = 0; i < gens.size(); ++i)
                if (m & (std::size_t(1) << i)) {
                    img = (img * root[i]) % P;
                    cof2 *= gens[i];
                }
            BigInt cof = isqrt(cof2 / basis[m]);
            img = (img * mod_inverse(cof % P, P)) % P;
            BigInt num = c.get_num() % P;
            if (num < 0) num += P;
            BigInt den = mod_inverse(c.get_den() % P, P);
            value = (value + num * den % P * img) % P;
        }
        if (value == 0) continue;
        if (legendre(value, P) == -1) {
            if (prime_out) *prime_out = P;
            return true;
        }
    }
    return false;
}

inline MQElement random_element(FieldPtr F, std::mt19937_64& rng,
                                int coeff_bound, int den_bound) {
    std::uniform_int_distribution<int> num(-coeff_bound, coeff_bound);
    std::uniform_int_distribution<int> den(1, den_bound);
    for (;;) {
        std::map<BigInt, BigRat> coeffs;
        for (const BigInt& b : F->basis()) {
            BigRat c(num(rng), den(rng));
            c.canonicalize();
            if (sgn(c) != 0) coeffs[b] = c;
        }
        MQElement u(F, coeffs);
        if (!u.is_zero()) return u;
    }
}

}  // namespace mqunits::oracle

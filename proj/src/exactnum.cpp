#include "mqunits/exactnum.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>

namespace mqunits {

namespace {

std::atomic<std::size_t> g_bit_limit{0};

std::size_t init_bit_limit() {
    std::size_t limit = 1'000'000;
    if (const char* env = std::getenv("MQUNITS_BITS_LIMIT")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) limit = static_cast<std::size_t>(v);
    }
    return limit;
}

}  // namespace

std::size_t bit_limit() {
    std::size_t v = g_bit_limit.load(std::memory_order_relaxed);
    if (v == 0) {
        v = init_bit_limit();
        g_bit_limit.store(v, std::memory_order_relaxed);
    }
    return v;
}

void set_bit_limit(std::size_t bits) {
    if (bits == 0) throw std::invalid_argument("bit limit must be positive");
    g_bit_limit.store(bits, std::memory_order_relaxed);
}

void guard_bits(const BigInt& z) {
    if (mpz_sizeinbase(z.get_mpz_t(), 2) > bit_limit())
        throw SizeLimitError("integer exceeds " + std::to_string(bit_limit()) +
                             " bits");
}

void guard_bits(const BigRat& q) {
    guard_bits(q.get_num());
    guard_bits(q.get_den());
}

BigInt isqrt(const BigInt& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative integer");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const BigInt& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_prime(const BigInt& n) {
    // Sorenson-Webster: the bases 2..37 are a deterministic witness set
    // below 3,317,044,064,679,887,385,961,981.
    static const BigInt kBound("3317044064679887385961981");
    if (n >= kBound)
        throw std::invalid_argument("primality test limited to n < 3.317e24");
    if (n < 2) return false;
    static const std::array<long, 12> kBases = {2,  3,  5,  7,  11, 13,
                                                17, 19, 23, 29, 31, 37};
    for (long b : kBases) {
        if (n == b) return true;
        if (n % b == 0) return false;
    }
    BigInt d = n - 1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
    BigInt nm1 = n - 1;
    for (long b : kBases) {
        BigInt base = b;
        BigInt x;
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == nm1) continue;
        bool witness = true;
        for (unsigned long i = 1; i < r; ++i) {
            x = (x * x) % n;
            if (x == nm1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

int legendre(const BigInt& a, const BigInt& p) {
    if (p <= 2 || p % 2 == 0 || !is_prime(p))
        throw std::invalid_argument("legendre: modulus must be an odd prime");
    BigInt e = (p - 1) / 2;
    BigInt r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    if (r == 0) return 0;
    if (r == 1) return 1;
    if (r == p - 1) return -1;
    throw std::logic_error("legendre: Euler criterion failed (composite p?)");
}

int jacobi(const BigInt& a, const BigInt& n) {
    if (n < 1 || n % 2 == 0)
        throw std::invalid_argument("jacobi: modulus must be odd and positive");
    return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

namespace {

// p-adic valuation of a nonzero rational, plus the unit part.
long rational_valuation(const BigRat& x, const BigInt& p, BigRat* unit) {
    BigInt num = x.get_num();
    BigInt den = x.get_den();
    long v = 0;
    while (num % p == 0) {
        num /= p;
        ++v;
    }
    while (den % p == 0) {
        den /= p;
        --v;
    }
    if (unit) {
        *unit = BigRat(num, den);
        unit->canonicalize();
    }
    return v;
}

// Residue of a p-adically integral unit rational modulo m (m = p or 8).
BigInt unit_residue(const BigRat& u, const BigInt& m) {
    BigInt num = u.get_num() % m;
    if (num < 0) num += m;
    BigInt den = u.get_den() % m;
    BigInt inv = mod_inverse(den, m);
    return (num * inv) % m;
}

int neg_one_pow(const BigInt& e) { return mpz_odd_p(e.get_mpz_t()) ? -1 : 1; }
int neg_one_pow(long e) { return (e % 2 != 0) ? -1 : 1; }

}  // namespace

int hilbert_symbol(const BigRat& a, const BigRat& b, const Place& v) {
    if (sgn(a) == 0 || sgn(b) == 0)
        throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
    if (v.infinite) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;

    const BigInt& p = v.p;
    if (!is_prime(p)) throw std::invalid_argument("hilbert_symbol: place must be prime");

    BigRat u, w;
    long alpha = rational_valuation(a, p, &u);
    long beta = rational_valuation(b, p, &w);

    if (p == 2) {
        BigInt eight = 8;
        BigInt u8 = unit_residue(u, eight);
        BigInt w8 = unit_residue(w, eight);
        long eps_u = (u8 % 4 == 3) ? 1 : 0;           // (u-1)/2 mod 2
        long eps_w = (w8 % 4 == 3) ? 1 : 0;
        long om_u = (u8 == 3 || u8 == 5) ? 1 : 0;     // (u^2-1)/8 mod 2
        long om_w = (w8 == 3 || w8 == 5) ? 1 : 0;
        return neg_one_pow(eps_u * eps_w + alpha * om_w + beta * om_u);
    }

    BigInt up = unit_residue(u, p);
    BigInt wp = unit_residue(w, p);
    int leg_u = legendre(up, p);
    int leg_w = legendre(wp, p);
    int sign = neg_one_pow((alpha % 2) * (beta % 2) * ((p - 1) / 2));
    if (beta % 2 != 0) sign *= leg_u;
    if (alpha % 2 != 0) sign *= leg_w;
    return sign;
}

namespace {

BigInt pollard_rho(const BigInt& n) {
    // Brent variant with deterministic parameter sweep.
    for (long c = 1;; ++c) {
        BigInt x = 2, y = 2, d = 1;
        long power = 1, lam = 0;
        y = (y * y + c) % n;
        while (d == 1) {
            if (lam == power) {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = (y * y + c) % n;
            ++lam;
            BigInt diff = x - y;
            if (diff < 0) diff = -diff;
            if (diff == 0) break;  // cycle without factor; bump c
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_into(BigInt n, std::vector<std::pair<BigInt, unsigned>>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    BigInt d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<BigInt, unsigned>> factorize(const BigInt& n_in) {
    if (n_in == 0) throw std::invalid_argument("factorize: zero input");
    BigInt n = abs(n_in);
    std::vector<std::pair<BigInt, unsigned>> factors;
    auto push = [&](const BigInt& p, unsigned e) {
        factors.emplace_back(p, e);
    };
    for (long p : {2L, 3L, 5L}) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) push(p, e);
    }
    // mod-30 wheel
    static const std::array<long, 8> kSteps = {4, 2, 4, 2, 4, 6, 2, 6};
    long p = 7;
    std::size_t step = 0;
    while (p <= 1'000'000 && n > 1) {
        if (BigInt(p) * p > n) break;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) push(p, e);
        p += kSteps[step];
        step = (step + 1) % kSteps.size();
    }
    if (n > 1) {
        if (BigInt(p) * p > n) {
            push(n, 1);
        } else {
            std::vector<std::pair<BigInt, unsigned>> rest;
            factor_into(n, rest);
            std::sort(rest.begin(), rest.end());
            for (std::size_t i = 0; i < rest.size();) {
                std::size_t j = i;
                unsigned e = 0;
                while (j < rest.size() && rest[j].first == rest[i].first) {
                    e += rest[j].second;
                    ++j;
                }
                push(rest[i].first, e);
                i = j;
            }
        }
    }
    return factors;
}

SquarefreeDecomposition squarefree_decompose(const BigInt& n) {
    if (n == 0) throw std::invalid_argument("squarefree_decompose: zero input");
    SquarefreeDecomposition r{1, 1, sgn(n) < 0 ? -1 : 1};
    for (const auto& [p, e] : factorize(n)) {
        if (e % 2 == 1) r.squarefree_part *= p;
        for (unsigned i = 0; i < e / 2; ++i) r.square_factor *= p;
    }
    return r;
}

BigInt squarefree_part(const BigInt& n) {
    return squarefree_decompose(n).squarefree_part;
}

std::optional<BigRat> rational_sqrt(const BigRat& q) {
    if (sgn(q) < 0)
        throw std::invalid_argument("rational_sqrt: negative input");
    const BigInt& num = q.get_num();
    const BigInt& den = q.get_den();
    if (!is_perfect_square(num) || !is_perfect_square(den)) return std::nullopt;
    BigRat r(isqrt(num), isqrt(den));
    r.canonicalize();
    return r;
}

long mod_long(const BigInt& n, long m) {
    BigInt r = n % m;
    if (r < 0) r += m;
    return r.get_si();
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::invalid_argument("mod_inverse: not invertible");
    return r;
}

}  // namespace mqunits

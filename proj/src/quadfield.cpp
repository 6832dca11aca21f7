#include "mqunits/quadfield.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace mqunits {

namespace {

void require_squarefree(const BigInt& d, const char* who) {
    if (d == 0 || d == 1)
        throw std::invalid_argument(std::string(who) + ": radicand 0 or 1");
    if (squarefree_part(abs(d)) != abs(d))
        throw std::invalid_argument(std::string(who) + ": radicand not squarefree");
}

}  // namespace

QuadField::QuadField(BigInt d_) : d(std::move(d_)) {
    require_squarefree(d, "QuadField");
    discriminant = (mod_long(d, 4) == 1) ? d : 4 * d;
}

QuadUnit pell_unit(const BigInt& d) {
    if (d <= 1) throw std::invalid_argument("pell_unit: d must be > 1");
    require_squarefree(d, "pell_unit");

    // Continued fraction of sqrt(d): P,Q recurrences with convergents.
    // At the end of the period (Q_k = 1, k >= 1) the previous convergent
    // solves x^2 - d y^2 = (-1)^k.
    const BigInt a0 = isqrt(d);
    BigInt P = 0, Q = 1, a = a0;    // a is the partial quotient entering step k
    BigInt p_prev = 1, p_cur = a0;  // p_{-1}, p_0
    BigInt q_prev = 0, q_cur = 1;
    long k = 0;
    for (;;) {
        ++k;
        P = a * Q - P;
        Q = (d - P * P) / Q;
        if (Q == 1) break;
        a = (a0 + P) / Q;
        BigInt p_next = a * p_cur + p_prev;
        BigInt q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        p_cur = p_next;
        q_prev = q_cur;
        q_cur = q_next;
        guard_bits(p_cur);
    }
    int norm = (k % 2 == 0) ? 1 : -1;
    QuadUnit u{d, p_cur, q_cur, 1, norm};
    if (u.x * u.x - d * u.y * u.y != norm)
        throw std::logic_error("pell_unit: convergent does not solve Pell");
    return u;
}

QuadUnit fundamental_unit(const BigInt& d) {
    QuadUnit pell = pell_unit(d);
    if (mod_long(d, 4) != 1) return pell;

    // For d = 1 (mod 4) the maximal order may contain a half-integral unit u
    // with u^3 = pell.  Trace gives x^3 - 3*n*x = 2*pell.x for x = 2*Re(u).
    const BigInt target = 2 * pell.x;
    BigInt root;
    mpz_root(root.get_mpz_t(), target.get_mpz_t(), 3);
    for (BigInt x = root - 1; x <= root + 2; ++x) {
        if (x < 1) continue;
        if (x * x * x - 3 * pell.norm * x != target) continue;
        BigInt y2_num = x * x - 4 * pell.norm;
        if (y2_num % d != 0) continue;
        BigInt y2 = y2_num / d;
        if (!is_perfect_square(y2)) continue;
        BigInt y = isqrt(y2);
        if (mod_long(x, 2) != mod_long(y, 2))
            throw std::logic_error("fundamental_unit: parity mismatch in cube root");
        if (mod_long(x, 2) == 0)
            throw std::logic_error("fundamental_unit: cube root already integral");
        return QuadUnit{d, x, y, 2, pell.norm};
    }
    return pell;
}

bool is_fundamental_discriminant(const BigInt& D) {
    if (D == 0 || D == 1) return false;
    long r = mod_long(D, 4);
    if (r == 1) return squarefree_part(abs(D)) == abs(D);
    if (r != 0) return false;
    BigInt m = D / 4;
    long rm = mod_long(m, 4);
    return (rm == 2 || rm == 3) && squarefree_part(abs(m)) == abs(m);
}

namespace {

// Reduced-form counting is done in 64-bit arithmetic; the desk-scale
// discriminants here are a few million at most.
constexpr std::int64_t kMaxFormDisc = std::int64_t(1) << 40;

BigInt count_reduced_definite(std::int64_t absD) {
    // (a,b,c) with b^2 - 4ac = D < 0, -a < b <= a <= c, b >= 0 when a == c.
    std::int64_t count = 0;
    for (std::int64_t a = 1; 3 * a * a <= absD; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b + absD;
            if (num % (4 * a) != 0) continue;
            std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            ++count;
        }
    }
    return count;
}

struct IndefForm {
    std::int64_t a, b, c;
    bool operator<(const IndefForm& o) const {
        return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
    }
    bool operator==(const IndefForm& o) const {
        return a == o.a && b == o.b && c == o.c;
    }
};

// Reduced indefinite form: 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b.
// With s = floor(sqrt(D)) and D not a square these are exactly the integer
// conditions b <= s, 2|a| + b > s, 2|a| - b <= s; no squaring, no overflow.
bool indef_reduced(std::int64_t s, std::int64_t a, std::int64_t b) {
    if (b <= 0 || b > s) return false;
    std::int64_t t = 2 * (a < 0 ? -a : a);
    return t + b > s && t - b <= s;
}

IndefForm rho_step(std::int64_t D, std::int64_t s, const IndefForm& f) {
    std::int64_t c = f.c;
    std::int64_t twoc = 2 * (c < 0 ? -c : c);
    std::int64_t r = s - ((s + f.b) % twoc + twoc) % twoc;
    std::int64_t cnew = (r * r - D) / (4 * c);
    return IndefForm{c, r, cnew};
}

BigInt count_indefinite_cycles(std::int64_t D) {
    const std::int64_t s = static_cast<std::int64_t>(
        isqrt(BigInt(D)).get_si());
    std::set<IndefForm> forms;
    for (std::int64_t b = (D % 2 == 0) ? 2 : 1; b <= s; b += 2) {
        std::int64_t N = (D - b * b) / 4;  // = -a*c > 0
        for (std::int64_t a0 = 1; a0 * a0 <= N; ++a0) {
            if (N % a0 != 0) continue;
            for (std::int64_t a : {a0, N / a0}) {
                if (!indef_reduced(s, a, b)) continue;
                forms.insert(IndefForm{a, b, -N / a});
                forms.insert(IndefForm{-a, b, N / a});
                if (a0 == N / a0) break;
            }
        }
    }
    std::int64_t cycles = 0;
    std::set<IndefForm> seen;
    for (const auto& start : forms) {
        if (seen.count(start)) continue;
        ++cycles;
        IndefForm f = start;
        do {
            if (!forms.count(f))
                throw std::logic_error("form cycle left the reduced set");
            seen.insert(f);
            f = rho_step(D, s, f);
        } while (!(f == start));
    }
    return cycles;
}

}  // namespace

BigInt class_number(const BigInt& D) {
    if (!is_fundamental_discriminant(D))
        throw std::invalid_argument("class_number: discriminant not fundamental");
    if (abs(D) > kMaxFormDisc)
        throw SizeLimitError("class_number: discriminant too large for the form enumerator");
    if (D < 0) return count_reduced_definite(BigInt(-D).get_si());

    BigInt narrow = count_indefinite_cycles(D.get_si());
    BigInt d = (mod_long(D, 4) == 1) ? D : D / 4;
    if (fundamental_unit(d).norm == -1) return narrow;
    if (mod_long(narrow, 2) != 0)
        throw std::logic_error("class_number: odd narrow count with norm +1");
    return narrow / 2;
}

BigInt two_class_number(const BigInt& d) {
    require_squarefree(d, "two_class_number");
    BigInt D = (mod_long(d, 4) == 1) ? d : 4 * d;
    BigInt h = class_number(D);
    BigInt two_part = 1;
    while (mod_long(h, 2) == 0) {
        h /= 2;
        two_part *= 2;
    }
    return two_part;
}

std::map<BigInt, BigInt> expected_h2(const BigInt& p, const BigInt& q,
                                     const BigInt& s) {
    if (!is_prime(p) || !is_prime(q) || !is_prime(s) || p == q || q == s ||
        p == s)
        throw HypothesisError("expected_h2: p, q, s must be distinct primes");
    if (mod_long(p, 8) != 5 || mod_long(q, 8) != 7 || mod_long(s, 8) != 3)
        throw HypothesisError("expected_h2: need p=5, q=7, s=3 (mod 8)");
    return {
        {BigInt(2), BigInt(1)},   {q * s, BigInt(1)},     {p * q, BigInt(2)},
        {p * s, BigInt(2)},       {2 * p * q, BigInt(2)}, {2 * p * s, BigInt(2)},
        {2 * q * s, BigInt(2)},
    };
}

DecompRule decomp_rule_from_string(const std::string& id) {
    if (id == "3.3") return DecompRule::R33;
    if (id == "3.4") return DecompRule::R34;
    if (id == "3.5") return DecompRule::R35;
    if (id == "3.6") return DecompRule::R36;
    if (id == "4.1") return DecompRule::R41;
    if (id == "4.2") return DecompRule::R42;
    if (id == "4.3") return DecompRule::R43;
    throw std::invalid_argument("unknown decomposition rule id: " + id);
}

std::string to_string(DecompRule rule) {
    switch (rule) {
        case DecompRule::R33: return "3.3";
        case DecompRule::R34: return "3.4";
        case DecompRule::R35: return "3.5";
        case DecompRule::R36: return "3.6";
        case DecompRule::R41: return "4.1";
        case DecompRule::R42: return "4.2";
        case DecompRule::R43: return "4.3";
    }
    throw std::logic_error("unreachable");
}

namespace {

struct RuleHypotheses {
    long mod_a;       // congruence class of the first prime mod 8
    long mod_b;       // congruence class of the second prime mod 8
    bool symbol_b_over_a;  // which Legendre symbol the rule constrains
    int symbol;
};

RuleHypotheses rule_hypotheses(DecompRule rule) {
    switch (rule) {
        case DecompRule::R34: return {5, 3, false, 1};
        case DecompRule::R35: return {7, 3, true, 1};
        case DecompRule::R36: return {5, 7, false, 1};
        case DecompRule::R41: return {5, 7, false, -1};
        case DecompRule::R42: return {5, 3, false, -1};
        case DecompRule::R43: return {7, 3, true, -1};
        case DecompRule::R33:
            throw std::invalid_argument(
                "rule 3.3 has no decomposition; use check_square_exclusions");
    }
    throw std::logic_error("unreachable");
}

struct ItemSpec {
    bool even_radicand;  // d = 2ab rather than ab
    // Expected squarefree parts of x+1 and x-1, as multiples of a, b, 2a, 2b,
    // pq, ...; encoded as coefficient times which prime.
    BigInt m_plus, m_minus;
};

std::vector<ItemSpec> rule_items(DecompRule rule, const BigInt& a,
                                 const BigInt& b) {
    switch (rule) {
        case DecompRule::R34:
            return {{true, 2 * b, a}, {false, 2 * a, 2 * b}};
        case DecompRule::R35:
            return {{false, 2 * b, 2 * a}, {true, b, 2 * a}};
        case DecompRule::R36:
            return {{true, a, 2 * b}, {false, 2 * a, 2 * b}};
        case DecompRule::R41:
            return {{false, b, a}, {true, b, 2 * a}};
        case DecompRule::R42:
            return {{true, b, 2 * a}, {false, a, b}};
        case DecompRule::R43:
            return {{false, 2 * a, 2 * b}, {true, 2 * a, b}};
        case DecompRule::R33:
            break;
    }
    throw std::logic_error("unreachable");
}

std::string pattern_string(const BigInt& mp, const BigInt& mm) {
    std::ostringstream os;
    os << "x+1 = " << mp.get_str() << "*t^2, x-1 = " << mm.get_str() << "*t^2";
    return os.str();
}

int pattern_index(const BigInt& d, const BigInt& base_lo) {
    // Candidate patterns are the coprime factorizations {A, B} of the
    // squarefree radicand d, ordered by min(A, B).
    std::vector<BigInt> mins;
    auto primes = factorize(d);
    const std::size_t n = primes.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        BigInt A = 1;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t(1) << i)) A *= primes[i].first;
        BigInt B = d / A;
        if (A <= B) mins.push_back(A);
    }
    std::sort(mins.begin(), mins.end());
    for (std::size_t i = 0; i < mins.size(); ++i)
        if (mins[i] == base_lo) return static_cast<int>(i) + 1;
    throw std::logic_error("pattern_index: pattern not a factorization of d");
}

}  // namespace

SquareExclusionReport check_square_exclusions(const BigInt& d) {
    QuadUnit u = fundamental_unit(d);
    if (u.norm != 1)
        throw HypothesisError("check_square_exclusions: requires N(eps_d) = +1");
    SquareExclusionReport rep;
    rep.d = d;
    rep.x = u.coord_x();
    rep.pass = true;
    const std::vector<BigRat> quantities = {
        BigRat(BigRat(2) * (rep.x + 1)), BigRat(BigRat(2) * (rep.x - 1)),
        BigRat(BigRat(2 * d) * (rep.x + 1)), BigRat(BigRat(2 * d) * (rep.x - 1))};
    for (const BigRat& q : quantities) {
        rep.quantities.push_back(q);
        if (sgn(q) >= 0 && rational_sqrt(q).has_value()) rep.pass = false;
    }
    return rep;
}

std::vector<DecompositionReport> classify_decomposition(const BigInt& a,
                                                        const BigInt& b,
                                                        DecompRule rule) {
    RuleHypotheses hyp = rule_hypotheses(rule);
    if (!is_prime(a) || !is_prime(b) || a == b)
        throw HypothesisError("classify_decomposition: need two distinct primes");
    if (mod_long(a, 8) != hyp.mod_a || mod_long(b, 8) != hyp.mod_b)
        throw HypothesisError("classify_decomposition: congruence hypotheses violated for rule " +
                              to_string(rule));
    int sym = hyp.symbol_b_over_a ? legendre(b, a) : legendre(a, b);
    if (sym != hyp.symbol)
        throw HypothesisError("classify_decomposition: symbol hypothesis violated for rule " +
                              to_string(rule));

    std::vector<DecompositionReport> out;
    for (std::size_t idx = 0; idx < 2; ++idx) {
        const ItemSpec spec = rule_items(rule, a, b)[idx];
        const BigInt d = spec.even_radicand ? BigInt(2 * a * b) : BigInt(a * b);

        QuadUnit fu = fundamental_unit(d);
        QuadUnit unit = (fu.denom == 1) ? fu : pell_unit(d);
        if (fu.denom == 2) {
            // The half-integral fundamental unit cubes to the Pell unit;
            // verify the relation before classifying the integral power.
            BigInt nx = fu.x * fu.x * fu.x + 3 * fu.x * fu.y * fu.y * d;
            BigInt ny = 3 * fu.x * fu.x * fu.y + fu.y * fu.y * fu.y * d;
            if (nx != 8 * unit.x || ny != 8 * unit.y)
                throw std::logic_error("classify_decomposition: cube relation failed");
        }
        if (unit.norm != 1)
            throw CounterexampleError(
                "classify_decomposition: N(eps_" + d.get_str() +
                ") = -1 contradicts rule " + to_string(rule));

        const BigInt& x = unit.x;
        const std::vector<BigInt> excluded = {
            BigInt(2 * (x + 1)), BigInt(2 * (x - 1)),
            BigInt(2 * d * (x + 1)), BigInt(2 * d * (x - 1))};
        for (const BigInt& qty : excluded) {
            if (is_perfect_square(qty))
                throw CounterexampleError(
                    "square exclusion violated at d = " + d.get_str() + ": " +
                    qty.get_str() + " is a perfect square");
        }

        // With N(eps) = +1 the squarefree part of x +- 1 divides 2d: every
        // odd-power prime of (x+1)(x-1) = d y^2 divides d or 2.  Scanning the
        // eight squarefree divisors built from {2, a, b} avoids factoring the
        // coordinates, which grow to hundreds of digits.
        auto side_pattern = [&](const BigInt& w) -> std::pair<BigInt, BigInt> {
            for (unsigned mask = 0; mask < 8; ++mask) {
                BigInt m = 1;
                if (mask & 1) m *= 2;
                if (mask & 2) m *= a;
                if (mask & 4) m *= b;
                if (w % m == 0 && is_perfect_square(w / m))
                    return {m, isqrt(w / m)};
            }
            throw CounterexampleError(
                "coordinate pattern escapes the divisors of 2d at d = " +
                d.get_str());
        };
        const auto [m_plus, t_plus] = side_pattern(x + 1);
        const auto [m_minus, t_minus] = side_pattern(x - 1);
        if (m_plus != spec.m_plus || m_minus != spec.m_minus)
            throw CounterexampleError(
                "rule " + to_string(rule) + " at d = " + d.get_str() +
                ": asserted pattern " +
                pattern_string(spec.m_plus, spec.m_minus) + " but found " +
                pattern_string(m_plus, m_minus));

        const BigInt mm = m_plus * m_minus;
        int scaling;
        BigInt r_plus, r_minus;
        if (mm == d) {
            scaling = 2;
            r_plus = m_plus;
            r_minus = m_minus;
        } else if (mm == 4 * d) {
            scaling = 1;
            r_plus = m_plus / 2;
            r_minus = m_minus / 2;
        } else {
            throw std::logic_error("classify_decomposition: bad pattern product");
        }

        DecompositionReport rep;
        rep.lemma_id = to_string(rule);
        rep.item = static_cast<int>(idx) + 1;
        rep.d = d;
        rep.unit_x = x;
        rep.unit_y = unit.y;
        rep.unit_power = (fu.denom == 1) ? 1 : 3;
        rep.fundamental_is_integral = (fu.denom == 1);
        rep.scaling = scaling;

        const bool witness_on_plus = (m_plus % a == 0);
        rep.sign = witness_on_plus ? 1 : -1;
        if (witness_on_plus) {
            rep.radicand_1 = r_plus;
            rep.coeff_1 = t_plus;
            rep.radicand_2 = r_minus;
            rep.coeff_2 = t_minus;
            rep.relation_sign = 1;
            rep.witness_quantity = m_plus * (x + 1);
            rep.square_witness = m_plus * t_plus;
        } else {
            if (m_minus % a != 0)
                throw std::logic_error("classify_decomposition: witness side lost");
            rep.radicand_1 = r_minus;
            rep.coeff_1 = t_minus;
            rep.radicand_2 = r_plus;
            rep.coeff_2 = t_plus;
            rep.relation_sign = -1;
            rep.witness_quantity = m_minus * (x - 1);
            rep.square_witness = m_minus * t_minus;
        }
        rep.system_index = pattern_index(d, std::min(r_plus, r_minus));

        // Exact reconstruction: (c1*sqrt(r1) + c2*sqrt(r2))^2 == scaling*eps.
        if (rep.radicand_1 * rep.radicand_2 != d)
            throw std::logic_error("classify_decomposition: radicand product != d");
        if (rep.coeff_1 * rep.coeff_1 * rep.radicand_1 +
                rep.coeff_2 * rep.coeff_2 * rep.radicand_2 !=
            scaling * x)
            throw CounterexampleError("decomposition reconstruction failed (rational part)");
        if (2 * rep.coeff_1 * rep.coeff_2 != scaling * unit.y)
            throw CounterexampleError("decomposition reconstruction failed (radical part)");
        if (rep.radicand_1 * rep.coeff_1 * rep.coeff_1 -
                rep.radicand_2 * rep.coeff_2 * rep.coeff_2 !=
            rep.relation_sign * scaling)
            throw CounterexampleError("decomposition side relation failed");
        if (rep.square_witness * rep.square_witness != rep.witness_quantity)
            throw std::logic_error("classify_decomposition: witness not the square root");

        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace mqunits

#include "mqunits/towers.hpp"

#include <sstream>

namespace mqunits {

namespace {

bool is_power_of_two(const BigInt& n) {
    return n >= 1 && mpz_popcount(n.get_mpz_t()) == 1;
}

}  // namespace

BigInt kuroda_h2(const KurodaInput& input) {
    if (input.n < 1) throw std::invalid_argument("kuroda_h2: n must be >= 1");
    const std::size_t expected = (std::size_t(1) << input.n) - 1;
    if (input.subfield_h2.size() != expected)
        throw std::invalid_argument("kuroda_h2: need 2^n - 1 subfield h2 values");
    if (!is_power_of_two(input.q_index))
        throw std::invalid_argument("kuroda_h2: q must be a power of 2");
    for (const BigInt& h : input.subfield_h2)
        if (!is_power_of_two(h))
            throw std::invalid_argument("kuroda_h2: h2 values must be powers of 2");

    const long n = input.n;
    long v = input.is_real ? n * ((1L << (n - 1)) - 1)
                           : (n - 1) * ((1L << (n - 2)) - 1) + (1L << (n - 1)) - 1;
    BigInt numerator = input.q_index;
    for (const BigInt& h : input.subfield_h2) numerator *= h;
    BigInt denom = BigInt(1) << v;
    if (numerator % denom != 0)
        throw std::invalid_argument(
            "kuroda_h2: non-integral result (inconsistent inputs): " +
            numerator.get_str() + "/" + denom.get_str());
    return numerator / denom;
}

CMResult cm_unit_group(const UnitGroupDescription& real_units, const BigInt& ell) {
    if (ell < 1 || mod_long(ell, 2) == 0)
        throw std::invalid_argument("cm_unit_group: ell must be odd and positive");
    if (squarefree_part(ell) != ell)
        throw std::invalid_argument("cm_unit_group: ell must be squarefree");
    const FieldPtr& F = real_units.field;
    BigInt radicand_product = 1;
    for (const BigInt& d : F->radicands()) radicand_product *= d;
    BigInt g;
    mpz_gcd(g.get_mpz_t(), ell.get_mpz_t(), radicand_product.get_mpz_t());
    if (g != 1)
        throw std::invalid_argument(
            "cm_unit_group: ell shares a factor with the field radicands");

    CMResult result;
    result.ell = ell;
    result.eta = (ell == 1) ? "zeta8" : "-1";

    MQElement multiplier = MQElement::zero(F);
    if (ell == 1) {
        // Adjoining i to a field containing sqrt(2): zeta8 enters, zeta16
        // does not, so the criterion multiplier is 2 + sqrt(2).
        std::map<BigInt, BigRat> coeffs{{BigInt(1), BigRat(2)},
                                        {BigInt(2), BigRat(1)}};
        multiplier = MQElement(F, coeffs);
    } else {
        multiplier = MQElement(F, BigRat(ell));
    }

    const std::size_t g_count = real_units.generators.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << g_count); ++mask) {
        MQElement eps(F, BigRat(1));
        for (std::size_t i = 0; i < g_count; ++i)
            if (mask & (std::size_t(1) << i))
                eps = eps * real_units.generators[i].value;
        for (int sign = 0; sign < 2; ++sign) {
            MQElement candidate = multiplier * (sign ? -eps : eps);
            auto root = try_sqrt(candidate);
            if (!root) continue;
            if (mask == 0)
                throw CounterexampleError(
                    "cm_unit_group: the bare multiplier is a square; "
                    "torsion assumption violated");
            result.replaced = true;
            result.epsilon_sign = sign ? -1 : 1;
            std::size_t j = 0;
            std::vector<BigRat> eps_exp(real_units.seeds.size(), BigRat(0));
            std::ostringstream eps_expr;
            bool first = true;
            for (std::size_t i = 0; i < g_count; ++i) {
                if (!(mask & (std::size_t(1) << i))) continue;
                j = i;
                for (std::size_t k = 0; k < eps_exp.size(); ++k)
                    eps_exp[k] += real_units.generators[i].exponents[k];
                if (!first) eps_expr << "*";
                first = false;
                eps_expr << real_units.generators[i].provenance;
            }
            result.replaced_index = static_cast<int>(j);
            result.epsilon_exponents = eps_exp;
            std::string head = (ell == 1) ? "zeta8" : "-1";
            result.replacement_symbol = "sqrt(" + head +
                                        (result.epsilon_sign < 0 ? "*-" : "*") +
                                        eps_expr.str() + ")";
            break;
        }
        if (result.replaced) break;
    }

    for (std::size_t i = 0; i < g_count; ++i) {
        if (result.replaced && static_cast<int>(i) == result.replaced_index)
            result.generator_labels.push_back(result.replacement_symbol);
        else
            result.generator_labels.push_back(real_units.generators[i].provenance);
    }
    return result;
}

RankCheckReport rank_bound_check(const BigInt& p, const BigInt& q,
                                 const BigInt& s) {
    if (!is_prime(p) || !is_prime(q) || !is_prime(s))
        throw HypothesisError("rank_bound_check: p, q, s must be prime");
    if (mod_long(p, 8) != 5 || mod_long(q, 8) != 7 || mod_long(s, 8) != 3)
        throw HypothesisError("rank_bound_check: need p=5, q=7, s=3 (mod 8)");
    if (legendre(p, q) != legendre(p, s))
        throw HypothesisError("rank_bound_check: need (p/q) = (p/s)");

    RankCheckReport rep;
    rep.p = p;
    rep.q = q;
    rep.s = s;

    // N_{L3/Q(sqrt(qs))}(eps_2) where L3 = Q(sqrt(2), sqrt(qs)).
    auto L3 = MQField::make({BigInt(2), q * s});
    MQElement eps2 = embed_quad_unit(fundamental_unit(BigInt(2)), L3);
    Subgroup H = subgroup_generated(*L3, {1u});  // negates sqrt(2) only
    MQElement nrm = relative_norm(H, eps2);
    rep.norm_eps2 = nrm.rational_value();

    rep.hilbert_minus1_p = hilbert_symbol(BigRat(-1), BigRat(p), Place::at(p));

    // h2(L3) via saturation in the biquadratic field plus the class number
    // formula with n = 2.
    std::vector<MQElement> seeds = {
        eps2,
        embed_quad_unit(fundamental_unit(q * s), L3),
        embed_quad_unit(fundamental_unit(2 * q * s), L3),
    };
    UnitGroupDescription units =
        saturate(seeds, {"eps_2", "eps_qs", "eps_2qs"});
    rep.l3_index_log2 = units.index_log2;
    rep.l3_subfield_h2 = {
        {BigInt(2), two_class_number(BigInt(2))},
        {q * s, two_class_number(q * s)},
        {2 * q * s, two_class_number(2 * q * s)},
    };
    KurodaInput ki{2, true, unit_index(units),
                   {rep.l3_subfield_h2[BigInt(2)], rep.l3_subfield_h2[q * s],
                    rep.l3_subfield_h2[2 * q * s]}};
    rep.h2_L3 = kuroda_h2(ki);

    rep.pass = (rep.norm_eps2 == -1) && (rep.hilbert_minus1_p == 1) &&
               (rep.h2_L3 == 1);
    return rep;
}

}  // namespace mqunits

#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mqunits/exactnum.hpp"
#include "mqunits/quadfield.hpp"

namespace mqunits {

// A multiquadratic field Q(sqrt(d_1), ..., sqrt(d_n)) given by multiplicatively
// independent squarefree generators.  The basis holds the 2^n squarefree parts
// of subset products, indexed by subset bitmask (bit i <-> generator i), so
// basis[0] = 1.  Galois elements are bitmasks too: bit i set means sqrt(d_i)
// is negated.
class MQField {
  public:
    using Sigma = unsigned;

    static std::shared_ptr<const MQField> make(std::vector<BigInt> radicands);

    unsigned rank() const { return static_cast<unsigned>(radicands_.size()); }
    std::size_t degree() const { return basis_.size(); }
    const std::vector<BigInt>& radicands() const { return radicands_; }
    const std::vector<BigInt>& basis() const { return basis_; }
    const std::shared_ptr<const MQField>& subfield() const { return subfield_; }

    // Index of a radicand in the basis; throws if absent.
    std::size_t basis_index(const BigInt& radicand) const;

    // g = gcd(basis[i], basis[j]); sqrt(basis[i]) * sqrt(basis[j]) equals
    // g * sqrt(basis[i ^ j]).
    const BigInt& mul_gcd(std::size_t i, std::size_t j) const {
        return mul_gcd_[i * basis_.size() + j];
    }

    bool same_field(const MQField& o) const { return radicands_ == o.radicands_; }

  private:
    explicit MQField(std::vector<BigInt> radicands);

    std::vector<BigInt> radicands_;
    std::vector<BigInt> basis_;
    std::vector<BigInt> mul_gcd_;
    std::shared_ptr<const MQField> subfield_;
};

using FieldPtr = std::shared_ptr<const MQField>;

// An exact element: rational coefficients over the field basis.
class MQElement {
  public:
    MQElement(FieldPtr field, const BigRat& rational_value);
    MQElement(FieldPtr field, const std::map<BigInt, BigRat>& coeffs_by_radicand);
    static MQElement zero(FieldPtr field);
    static MQElement sqrt_basis(FieldPtr field, const BigInt& radicand);

    const FieldPtr& field() const { return field_; }
    const BigRat& coeff(std::size_t mask) const { return coeffs_[mask]; }
    BigRat coeff_of(const BigInt& radicand) const;
    std::map<BigInt, BigRat> support() const;  // nonzero coefficients

    bool is_zero() const;
    bool is_rational() const;
    BigRat rational_value() const;  // requires is_rational()

    MQElement operator-() const;
    MQElement conjugate(MQField::Sigma sigma) const;
    MQElement inverse() const;

    friend MQElement operator+(const MQElement& u, const MQElement& v);
    friend MQElement operator-(const MQElement& u, const MQElement& v);
    friend MQElement operator*(const MQElement& u, const MQElement& v);
    friend MQElement operator*(const BigRat& c, const MQElement& u);
    friend bool operator==(const MQElement& u, const MQElement& v);
    friend bool operator!=(const MQElement& u, const MQElement& v);

    std::string to_string() const;

  private:
    MQElement(FieldPtr field, std::vector<BigRat> coeffs);
    void guard() const;

    FieldPtr field_;
    std::vector<BigRat> coeffs_;
};

MQElement element_pow(const MQElement& u, long e);

// Galois action: flips the sign of every coefficient whose basis radicand
// contains an odd number of negated generators.
MQElement galois_apply(MQField::Sigma sigma, const MQElement& u);

using Subgroup = std::vector<MQField::Sigma>;

Subgroup subgroup_generated(const MQField& F, std::initializer_list<MQField::Sigma> gens);
Subgroup full_group(const MQField& F);
bool is_subgroup(const MQField& F, const Subgroup& H);

// Product of sigma(u) over sigma in H; lands in the H-fixed subfield.
MQElement relative_norm(const Subgroup& H, const MQElement& u);

// Norm down to Q, by norming out one generator at a time.
BigRat rational_norm(const MQElement& u);

// Exact square root by recursive descent on the quadratic tower, sign
// normalized so the first nonzero coefficient in basis order is positive.
// Verified by exact squaring before returning.  Throws on zero input.
std::optional<MQElement> try_sqrt(const MQElement& u);

// Places the quadratic unit (x + y sqrt(d))/denom into F; d must be a basis
// radicand of F.
MQElement embed_quad_unit(const QuadUnit& eps, FieldPtr F);

// One generator of a fundamental-system candidate, with its provenance over
// the original seed units: value = prod seeds[i]^exponents[i] up to sign,
// exponent denominators are powers of 2 (1 = seed product, 2 = square root,
// 4 = fourth root).
struct UnitGenerator {
    MQElement value;
    std::vector<BigRat> exponents;
    std::string provenance;
};

struct UnitGroupDescription {
    FieldPtr field;
    std::vector<MQElement> seeds;
    std::vector<std::string> seed_names;
    std::vector<UnitGenerator> generators;
    std::string torsion;  // "-1" or "zeta8"
    unsigned index_log2 = 0;

    int fourth_root_count() const;
    std::vector<std::string> generator_labels() const;
};

// Unit-group saturation: starting from seed units (verified to have rational
// norm +-1), repeatedly enumerates all +-products of current generators with
// exponents in {0,1} in a fixed order, replaces the highest participating
// generator by any square root found, and stops at the fixpoint.  index_log2
// counts accepted replacements, so the produced system has index
// 2^index_log2 over the seed lattice.
UnitGroupDescription saturate(std::vector<MQElement> seeds,
                              std::vector<std::string> seed_names,
                              std::string torsion = "-1");

BigInt unit_index(const UnitGroupDescription& description);

// Rational-exponent bookkeeping over a generator set.
// Solves target = sum_i x_i * rows_i exactly; empty when the system is
// inconsistent.
std::optional<std::vector<BigRat>> solve_exponents(
    const std::vector<std::vector<BigRat>>& rows,
    const std::vector<BigRat>& target);

// True when the two generator sets span the same lattice of exponent vectors.
bool same_unit_lattice(const std::vector<std::vector<BigRat>>& lhs,
                       const std::vector<std::vector<BigRat>>& rhs);

// Builds prod seeds[i]^(vec[i]) as a field element, extracting square roots
// as needed (vec entries with denominator 2^k).  Returns nullopt when a
// required root does not exist in the field.
std::optional<MQElement> unit_from_exponents(const std::vector<MQElement>& seeds,
                                             const std::vector<BigRat>& vec);

}  // namespace mqunits

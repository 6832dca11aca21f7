#include "mqunits/mqfield.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace mqunits {

namespace {

void require_same_field(const MQElement& u, const MQElement& v) {
    if (!u.field()->same_field(*v.field()))
        throw std::invalid_argument("MQElement: field mismatch");
}

int sign_of(MQField::Sigma sigma, std::size_t mask) {
    return (std::popcount(sigma & static_cast<unsigned>(mask)) % 2 == 0) ? 1 : -1;
}

}  // namespace

MQField::MQField(std::vector<BigInt> radicands) : radicands_(std::move(radicands)) {
    if (radicands_.size() > 4)
        throw std::invalid_argument("MQField: more than 4 generators unsupported");
    for (const BigInt& d : radicands_) {
        if (d <= 1) throw std::invalid_argument("MQField: radicands must be > 1");
        if (squarefree_part(d) != d)
            throw std::invalid_argument("MQField: radicands must be squarefree");
    }
    const std::size_t n = radicands_.size();
    basis_.resize(std::size_t(1) << n);
    for (std::size_t mask = 0; mask < basis_.size(); ++mask) {
        BigInt prod = 1;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t(1) << i)) prod *= radicands_[i];
        basis_[mask] = squarefree_part(prod);
    }
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = i + 1; j < basis_.size(); ++j)
            if (basis_[i] == basis_[j])
                throw std::invalid_argument(
                    "MQField: radicands are multiplicatively dependent");
    mul_gcd_.resize(basis_.size() * basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            BigInt g;
            mpz_gcd(g.get_mpz_t(), basis_[i].get_mpz_t(), basis_[j].get_mpz_t());
            mul_gcd_[i * basis_.size() + j] = g;
        }
}

std::shared_ptr<const MQField> MQField::make(std::vector<BigInt> radicands) {
    auto field = std::shared_ptr<MQField>(new MQField(std::move(radicands)));
    if (field->rank() > 0) {
        std::vector<BigInt> sub(field->radicands_.begin(),
                                field->radicands_.end() - 1);
        field->subfield_ = make(std::move(sub));
    }
    return field;
}

std::size_t MQField::basis_index(const BigInt& radicand) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i] == radicand) return i;
    throw std::invalid_argument("MQField: " + radicand.get_str() +
                                " is not a basis radicand");
}

MQElement::MQElement(FieldPtr field, std::vector<BigRat> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != field_->degree())
        throw std::logic_error("MQElement: coefficient count mismatch");
}

MQElement::MQElement(FieldPtr field, const BigRat& rational_value)
    : field_(std::move(field)), coeffs_(field_->degree(), BigRat(0)) {
    coeffs_[0] = rational_value;
}

MQElement::MQElement(FieldPtr field, const std::map<BigInt, BigRat>& coeffs)
    : field_(std::move(field)), coeffs_(field_->degree(), BigRat(0)) {
    for (const auto& [radicand, c] : coeffs)
        coeffs_[field_->basis_index(radicand)] = c;
}

MQElement MQElement::zero(FieldPtr field) { return MQElement(field, BigRat(0)); }

MQElement MQElement::sqrt_basis(FieldPtr field, const BigInt& radicand) {
    std::vector<BigRat> coeffs(field->degree(), BigRat(0));
    coeffs[field->basis_index(radicand)] = 1;
    return MQElement(std::move(field), std::move(coeffs));
}

BigRat MQElement::coeff_of(const BigInt& radicand) const {
    return coeffs_[field_->basis_index(radicand)];
}

std::map<BigInt, BigRat> MQElement::support() const {
    std::map<BigInt, BigRat> m;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (sgn(coeffs_[i]) != 0) m.emplace(field_->basis()[i], coeffs_[i]);
    return m;
}

bool MQElement::is_zero() const {
    for (const BigRat& c : coeffs_)
        if (sgn(c) != 0) return false;
    return true;
}

bool MQElement::is_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        if (sgn(coeffs_[i]) != 0) return false;
    return true;
}

BigRat MQElement::rational_value() const {
    if (!is_rational())
        throw std::logic_error("MQElement: not rational");
    return coeffs_[0];
}

void MQElement::guard() const {
    for (const BigRat& c : coeffs_) guard_bits(c);
}

MQElement MQElement::operator-() const {
    std::vector<BigRat> coeffs(coeffs_);
    for (BigRat& c : coeffs) c = -c;
    return MQElement(field_, std::move(coeffs));
}

MQElement MQElement::conjugate(MQField::Sigma sigma) const {
    std::vector<BigRat> coeffs(coeffs_);
    for (std::size_t m = 0; m < coeffs.size(); ++m)
        if (sign_of(sigma, m) < 0) coeffs[m] = -coeffs[m];
    return MQElement(field_, std::move(coeffs));
}

MQElement operator+(const MQElement& u, const MQElement& v) {
    require_same_field(u, v);
    std::vector<BigRat> coeffs(u.coeffs_);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += v.coeffs_[i];
    return MQElement(u.field_, std::move(coeffs));
}

MQElement operator-(const MQElement& u, const MQElement& v) {
    require_same_field(u, v);
    std::vector<BigRat> coeffs(u.coeffs_);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= v.coeffs_[i];
    return MQElement(u.field_, std::move(coeffs));
}

MQElement operator*(const MQElement& u, const MQElement& v) {
    require_same_field(u, v);
    const std::size_t n = u.coeffs_.size();
    std::vector<BigRat> coeffs(n, BigRat(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (sgn(u.coeffs_[i]) == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(v.coeffs_[j]) == 0) continue;
            coeffs[i ^ j] += u.coeffs_[i] * v.coeffs_[j] *
                             BigRat(u.field_->mul_gcd(i, j));
        }
    }
    MQElement r(u.field_, std::move(coeffs));
    r.guard();
    return r;
}

MQElement operator*(const BigRat& c, const MQElement& u) {
    std::vector<BigRat> coeffs(u.coeffs_);
    for (BigRat& x : coeffs) x *= c;
    return MQElement(u.field_, std::move(coeffs));
}

bool operator==(const MQElement& u, const MQElement& v) {
    return u.field_->same_field(*v.field_) && u.coeffs_ == v.coeffs_;
}

bool operator!=(const MQElement& u, const MQElement& v) { return !(u == v); }

MQElement MQElement::inverse() const {
    if (is_zero()) throw std::domain_error("MQElement: inverse of zero");
    // Product of the nontrivial conjugates, divided by the rational norm.
    MQElement prod(field_, BigRat(1));
    const unsigned order = static_cast<unsigned>(field_->degree());
    for (unsigned sigma = 1; sigma < order; ++sigma)
        prod = prod * conjugate(sigma);
    MQElement norm = *this * prod;
    if (!norm.is_rational() || sgn(norm.rational_value()) == 0)
        throw std::logic_error("MQElement: norm is not a nonzero rational");
    return BigRat(BigRat(1) / norm.rational_value()) * prod;
}

MQElement element_pow(const MQElement& u, long e) {
    if (e < 0) return element_pow(u.inverse(), -e);
    MQElement acc(u.field(), BigRat(1));
    MQElement base = u;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) acc = acc * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return acc;
}

std::string MQElement::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t m = 0; m < coeffs_.size(); ++m) {
        if (sgn(coeffs_[m]) == 0) continue;
        BigRat c = coeffs_[m];
        if (!first) {
            os << (sgn(c) < 0 ? " - " : " + ");
            if (sgn(c) < 0) c = -c;
        }
        first = false;
        if (m == 0) {
            os << c.get_str();
        } else {
            if (c != 1) os << c.get_str() << "*";
            os << "sqrt(" << field_->basis()[m].get_str() << ")";
        }
    }
    return os.str();
}

MQElement galois_apply(MQField::Sigma sigma, const MQElement& u) {
    if (sigma >= u.field()->degree())
        throw std::invalid_argument("galois_apply: sigma outside the group");
    return u.conjugate(sigma);
}

Subgroup subgroup_generated(const MQField& F,
                            std::initializer_list<MQField::Sigma> gens) {
    std::vector<bool> in(F.degree(), false);
    in[0] = true;
    std::vector<MQField::Sigma> H = {0};
    for (std::size_t i = 0; i < H.size(); ++i)
        for (MQField::Sigma g : gens) {
            if (g >= F.degree())
                throw std::invalid_argument("subgroup_generated: bad generator");
            MQField::Sigma x = H[i] ^ g;
            if (!in[x]) {
                in[x] = true;
                H.push_back(x);
            }
        }
    std::sort(H.begin(), H.end());
    return H;
}

Subgroup full_group(const MQField& F) {
    Subgroup H(F.degree());
    for (std::size_t i = 0; i < H.size(); ++i) H[i] = static_cast<unsigned>(i);
    return H;
}

bool is_subgroup(const MQField& F, const Subgroup& H) {
    std::vector<bool> in(F.degree(), false);
    for (MQField::Sigma s : H) {
        if (s >= F.degree()) return false;
        in[s] = true;
    }
    if (!in[0]) return false;
    for (MQField::Sigma a : H)
        for (MQField::Sigma b : H)
            if (!in[a ^ b]) return false;
    return true;
}

MQElement relative_norm(const Subgroup& H, const MQElement& u) {
    if (!is_subgroup(*u.field(), H))
        throw std::invalid_argument("relative_norm: H is not a subgroup");
    MQElement prod(u.field(), BigRat(1));
    for (MQField::Sigma sigma : H) prod = prod * u.conjugate(sigma);
    for (MQField::Sigma sigma : H)
        if (galois_apply(sigma, prod) != prod)
            throw std::logic_error("relative_norm: result not H-fixed");
    return prod;
}

namespace {

MQElement project_to_subfield(const MQElement& u) {
    const FieldPtr& sub = u.field()->subfield();
    const std::size_t half = sub->degree();
    std::map<BigInt, BigRat> coeffs;
    for (std::size_t m = 0; m < half; ++m)
        coeffs[u.field()->basis()[m]] = u.coeff(m);
    for (std::size_t m = half; m < u.field()->degree(); ++m)
        if (sgn(u.coeff(m)) != 0)
            throw std::logic_error("project_to_subfield: element not in subfield");
    return MQElement(sub, coeffs);
}

}  // namespace

BigRat rational_norm(const MQElement& u) {
    MQElement cur = u;
    while (cur.field()->rank() > 0) {
        const unsigned top = 1u << (cur.field()->rank() - 1);
        cur = project_to_subfield(cur * cur.conjugate(top));
    }
    return cur.rational_value();
}

namespace {

// u = lower + upper * sqrt(d_top): split into subfield halves, adjusting the
// upper coefficients by sqrt(basis[m]) * sqrt(d_top) = g * sqrt(basis[m|top]).
void split_top(const MQElement& u, MQElement& lower, MQElement& upper) {
    const FieldPtr& F = u.field();
    const FieldPtr& sub = F->subfield();
    const std::size_t half = sub->degree();
    std::map<BigInt, BigRat> lo, hi;
    for (std::size_t m = 0; m < half; ++m) {
        lo[F->basis()[m]] = u.coeff(m);
        hi[F->basis()[m]] = u.coeff(m + half) / BigRat(F->mul_gcd(m, half));
    }
    lower = MQElement(sub, lo);
    upper = MQElement(sub, hi);
}

MQElement join_top(const FieldPtr& F, const MQElement& lower,
                   const MQElement& upper) {
    const std::size_t half = F->subfield()->degree();
    std::map<BigInt, BigRat> coeffs;
    for (std::size_t m = 0; m < half; ++m) {
        coeffs[F->basis()[m]] = lower.coeff(m);
        BigRat c = upper.coeff(m) * BigRat(F->mul_gcd(m, half));
        if (sgn(c) != 0) coeffs[F->basis()[m + half]] = c;
    }
    return MQElement(F, coeffs);
}

std::optional<MQElement> sqrt_rec(const MQElement& u) {
    const FieldPtr& F = u.field();
    if (F->rank() == 0) {
        BigRat v = u.rational_value();
        if (sgn(v) < 0) return std::nullopt;
        auto r = rational_sqrt(v);
        if (!r) return std::nullopt;
        return MQElement(F, *r);
    }
    const BigInt& d_top = F->radicands().back();
    MQElement a = MQElement::zero(F->subfield());
    MQElement b = a;
    split_top(u, a, b);

    if (b.is_zero()) {
        if (auto s = sqrt_rec(a))
            return join_top(F, *s, MQElement::zero(F->subfield()));
        if (auto t = sqrt_rec(BigRat(d_top) * a))
            return join_top(F, MQElement::zero(F->subfield()),
                            BigRat(1, d_top) * *t);
        return std::nullopt;
    }

    auto c = sqrt_rec(a * a - BigRat(d_top) * (b * b));
    if (!c) return std::nullopt;
    for (const MQElement& cc : {*c, -*c}) {
        MQElement half = BigRat(1, 2) * (a + cc);
        auto s = sqrt_rec(half);
        if (!s || s->is_zero()) continue;
        MQElement t = BigRat(1, 2) * (b * s->inverse());
        MQElement cand = join_top(F, *s, t);
        if (cand * cand == u) return cand;
    }
    return std::nullopt;
}

void normalize_sign(MQElement& r) {
    for (std::size_t m = 0; m < r.field()->degree(); ++m) {
        int s = sgn(r.coeff(m));
        if (s == 0) continue;
        if (s < 0) r = -r;
        return;
    }
}

}  // namespace

std::optional<MQElement> try_sqrt(const MQElement& u) {
    if (u.is_zero()) throw std::invalid_argument("try_sqrt: zero input");
    auto r = sqrt_rec(u);
    if (!r) return std::nullopt;
    normalize_sign(*r);
    if (*r * *r != u) throw std::logic_error("try_sqrt: verification failed");
    return r;
}

MQElement embed_quad_unit(const QuadUnit& eps, FieldPtr F) {
    std::map<BigInt, BigRat> coeffs;
    coeffs[BigInt(1)] = BigRat(eps.x, eps.denom);
    coeffs[eps.d] = BigRat(eps.y, eps.denom);  // throws if d not in the basis
    return MQElement(std::move(F), coeffs);
}

namespace {

BigInt exponent_denominator(const std::vector<BigRat>& vec) {
    BigInt den = 1;
    for (const BigRat& e : vec) {
        const BigInt& d = e.get_den();
        if (mpz_popcount(d.get_mpz_t()) != 1)
            throw std::logic_error("exponent denominators must be powers of 2");
        if (d > den) den = d;
    }
    return den;
}

std::string exponent_expression(const std::vector<BigRat>& vec,
                                const std::vector<std::string>& names,
                                const BigInt& den) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        BigRat scaled = vec[i] * BigRat(den);
        if (sgn(scaled) == 0) continue;
        if (!first) os << "*";
        first = false;
        os << names[i];
        if (scaled != 1) os << "^" << scaled.get_num().get_str();
    }
    return first ? "1" : os.str();
}

std::string provenance_label(const std::vector<BigRat>& vec,
                             const std::vector<std::string>& names) {
    BigInt den = exponent_denominator(vec);
    std::string expr = exponent_expression(vec, names, den);
    if (den == 1) {
        long nonzero = 0;
        bool unit_vec = true;
        for (const BigRat& e : vec) {
            if (sgn(e) != 0) {
                ++nonzero;
                if (e != 1) unit_vec = false;
            }
        }
        if (nonzero == 1 && unit_vec) return expr;  // a seed itself
        return "product(" + expr + ")";
    }
    if (den == 2) return "sqrt(" + expr + ")";
    if (den == 4) return "fourth_root(" + expr + ")";
    return "root_2e" + den.get_str() + "(" + expr + ")";
}

unsigned rank_of(std::vector<std::vector<BigRat>> m) {
    unsigned rank = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t piv = row;
        while (piv < m.size() && sgn(m[piv][col]) == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[row]);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || sgn(m[r][col]) == 0) continue;
            BigRat f = m[r][col] / m[row][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

}  // namespace

int UnitGroupDescription::fourth_root_count() const {
    int count = 0;
    for (const auto& g : generators)
        if (exponent_denominator(g.exponents) == 4) ++count;
    return count;
}

std::vector<std::string> UnitGroupDescription::generator_labels() const {
    std::vector<std::string> labels;
    labels.reserve(generators.size());
    for (const auto& g : generators) labels.push_back(g.provenance);
    return labels;
}

UnitGroupDescription saturate(std::vector<MQElement> seeds,
                              std::vector<std::string> seed_names,
                              std::string torsion) {
    if (seeds.empty()) throw std::invalid_argument("saturate: no seed units");
    if (seed_names.empty()) {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            seed_names.push_back("u" + std::to_string(i));
    }
    if (seed_names.size() != seeds.size())
        throw std::invalid_argument("saturate: seed/name count mismatch");
    const FieldPtr field = seeds[0].field();
    for (const MQElement& s : seeds) {
        if (!s.field()->same_field(*field))
            throw std::invalid_argument("saturate: seeds from different fields");
        BigRat n = rational_norm(s);
        if (n != 1 && n != -1)
            throw std::invalid_argument("saturate: seed is not a unit (norm " +
                                        n.get_str() + ")");
    }

    UnitGroupDescription desc;
    desc.field = field;
    desc.seeds = seeds;
    desc.seed_names = seed_names;
    desc.torsion = std::move(torsion);
    const std::size_t g = seeds.size();
    for (std::size_t i = 0; i < g; ++i) {
        std::vector<BigRat> e(g, BigRat(0));
        e[i] = 1;
        desc.generators.push_back({seeds[i], e, seed_names[i]});
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t mask = 1; mask < (std::size_t(1) << g) && !changed;
             ++mask) {
            MQElement prod(field, BigRat(1));
            for (std::size_t i = 0; i < g; ++i)
                if (mask & (std::size_t(1) << i))
                    prod = prod * desc.generators[i].value;
            for (int sign = 0; sign < 2 && !changed; ++sign) {
                MQElement cand = sign ? -prod : prod;
                auto root = try_sqrt(cand);
                if (!root) continue;
                std::size_t j = 0;
                for (std::size_t i = 0; i < g; ++i)
                    if (mask & (std::size_t(1) << i)) j = i;
                std::vector<BigRat> e(g, BigRat(0));
                for (std::size_t i = 0; i < g; ++i)
                    if (mask & (std::size_t(1) << i))
                        for (std::size_t k = 0; k < g; ++k)
                            e[k] += desc.generators[i].exponents[k];
                for (BigRat& x : e) x /= 2;
                desc.generators[j] =
                    {*root, e, provenance_label(e, desc.seed_names)};
                ++desc.index_log2;
                if (desc.index_log2 > 40)
                    throw std::logic_error("saturate: runaway saturation");
                changed = true;
            }
        }
    }

    std::vector<std::vector<BigRat>> rows;
    for (const auto& gen : desc.generators) rows.push_back(gen.exponents);
    if (rank_of(rows) != g)
        throw std::logic_error("saturate: generators not independent");
    return desc;
}

BigInt unit_index(const UnitGroupDescription& description) {
    BigInt r = 1;
    for (unsigned i = 0; i < description.index_log2; ++i) r *= 2;
    return r;
}

std::optional<std::vector<BigRat>> solve_exponents(
    const std::vector<std::vector<BigRat>>& rows,
    const std::vector<BigRat>& target) {
    if (rows.empty()) return std::nullopt;
    const std::size_t n = rows.size();
    const std::size_t cols = rows[0].size();
    // Augmented system M x = t with M's columns the generator rows.
    std::vector<std::vector<BigRat>> m(cols, std::vector<BigRat>(n + 1, BigRat(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < cols; ++c) m[c][i] = rows[i][c];
    for (std::size_t c = 0; c < cols; ++c) m[c][n] = target[c];

    std::vector<std::size_t> pivot_col(n, SIZE_MAX);
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < cols; ++col) {
        std::size_t piv = row;
        while (piv < cols && sgn(m[piv][col]) == 0) ++piv;
        if (piv == cols) continue;
        std::swap(m[piv], m[row]);
        for (std::size_t r = 0; r < cols; ++r) {
            if (r == row || sgn(m[r][col]) == 0) continue;
            BigRat f = m[r][col] / m[row][col];
            for (std::size_t c2 = col; c2 <= n; ++c2) m[r][c2] -= f * m[row][c2];
        }
        pivot_col[row] = col;
        ++row;
    }
    std::vector<BigRat> x(n, BigRat(0));
    for (std::size_t r = 0; r < row; ++r)
        x[pivot_col[r]] = m[r][n] / m[r][pivot_col[r]];
    for (std::size_t r = row; r < cols; ++r)
        if (sgn(m[r][n]) != 0) return std::nullopt;  // inconsistent
    // Exact check, covering any dropped free variables.
    for (std::size_t c = 0; c < cols; ++c) {
        BigRat acc(0);
        for (std::size_t i = 0; i < n; ++i) acc += x[i] * rows[i][c];
        if (acc != target[c]) return std::nullopt;
    }
    return x;
}

bool same_unit_lattice(const std::vector<std::vector<BigRat>>& lhs,
                       const std::vector<std::vector<BigRat>>& rhs) {
    auto contained = [](const std::vector<std::vector<BigRat>>& inner,
                        const std::vector<std::vector<BigRat>>& outer) {
        for (const auto& v : inner) {
            auto x = solve_exponents(outer, v);
            if (!x) return false;
            for (const BigRat& c : *x)
                if (c.get_den() != 1) return false;
        }
        return true;
    };
    return contained(lhs, rhs) && contained(rhs, lhs);
}

std::optional<MQElement> unit_from_exponents(const std::vector<MQElement>& seeds,
                                             const std::vector<BigRat>& vec) {
    if (seeds.empty() || seeds.size() != vec.size())
        throw std::invalid_argument("unit_from_exponents: size mismatch");
    BigInt den = exponent_denominator(vec);
    MQElement prod(seeds[0].field(), BigRat(1));
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        BigRat scaled = vec[i] * BigRat(den);
        prod = prod * element_pow(seeds[i], scaled.get_num().get_si());
    }
    while (den > 1) {
        auto r = try_sqrt(prod);
        if (!r) r = try_sqrt(-prod);
        if (!r) return std::nullopt;
        prod = *r;
        den /= 2;
    }
    return prod;
}

}  // namespace mqunits

#ifndef VDCLAB_INTPOLY_HPP
#define VDCLAB_INTPOLY_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "vdclab/bigint.hpp"
#include "vdclab/errors.hpp"

namespace vdclab {

// Exponent vector; always of length n_vars of the owning polynomial.
using Exponents = std::vector<std::uint32_t>;

// degree() of the zero polynomial. Stands in for "minus infinity": it
// compares below every attainable degree and must never be used in
// arithmetic.
inline constexpr int kZeroPolyDegree = std::numeric_limits<int>::min();

// Sparse multivariate polynomial with exact integer coefficients.
// Invariants: no stored coefficient is zero (zero polynomial = empty map),
// every key has length n_vars.
class IntPoly {
public:
    using TermMap = std::map<Exponents, BigInt>;

    IntPoly() : n_vars_(0) {}
    explicit IntPoly(unsigned n_vars) : n_vars_(n_vars) {}

    static IntPoly zero(unsigned n_vars) { return IntPoly(n_vars); }
    static IntPoly constant(unsigned n_vars, const BigInt& c);
    // c * x_i^e
    static IntPoly monomial(unsigned n_vars, unsigned i, unsigned e, const BigInt& c);
    static IntPoly from_terms(unsigned n_vars, const std::vector<std::pair<Exponents, BigInt>>& terms);

    unsigned n_vars() const { return n_vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // max total degree; kZeroPolyDegree for the zero polynomial
    int degree() const;
    bool is_homogeneous() const;

    void add_term(const Exponents& e, const BigInt& c);

    IntPoly operator-() const;
    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly operator*(const BigInt& c) const;
    bool operator==(const IntPoly& o) const { return n_vars_ == o.n_vars_ && terms_ == o.terms_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    // sum of the terms of total degree exactly d
    IntPoly homogeneous_part(int d) const;

    BigInt eval(const std::vector<BigInt>& point) const;
    std::int64_t eval_mod(const std::vector<std::uint32_t>& point, std::uint32_t m) const;

    // max |coefficient|
    BigInt height() const;
    // Σ |c| * bound^(deg term); cheap a-priori bound for |eval| on |x_i| <= bound
    BigInt eval_bound(const BigInt& coordinate_bound) const;

    std::string to_string() const;

private:
    unsigned n_vars_;
    TermMap terms_;
};

// --- poly_core operations ---

// Top-degree homogeneous part. Errors on the zero polynomial: it has no
// leading form.
IntPoly leading_form(const IntPoly& p);

// q(x) = p(x + scale*shift), expanded exactly over the integers.
IntPoly translate_scale(const IntPoly& p, const std::vector<BigInt>& shift, const BigInt& scale);

// f(x + p*y) - f(x). The result may be the zero polynomial; callers that
// stratify by the differenced system must branch on that case.
IntPoly difference_poly(const IntPoly& f, const BigInt& p, const std::vector<BigInt>& y);

std::vector<IntPoly> gradient(const IntPoly& p);
std::vector<std::vector<IntPoly>> hessian(const IntPoly& p);

// Degree-d homogenization by a fresh variable placed FIRST:
// G(x0, x1..xn) = x0^d * f(x1/x0, ..., xn/x0) with d = max(degree(f), min_degree).
IntPoly homogenize(const IntPoly& f, int min_degree = 0);

// y . grad(F) as a polynomial in x, with y an integer vector.
IntPoly directional_derivative(const IntPoly& f, const std::vector<BigInt>& y);

// An ordered system f_1..f_r in a common ambient A^n, with the derived
// leading forms F_1..F_r cached.
class PolySystem {
public:
    PolySystem() = default;
    PolySystem(unsigned n_vars, std::vector<IntPoly> polys);

    unsigned n_vars() const { return n_vars_; }
    unsigned size() const { return static_cast<unsigned>(polys_.size()); }
    const std::vector<IntPoly>& polys() const { return polys_; }
    const std::vector<IntPoly>& leading_forms() const { return leading_forms_; }
    const IntPoly& poly(unsigned i) const { return polys_[i]; }
    const IntPoly& leading_form_of(unsigned i) const { return leading_forms_[i]; }
    int max_degree() const;

private:
    unsigned n_vars_ = 0;
    std::vector<IntPoly> polys_;
    std::vector<IntPoly> leading_forms_;
};

}  // namespace vdclab

#endif

#ifndef VDCLAB_FIELD_HPP
#define VDCLAB_FIELD_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vdclab/errors.hpp"
#include "vdclab/intpoly.hpp"

namespace vdclab {

bool is_prime_u64(std::uint64_t n);
std::uint64_t next_prime(std::uint64_t n);  // smallest prime >= n

inline constexpr unsigned kMaxExtDegree = 4;

// Element of F_{q^k}, coordinates w.r.t. the power basis of the context
// modulus. Only the first k coordinates are meaningful.
struct FieldElem {
    std::array<std::uint32_t, kMaxExtDegree> c{};

    bool operator==(const FieldElem&) const = default;
};

// Canonical monic irreducible of degree k over F_q: the first candidate in
// coefficient counting order (c_0 + c_1 q + ... enumerated ascending) that
// is irreducible. k=1 returns the placeholder t.
std::vector<std::uint32_t> find_irreducible(std::uint64_t q, unsigned k);

// Field context for F_{q^k}. Validates q prime and the modulus irreducible
// at construction. Immutable and shareable across threads.
class FieldCtx {
public:
    FieldCtx(std::uint64_t q, unsigned k);
    FieldCtx(std::uint64_t q, unsigned k, std::vector<std::uint32_t> modulus);

    std::uint64_t q() const { return q_; }
    unsigned k() const { return k_; }
    std::uint64_t order() const { return order_; }  // q^k
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    bool prime_field() const { return k_ == 1; }

    FieldElem zero() const { return FieldElem{}; }
    FieldElem one() const;
    FieldElem from_residue(std::int64_t v) const;

    bool is_zero(const FieldElem& a) const;
    FieldElem add(const FieldElem& a, const FieldElem& b) const;
    FieldElem sub(const FieldElem& a, const FieldElem& b) const;
    FieldElem neg(const FieldElem& a) const;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const;
    FieldElem pow(const FieldElem& a, std::uint64_t e) const;
    FieldElem inv(const FieldElem& a) const;
    FieldElem frobenius(const FieldElem& a) const { return pow(a, q_); }

    // enumeration order: index = c_0 + c_1 q + ... + c_{k-1} q^{k-1}
    std::uint64_t index_of(const FieldElem& a) const;
    FieldElem elem_at(std::uint64_t index) const;

    std::string describe() const;

private:
    std::uint64_t q_;
    unsigned k_;
    std::uint64_t order_;
    std::vector<std::uint32_t> modulus_;
};

// Point of P^{m-1}, normalized so the first nonzero coordinate is 1.
struct ProjPoint {
    std::vector<FieldElem> coords;

    bool operator==(const ProjPoint&) const = default;
};

ProjPoint normalize_projective(const FieldCtx& ctx, std::vector<FieldElem> coords);

// --- enumeration ---

// Number of points the stream would produce, or throws BudgetError naming
// the --budget flag.
std::uint64_t affine_point_count(const FieldCtx& ctx, unsigned m, std::uint64_t budget);
std::uint64_t projective_point_count(const FieldCtx& ctx, unsigned m, std::uint64_t budget);

// Each point exactly once, deterministic lexicographic order (first
// coordinate most significant). The callback receives the coordinate
// array; it must not retain the pointer.
void for_each_affine(const FieldCtx& ctx, unsigned m, std::uint64_t budget,
                     const std::function<void(const FieldElem*)>& fn);
void for_each_projective(const FieldCtx& ctx, unsigned m, std::uint64_t budget,
                         const std::function<void(const FieldElem*)>& fn);

std::vector<ProjPoint> collect_projective(const FieldCtx& ctx, unsigned m, std::uint64_t budget);

// --- characters ---

// e_q(a) = exp(2*pi*i*a/q) for the prime field. Trace characters of proper
// extensions are unsupported.
std::complex<double> additive_character(const FieldCtx& ctx, std::int64_t a);

// Root-of-unity table for a prime q; roots[t] = e_q(t).
class CharTable {
public:
    explicit CharTable(std::uint64_t q);
    std::uint64_t q() const { return q_; }
    std::complex<double> operator()(std::uint64_t residue) const { return roots_[residue % q_]; }

private:
    std::uint64_t q_;
    std::vector<std::complex<double>> roots_;
};

// Kahan-compensated complex accumulator (counting-module tolerance contract).
class KahanComplex {
public:
    void add(std::complex<double> v) {
        add_part(re_, re_c_, v.real());
        add_part(im_, im_c_, v.imag());
    }
    std::complex<double> value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_part(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

// --- reduced polynomials ---

// An IntPoly with coefficients reduced into [0, q); evaluation helper for
// enumeration kernels. Exponents are stored densely per term.
class ReducedPoly {
public:
    ReducedPoly() = default;
    ReducedPoly(const IntPoly& p, std::uint64_t q);

    unsigned n_vars() const { return n_vars_; }
    bool is_zero() const { return terms_.empty(); }
    // top-degree part surviving reduction; degree of zero as in IntPoly
    int degree() const;
    std::size_t term_count() const { return terms_.size(); }

    // prime-field evaluation; point holds residues in [0, q)
    std::uint32_t eval_prime(const std::uint32_t* point, std::uint64_t q) const;
    // generic evaluation over F_{q^k}
    FieldElem eval(const FieldCtx& ctx, const FieldElem* point) const;

    // the reduced polynomial as an IntPoly with coefficients in [0, q)
    IntPoly lift() const;

    struct Term {
        std::vector<std::uint32_t> exps;
        std::uint32_t coeff;
    };
    const std::vector<Term>& terms() const { return terms_; }

private:
    unsigned n_vars_ = 0;
    std::vector<Term> terms_;
};

std::vector<ReducedPoly> reduce_system(const std::vector<IntPoly>& polys, std::uint64_t q);

// eval(p, x) mod q computed through the reduction; spec'd commutation route
std::uint32_t eval_reduced(const IntPoly& p, const std::vector<std::int64_t>& point, std::uint64_t q);

}  // namespace vdclab

#endif

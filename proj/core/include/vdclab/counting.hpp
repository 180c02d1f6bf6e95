#ifndef VDCLAB_COUNTING_HPP
#define VDCLAB_COUNTING_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "vdclab/bigint.hpp"
#include "vdclab/variety.hpp"

namespace vdclab {

// Product of closed integer intervals [center_i - half_i, center_i + half_i].
// For modular counting with modulus m every side must satisfy 2*half+1 <= m,
// so the box holds at most one representative of each residue class.
class BoxZ {
public:
    BoxZ(std::vector<std::int64_t> center, std::vector<std::int64_t> half);
    static BoxZ symmetric(unsigned n, std::int64_t b);  // [-B, B]^n

    unsigned n() const { return static_cast<unsigned>(center_.size()); }
    std::int64_t lo(unsigned i) const { return center_[i] - half_[i]; }
    std::int64_t hi(unsigned i) const { return center_[i] + half_[i]; }
    std::int64_t side(unsigned i) const { return 2 * half_[i] + 1; }
    const std::vector<std::int64_t>& center() const { return center_; }
    const std::vector<std::int64_t>& half() const { return half_; }

    BigInt point_count() const;
    std::uint64_t point_count_checked(std::uint64_t budget) const;
    bool fits_modulus(std::uint64_t m) const;
    std::int64_t max_abs_coordinate() const;

    // odometer over all lattice points, last axis fastest
    void for_each(const std::function<void(const std::vector<std::int64_t>&)>& fn) const;

private:
    std::vector<std::int64_t> center_;
    std::vector<std::int64_t> half_;
};

// exact number of integer points of the box with all f_i = 0 over Z
std::uint64_t count_box(const Instance& inst, const BoxZ& box, const EnumOptions& opt = {});

// exact count of box points with all f_i = 0 mod m; m must be prime or a
// product of two distinct primes, and the box must fit the modulus
std::uint64_t count_box_mod(const Instance& inst, const BoxZ& box, std::uint64_t m,
                            const EnumOptions& opt = {});
std::uint64_t count_box_mod(const std::vector<IntPoly>& polys, const BoxZ& box, std::uint64_t m,
                            const EnumOptions& opt = {});

// affine point-count residual against the q^{n-r} main term, with the
// singularity-sensitive exponent (n-r+2+s)/2
struct HooleyResidual {
    std::uint64_t q = 0;
    BigInt count;
    BigInt main;
    BigInt residual;
    double bound = 0;
    double ratio = 0;
    int s = -1;
    bool bezout_regime = false;  // n == r: count <= d^n, no residual bound
};
struct GeometryOptions {
    EnumOptions en;
    DimOptions dim;
};
HooleyResidual hooley_deligne_residual(const Instance& inst, std::uint64_t q,
                                       const GeometryOptions& opt = {});

// Smooth compactly supported product weight W(t) = prod phi(t_i / L) with
// phi(u) = exp(-c/(1-u^2)) on |u| < 1 and 0 outside; c = 1/sharpness. The
// sharpness family converges pointwise to the indicator of (-L, L)^n.
class BumpWeight {
public:
    explicit BumpWeight(double support_halfwidth = 1.0, unsigned sharpness = 1);

    double support() const { return L_; }
    unsigned sharpness() const { return sharpness_; }

    double profile(double u) const;
    double value(const std::vector<double>& t) const;

    // max over R^n of all order-k partial derivatives, estimated on a
    // 10^4-point grid per axis from the exact symbolic axis derivatives.
    // Supported for k <= 8 (that is 2n for n <= 4).
    double derivative_bound(unsigned k, unsigned n) const;
    static constexpr unsigned kMaxDerivativeOrder = 8;

private:
    double L_;
    unsigned sharpness_;
    std::vector<double> axis_max_;  // M_j = grid max of |phi^(j)|
};

// N_W(X, B, q) = sum over x in Z^n with x mod q on X of W(x / B), by direct
// lattice summation over the support
double weighted_count(const std::vector<IntPoly>& polys, const BumpWeight& weight, double b,
                      std::uint64_t q);

struct WeightedResidual {
    double lhs = 0;        // N_W(X,B,q)
    double main = 0;       // q^{-r} N_W(A^n,B,q)
    double residual = 0;
    double error_term_bound = 0;  // D_{2n} B^{s+1} q^{(n-r-s-2)/2} (B + sqrt(q))
    bool error_term_skipped = false;  // n > 4: no derivative table
    int s = -1;
};
struct WeightedOptions {
    GeometryOptions geom;
    double b_over_q_max = 1.0;  // enforce B <= b_over_q_max * q
    bool verify_geometry = true;
};
WeightedResidual weighted_residual(const Instance& inst, const BumpWeight& weight, double b,
                                   std::uint64_t q, const WeightedOptions& opt = {});

// Windowed deviation for a shift y:
//   sum_{f^y = 0 (q)} W_y(x) - q^{-r} sum_x W_y(x),
// with W_y(x) = W(x/2B) W((x+py)/2B).
double weighted_delta(const Instance& inst, const BumpWeight& weight, double b, std::uint64_t p,
                      std::uint64_t q, const std::vector<std::int64_t>& y);

// same deviation with the indicator of (-L,L)^n in place of the bump;
// cross-check oracle for the exact-count route
BigRat indicator_delta(const Instance& inst, double support_halfwidth, double b, std::uint64_t p,
                       std::uint64_t q, const std::vector<std::int64_t>& y);

}  // namespace vdclab

#endif

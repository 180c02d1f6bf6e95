#ifndef VDCLAB_EXPSUM_HPP
#define VDCLAB_EXPSUM_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "vdclab/counting.hpp"
#include "vdclab/variety.hpp"

namespace vdclab {

// A finite character sum: value, number of summands, modulus. The triangle
// inequality |value| <= terms is a structural invariant.
struct CharSum {
    std::complex<double> value{0.0, 0.0};
    std::uint64_t terms = 0;
    std::uint64_t q = 0;
};

// S1(a) = sum_{b in box} e_q(-a.b), computed through the per-axis
// geometric-series closed form (product of Dirichlet-kernel factors).
// Box sides must not exceed q.
CharSum s1(const BoxZ& box, const std::vector<std::int64_t>& a, std::uint64_t q);

// Enumerated affine F_q-points of a system; cached so that a-sweeps pay
// the enumeration once.
struct PointSet {
    std::uint64_t q = 0;
    unsigned n = 0;
    std::vector<std::vector<std::uint32_t>> points;
};
PointSet affine_points(const std::vector<IntPoly>& polys, std::uint64_t q,
                       const EnumOptions& opt = {});

// S2(a) = sum over the F_q-points x of the affine scheme of e_q(a.x)
CharSum s2(const PointSet& xset, const std::vector<std::int64_t>& a);
CharSum s2(const std::vector<IntPoly>& polys, const std::vector<std::int64_t>& a, std::uint64_t q,
           const EnumOptions& opt = {});
// the same sum in its role as the complete exponential sum over X_q
inline CharSum sigma_q(const std::vector<IntPoly>& polys, const std::vector<std::int64_t>& a,
                       std::uint64_t q, const EnumOptions& opt = {}) {
    return s2(polys, a, q, opt);
}

// N(X, box, q) against q^{-n} sum_a S1(a) S2(a). The full a-sweep is capped;
// beyond the cap the identity is checked statistically on a random sample
// and flagged as sampled, never silently.
struct FourierInversionCheck {
    double lhs = 0;
    std::complex<double> rhs{0.0, 0.0};
    double abs_err = 0;   // |lhs - Re(rhs)|
    double imag_abs = 0;  // |Im(rhs)|
    bool sampled = false;
    std::uint64_t a_count = 0;    // summands used on the Fourier side
    double sample_stderr = 0;     // only in sampled mode
};
struct FourierOptions {
    EnumOptions en;
    std::uint64_t full_sweep_cap = 10'000'000;
    std::uint64_t sample_size = 20'000;
    std::uint64_t seed = 1;
};
FourierInversionCheck fourier_inversion_check(const Instance& inst, const BoxZ& box,
                                              std::uint64_t q, const FourierOptions& opt = {});

// With l_1..l_{s+1} of degree-1 leading forms L_i independent mod q and
// X = V(f_1..f_r, l_1..l_{s+1}):
//   q^{-(s+1)} sum_{a in span L} S1(a) S2(a)  =  #X(F_q) * N(Lambda, box, q)
// where Lambda is cut by the l_i alone. Both sides are returned.
struct VSubspaceCheck {
    std::complex<double> lhs{0.0, 0.0};
    BigInt rhs;            // #X(F_q) * N(Lambda, box, q)
    BigInt x_count;
    BigInt lambda_count;
    double abs_err = 0;
};
VSubspaceCheck v_subspace_identity(const Instance& inst, const std::vector<IntPoly>& linear,
                                   const BoxZ& box, std::uint64_t q, const EnumOptions& opt = {});

// Empirical normalized size of the complete sums: for sampled a != 0,
// |Sigma_q(a)| / q^{(n-r+1+delta(a))/2} with delta(a) measured by the
// hyperplane-section singularity scan.
struct KatzRow {
    std::vector<std::uint32_t> a;
    double abs_sum = 0;
    int delta = -1;
    bool delta_flagged = false;   // threshold suggested delta >= 1
    bool delta_from_ext = false;  // singular points appeared only over F_{q^2}
    double ratio = 0;
};
struct KatzReport {
    std::uint64_t q = 0;
    std::uint64_t seed = 0;
    std::vector<KatzRow> rows;
    double max_ratio = 0;
};
struct KatzOptions {
    GeometryOptions geom;
    std::uint64_t seed = 1;
};
KatzReport katz_bound_report(const Instance& inst, std::uint64_t q, unsigned samples,
                             const KatzOptions& opt = {});

}  // namespace vdclab

#endif

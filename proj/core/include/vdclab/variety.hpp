#ifndef VDCLAB_VARIETY_HPP
#define VDCLAB_VARIETY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vdclab/field.hpp"
#include "vdclab/intpoly.hpp"

namespace vdclab {

// A complete-intersection system f_1..f_r in A^n with its leading forms
// cached; the leading forms cut out the scheme at infinity whose geometry
// drives every error bound.
class Instance {
public:
    Instance() = default;
    explicit Instance(PolySystem system) : system_(std::move(system)) {}
    Instance(unsigned n_vars, std::vector<IntPoly> polys) : system_(n_vars, std::move(polys)) {}

    unsigned n() const { return system_.n_vars(); }
    unsigned r() const { return system_.size(); }
    const PolySystem& system() const { return system_; }
    const std::vector<IntPoly>& polys() const { return system_.polys(); }
    const std::vector<IntPoly>& leading_forms() const { return system_.leading_forms(); }
    int max_degree() const { return system_.max_degree(); }

private:
    PolySystem system_;
};

struct EnumOptions {
    std::uint64_t budget = 1'000'000'000;  // hard cap on any single enumeration
    unsigned threads = 1;
};

struct DimOptions {
    std::uint64_t enum_budget = 1'000'000'000;
    // growth-estimator enumerations stay under this per-extension cap
    std::uint64_t growth_budget = 500'000;
    unsigned max_ext = 3;  // test extensions F_{q^k}, k <= max_ext
    unsigned slice_trials = 5;
    std::uint64_t seed = 1;
};

enum class CountMode { Affine, Projective };

// Exact number of common zeros in A^m or P^{m-1} over the context field.
std::uint64_t count_points(const std::vector<IntPoly>& forms, const FieldCtx& ctx,
                           CountMode mode, const EnumOptions& opt = {});

// Estimated projective dimension of V(forms) in P^{m-1} over F_q, in
// [-1, m-1]. Two independent estimators with mandatory agreement:
//   - growth of the point count over F_{q^k} for the largest affordable k,
//   - random linear-subspace slicing, with geometric nonemptiness of a
//     slice tested over F_{q^k}, k <= max_ext (majority over slice_trials).
// Returns -1 when V is empty over every tested extension. Throws
// DimensionAmbiguous when the estimators cannot be reconciled.
int projective_dimension(const std::vector<IntPoly>& forms, std::uint64_t q, unsigned m,
                         const DimOptions& opt = {});

// Cheap dimension variant for per-candidate sweeps (differenced-system
// censuses try thousands of small systems). Zero-dimensionality is decided
// by the degree bound (#V(F_q) <= prod d_i), positive dimensions by the
// slicing scan alone; no growth cross-check, no extension counting of the
// full space. A common component with almost no rational points can fool
// the degree shortcut; acceptable for census statistics.
int fast_projective_dimension(const std::vector<IntPoly>& forms, std::uint64_t q, unsigned m,
                              const DimOptions& opt = {});

// Points of V(forms)(F_{q^k}) where the r x m Jacobian has rank < r.
// Meaningful as the singular locus only when V has codimension r; callers
// check that first.
struct SingularLocusResult {
    std::vector<ProjPoint> points;
    std::uint64_t variety_count = 0;  // #V(F_{q^k})
};
SingularLocusResult singular_points(const std::vector<IntPoly>& forms, const FieldCtx& ctx,
                                    const EnumOptions& opt = {});

// All r x r minors of the Jacobian of the forms (row i = grad F_i).
std::vector<IntPoly> jacobian_minors(const std::vector<IntPoly>& forms);

// dim of the rank-deficient locus {F = 0, rank J < r}, via the dimension
// estimator on forms + minors. -1 means nonsingular (for a complete
// intersection).
int singular_dimension(const std::vector<IntPoly>& forms, std::uint64_t q, unsigned m,
                       const DimOptions& opt = {});

// Consolidated geometry of the leading-form scheme at one prime.
struct SingReport {
    std::uint64_t q = 0;
    bool is_complete_intersection_codim = false;  // codim == r
    int dim_Z = -1;
    int dim_sing = -1;
    std::map<unsigned, std::uint64_t> point_counts;  // k -> #Z(F_{q^k})
    std::vector<unsigned> k_list;
    std::uint64_t seed = 0;
};
SingReport analyze_forms(const std::vector<IntPoly>& forms, std::uint64_t q, unsigned m,
                         unsigned expected_codim, const DimOptions& opt = {});

// --- incidence strata of the differenced geometry ---

// For the system G_1..G_r over F_q:
//   S = {(x,y): y.grad G_i(x) = 0 for all i, rank(y.Hess G_i(x))_i < r},
//   S_y its x-fibers, T_s = {y : dim S_y >= s}.
// Fiber dimensions use the cardinality threshold
//   dim S_y >= s  iff  #S_y >= #P^s(F_q)/2,
// recorded as a proxy. Set-level dimensions are measured by cross-q count
// regression (see fit_exponent), not here.
struct StrataResult {
    std::uint64_t q = 0;
    std::uint64_t s_count = 0;  // #S(F_q)
    // per enumerated y of P^{m-1}(F_q): fiber size and threshold dimension
    struct FiberInfo {
        ProjPoint y;
        std::uint64_t fiber_size = 0;
        int fiber_dim = -1;
    };
    std::vector<FiberInfo> fibers;
    // T_s as sets of indices into fibers, for s = -1 .. m-1 (key s)
    std::map<int, std::vector<std::uint32_t>> t_sets;
    double c_ratio = 0.0;  // #S / q^{m-2}
};
StrataResult strata_sets(const std::vector<IntPoly>& forms, std::uint64_t q,
                         const EnumOptions& opt = {});

// Integer linear form L with sup-norm <= height_bound such that slicing by
// L drops both dim Z and dim Sing Z by exactly one. Deterministic search
// order: by height, then lexicographic. Requires dim Sing Z >= 0.
std::vector<BigInt> find_good_hyperplane(const std::vector<IntPoly>& forms, std::uint64_t q,
                                         unsigned height_bound, const DimOptions& opt = {});

// Smallest prime in [P, window_factor*P] at which the leading-form scheme
// is nonsingular of dimension n-1-r. Throws SearchExhausted listing every
// failed prime and its defect.
struct GoodPrimeOptions {
    DimOptions dim;
    bool require_odd = false;  // exact-identity box census needs p | 2B+1
};
std::uint64_t find_good_prime(const Instance& inst, std::uint64_t target,
                              double window_factor = 2.0, const GoodPrimeOptions& opt = {});

// dim Sing(Z ∩ {a.x = 0}) computed inside the parametrized hyperplane.
// Scans F_q-points first and escalates to F_{q^2} when the rational
// singular locus is empty. flagged_ge1 reports a fiber threshold that
// suggests dimension >= 1.
struct SectionSingDim {
    int delta = -1;
    bool flagged_ge1 = false;
    bool from_extension = false;  // singular points seen only over F_{q^2}
};
SectionSingDim hyperplane_section_sing_dim(const std::vector<IntPoly>& forms,
                                           const std::vector<std::uint32_t>& a, std::uint64_t q,
                                           const EnumOptions& opt = {});

}  // namespace vdclab

#endif

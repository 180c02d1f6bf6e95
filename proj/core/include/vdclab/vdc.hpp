#ifndef VDCLAB_VDC_HPP
#define VDCLAB_VDC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vdclab/counting.hpp"
#include "vdclab/variety.hpp"

namespace vdclab {

// Prime-pair plan: target exponents from the closed optimization formulas,
// concrete primes near B^{e_p} and B^{e_q}, and the window constraints.
struct PrimePlan {
    unsigned n = 0, r = 0;
    std::int64_t b_requested = 0;
    std::int64_t b = 0;  // after the exact-identity adjustment p | 2b+1
    double e_p = 0, e_q = 0;
    BigRat e_p_exact, e_q_exact;
    double density_exponent = 0;        // n - 3r + r^2 (13n-5-3r)/D
    BigRat density_exponent_exact;
    double hypersurface_reference = 0;  // n - 3 + 15/(n+5), the r=1 benchmark
    double p_target = 0, q_target = 0;
    std::uint64_t p = 0, q = 0;
    bool strict_window_ok = false;  // 2p < 2b+1 < q - p
    bool exact_identity = false;
};

struct SelectPrimesOptions {
    bool relax_regime = false;    // allow n < 4r+2 (exploratory runs)
    bool exact_identity = true;   // adjust B so that p | 2B+1 (forces p odd)
    bool strict_window = false;   // require 2p < 2B+1 < q-p, else only p < 2B+1 < q
    const Instance* instance = nullptr;  // when set, p and q must be good primes for it
    double window_factor = 6.0;          // good-prime search window
    GoodPrimeOptions good;
};
PrimePlan select_primes(unsigned n, unsigned r, std::int64_t b,
                        const SelectPrimesOptions& opt = {});

// The differenced system f^y together with its classification over F_q:
// sigma = codim of the scheme cut by the mod-q leading forms of the f_i^y,
// and the singular dimension of that scheme when sigma == r.
struct DiffSystem {
    std::vector<IntPoly> polys;          // f_i^y, exact over Z
    std::vector<IntPoly> leading_mod_q;  // mod-q leading forms of the nonzero reductions
    int sigma = 0;
    int s_y = -2;          // dim Sing Z_y when sigma == r; -2 means not applicable
    bool all_zero = false;  // every f_i^y vanishes mod q
};
struct CensusOptions {
    EnumOptions en;
    DimOptions dim;
};
DiffSystem difference_system(const Instance& inst, std::uint64_t p,
                             const std::vector<std::int64_t>& y, std::uint64_t q,
                             const CensusOptions& opt = {});

// Delta(y): deviation of the differenced congruence count on the shrunken
// box from its expected value, as an exact rational with denominator q^r.
BigRat delta(const Instance& inst, std::int64_t b, std::uint64_t p, std::uint64_t q,
             const std::vector<std::int64_t>& y, const EnumOptions& opt = {});

struct DeltaEntry {
    std::vector<std::int64_t> y;
    BigRat value;
    int sigma = 0;
    int s_y = -2;
};

struct IdentityFlags {
    bool box_partition_exact = false;     // N = S + K #X(F_p)
    bool z_decomposition_exact = false;   // Zsum = sum Delta + p^n q^r K^2
    bool sigma_bounded_by_delta = false;  // Sigma <= sum Delta
    bool cauchy_inequality = false;       // S^2 <= #X(F_p) Sigma
    bool delta_support = false;           // Delta(y) = 0 for |y| >= (2B+1)/p
    bool all() const {
        return box_partition_exact && z_decomposition_exact && sigma_bounded_by_delta &&
               cauchy_inequality && delta_support;
    }
};

struct ErrorTerms {
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0, t6 = 0;
    double total = 0;
};
ErrorTerms error_term_budget(unsigned n, unsigned r, double b, double p, double q);

// Everything the box-census decomposition produces, self-verifying.
struct AuditReport {
    unsigned n = 0, r = 0;
    std::int64_t b = 0;
    std::uint64_t p = 0, q = 0;
    std::uint64_t seed = 0;
    std::string instance_key;  // stable digest of the defining polynomials

    BigInt n_count;        // N(X, B, pq), direct mod-pq route
    BigInt x_fp_count;     // #X(F_p)
    BigRat k_value;        // expected inner-sum value (2B+1)^n / (p^n q^r)
    BigRat s_value;        // S = sum over X(F_p) of (T_w - K)
    BigRat sigma_bracket;  // Sigma = sum over X(F_p) of (T_w - K)^2
    BigRat sigma_enlarged; // all (w, a) buckets; equals sum Delta exactly
    BigInt z_sum;          // Zsum = sum of squared bucket counts
    BigRat delta_sum;
    std::vector<DeltaEntry> delta_table;
    std::map<int, std::uint64_t> census_sigma;  // sigma -> #B_sigma
    std::map<int, std::uint64_t> census_s;      // s -> #{y in B_r : s(y) = s}

    BigRat main_term;  // (2B+1)^n / (p^r q^r)
    BigRat residual;   // N - main
    ErrorTerms error_terms;
    double residual_over_error = 0;

    IdentityFlags flags;
};

struct AuditOptions {
    EnumOptions en;
    CensusOptions census;
    bool with_census = true;       // classify every y (sigma, s) for the histograms
    bool with_delta_table = true;  // keep per-y deviations in the report
    std::uint64_t seed = 1;
};
AuditReport audit(const Instance& inst, std::int64_t b, std::uint64_t p, std::uint64_t q,
                  const AuditOptions& opt = {});

// The census alone: how often each codimension stratum and each singular
// dimension arises among the shifts, with the normalizing ratios.
struct StrataCensus {
    std::uint64_t total_y = 0;                  // #B = #{y : |y| < (2B+1)/p}
    std::map<int, std::uint64_t> sigma_hist;    // sigma -> count
    std::map<int, std::uint64_t> s_hist;        // s -> count within the top stratum
    std::map<int, double> sigma_ratio;          // count / (B/p)^sigma
    std::map<int, double> s_ratio;              // count / (B/p)^{n-s-1}
};
StrataCensus strata_census(const Instance& inst, std::int64_t b, std::uint64_t p, std::uint64_t q,
                           const CensusOptions& opt = {});

// General-B reduction: bracket B between multiples-of-p points B1 <= B <= B2
// and audit both ends.
struct BracketedAudit {
    AuditReport lower;
    AuditReport upper;
};
BracketedAudit audit_bracketed(const Instance& inst, std::int64_t b, std::uint64_t p,
                               std::uint64_t q, const AuditOptions& opt = {});

}  // namespace vdclab

#endif

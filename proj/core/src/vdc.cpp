#include "vdclab/vdc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdclab/expsum.hpp"

namespace vdclab {

namespace {

BigRat closed_form_denominator(unsigned n, unsigned r) {
    // D = n^2 + 4nr - n - r^2 - r
    BigInt nn = n, rr = r;
    return BigRat(nn * nn + 4 * nn * rr - nn - rr * rr - rr);
}

std::uint32_t residue_i64(std::int64_t v, std::uint64_t q) {
    std::int64_t m = static_cast<std::int64_t>(q);
    return static_cast<std::uint32_t>(((v % m) + m) % m);
}

// nearest prime to target satisfying pred, scanning outward; ties resolve
// to the smaller candidate
template <typename Pred>
std::uint64_t nearest_prime_such_that(double target, Pred&& pred, std::uint64_t floor_val = 2,
                                      std::uint64_t max_radius = 100000) {
    std::int64_t base = static_cast<std::int64_t>(std::llround(target));
    for (std::uint64_t d = 0; d <= max_radius; ++d) {
        for (int sgn : {-1, +1}) {
            if (d == 0 && sgn > 0) continue;
            std::int64_t c = base + sgn * static_cast<std::int64_t>(d);
            if (c < static_cast<std::int64_t>(floor_val)) continue;
            std::uint64_t cu = static_cast<std::uint64_t>(c);
            if (is_prime_u64(cu) && pred(cu)) return cu;
        }
    }
    throw SearchExhausted("no admissible prime near " + std::to_string(target));
}

}  // namespace

PrimePlan select_primes(unsigned n, unsigned r, std::int64_t b, const SelectPrimesOptions& opt) {
    if (r < 1 || r >= n) throw ContractError("select_primes: need 1 <= r < n");
    if (b < 1) throw ContractError("select_primes: B must be >= 1");
    if (n < 4 * r + 2 && !opt.relax_regime)
        throw ContractError("select_primes: n < 4r+2 is outside the uniform-exponent regime "
                            "(pass the relax flag for exploratory runs)");

    PrimePlan plan;
    plan.n = n;
    plan.r = r;
    plan.b_requested = b;
    plan.exact_identity = opt.exact_identity;

    BigRat D = closed_form_denominator(n, r);
    BigInt nn = n, rr = r;
    plan.e_p_exact = BigRat(1) - BigRat(5 * nn * rr - rr * rr - 5 * rr) / D;
    plan.e_q_exact = BigRat(2) - BigRat(2 * (4 * nn * rr - rr * rr)) / D;
    plan.density_exponent_exact =
        BigRat(nn - 3 * rr) + BigRat(rr * rr * (13 * nn - 5 - 3 * rr)) / D;
    plan.e_p = to_double(plan.e_p_exact);
    plan.e_q = to_double(plan.e_q_exact);
    plan.density_exponent = to_double(plan.density_exponent_exact);
    plan.hypersurface_reference =
        static_cast<double>(n) - 3.0 + 15.0 / (static_cast<double>(n) + 5.0);

    plan.p_target = std::pow(static_cast<double>(b), plan.e_p);
    plan.q_target = std::pow(static_cast<double>(b), plan.e_q);

    GoodPrimeOptions gopt = opt.good;
    gopt.require_odd = opt.exact_identity;
    auto good_for_instance = [&](std::uint64_t cand) {
        if (opt.exact_identity && cand == 2) return false;
        if (!opt.instance) return true;
        try {
            return find_good_prime(*opt.instance, cand, 1.0 + 1e-9, gopt) == cand;
        } catch (const SearchExhausted&) {
            return false;
        }
    };

    plan.p = nearest_prime_such_that(plan.p_target, good_for_instance,
                                     opt.exact_identity ? 3 : 2);

    // exact-identity mode: move B to the nearest admissible B' with
    // p | 2B'+1 and p < 2B'+1
    plan.b = b;
    if (opt.exact_identity) {
        std::int64_t p = static_cast<std::int64_t>(plan.p);
        std::int64_t rem = (p - 1) / 2;  // B' = rem (mod p) makes 2B'+1 = 0 (mod p)
        auto admissible = [&](std::int64_t cand) {
            return cand >= 1 && p < 2 * cand + 1;
        };
        std::int64_t best = -1;
        for (std::int64_t d = 0; d < 2 * p + 2; ++d) {
            for (std::int64_t cand : {b - d, b + d}) {
                if (((cand % p) + p) % p == rem && admissible(cand)) {
                    best = cand;
                    break;
                }
            }
            if (best >= 0) break;
        }
        if (best < 0)
            throw ContractError("select_primes: no admissible B near " + std::to_string(b) +
                                " for p = " + std::to_string(plan.p) +
                                "; the smallest usable B is " + std::to_string(plan.p));
        plan.b = best;
    } else if (static_cast<std::int64_t>(plan.p) >= 2 * plan.b + 1) {
        throw ContractError("select_primes: p >= 2B+1; the smallest usable B is " +
                            std::to_string(plan.p));
    }

    std::uint64_t q_min = static_cast<std::uint64_t>(2 * plan.b + 1) +
                          (opt.strict_window ? plan.p : 0) + 1;
    double q_goal = std::max(plan.q_target, static_cast<double>(q_min));
    plan.q = nearest_prime_such_that(
        q_goal, [&](std::uint64_t cand) {
            return cand >= q_min && cand != plan.p && good_for_instance(cand);
        },
        q_min);

    plan.strict_window_ok = (2 * plan.p < static_cast<std::uint64_t>(2 * plan.b + 1)) &&
                            (static_cast<std::uint64_t>(2 * plan.b + 1) + plan.p < plan.q);
    if (opt.strict_window && !plan.strict_window_ok)
        throw ContractError("select_primes: the window 2p < 2B+1 < q-p is unsatisfiable at B = " +
                            std::to_string(plan.b) + "; the smallest usable B is " +
                            std::to_string(plan.p));
    return plan;
}

DiffSystem difference_system(const Instance& inst, std::uint64_t p,
                             const std::vector<std::int64_t>& y, std::uint64_t q,
                             const CensusOptions& opt) {
    const unsigned n = inst.n();
    if (y.size() != n) throw ContractError("difference_system: shift dimension mismatch");

    DiffSystem out;
    std::vector<BigInt> yb(n);
    for (unsigned i = 0; i < n; ++i) yb[i] = y[i];
    for (const auto& f : inst.polys()) out.polys.push_back(difference_poly(f, BigInt(p), yb));

    // mod-q leading forms of the nonzero reductions classify the shift
    bool any_live = false;
    bool any_constant = false;
    for (const auto& fy : out.polys) {
        ReducedPoly rp(fy, q);
        if (rp.is_zero()) continue;
        any_live = true;
        IntPoly lifted = rp.lift();
        IntPoly lf = leading_form(lifted);
        if (lf.degree() == 0)
            any_constant = true;
        else
            out.leading_mod_q.push_back(lf);
    }
    out.all_zero = !any_live;

    const unsigned r = inst.r();
    if (!any_live) {
        out.sigma = 0;  // Z_y is the whole space
        return out;
    }
    if (any_constant) {
        out.sigma = static_cast<int>(n);  // a unit among the forms empties the scheme
        return out;
    }
    int dim = fast_projective_dimension(out.leading_mod_q, q, n, opt.dim);
    out.sigma = static_cast<int>(n) - 1 - dim;

    if (out.sigma == static_cast<int>(r) && out.leading_mod_q.size() == r) {
        FieldCtx Fq(q, 1);
        auto sing = singular_points(out.leading_mod_q, Fq, opt.en);
        if (sing.points.empty()) {
            out.s_y = -1;
        } else {
            // threshold dimension of the explicit singular point set
            double acc = 1, size = 1;
            int sdim = 0;
            for (unsigned s = 1; s < n; ++s) {
                size *= static_cast<double>(q);
                acc += size;
                if (static_cast<double>(sing.points.size()) >= acc / 2.0) sdim = static_cast<int>(s);
            }
            out.s_y = sdim;
        }
    }
    return out;
}

BigRat delta(const Instance& inst, std::int64_t b, std::uint64_t p, std::uint64_t q,
             const std::vector<std::int64_t>& y, const EnumOptions& opt) {
    const unsigned n = inst.n();
    if (y.size() != n) throw ContractError("delta: shift dimension mismatch");
    if (b < 0) throw ContractError("delta: negative B");

    // B_y = [-B,B]^n intersected with its shift by -py
    std::vector<std::int64_t> lo(n), hi(n);
    BigInt box_count = 1;
    for (unsigned i = 0; i < n; ++i) {
        std::int64_t shift = static_cast<std::int64_t>(p) * y[i];
        lo[i] = std::max(-b, -b - shift);
        hi[i] = std::min(b, b - shift);
        std::int64_t len = hi[i] - lo[i] + 1;
        box_count *= BigInt(len > 0 ? len : 0);
    }
    BigInt qr = pow_bigint(BigInt(q), inst.r());
    if (box_count == 0) return BigRat(0);

    std::vector<BigInt> yb(n);
    for (unsigned i = 0; i < n; ++i) yb[i] = y[i];
    std::vector<IntPoly> diffs;
    for (const auto& f : inst.polys()) diffs.push_back(difference_poly(f, BigInt(p), yb));
    auto rps = reduce_system(diffs, q);
    std::vector<ReducedPoly> live;
    bool impossible = false;
    for (auto& rp : rps) {
        if (rp.is_zero()) continue;
        if (rp.degree() == 0) impossible = true;
        live.push_back(std::move(rp));
    }

    BigInt on = 0;
    if (!impossible) {
        if (live.empty()) {
            on = box_count;
        } else {
            std::vector<std::int64_t> x = lo;
            std::vector<std::uint32_t> res(n);
            for (unsigned i = 0; i < n; ++i) res[i] = residue_i64(x[i], q);
            while (true) {
                bool zero = true;
                for (const auto& rp : live)
                    if (rp.eval_prime(res.data(), q) != 0) {
                        zero = false;
                        break;
                    }
                if (zero) ++on;
                int i = static_cast<int>(n) - 1;
                for (; i >= 0; --i) {
                    if (x[i] < hi[i]) {
                        ++x[i];
                        res[i] = (res[i] + 1 == q) ? 0 : res[i] + 1;
                        break;
                    }
                    x[i] = lo[i];
                    res[i] = residue_i64(x[i], q);
                }
                if (i < 0) break;
            }
        }
    }
    return BigRat(on) - BigRat(box_count, qr);
}

ErrorTerms error_term_budget(unsigned n, unsigned r, double b, double p, double q) {
    ErrorTerms e;
    double lq = std::log(q);
    double logpow = std::pow(lq, static_cast<double>(n) / 2.0);
    double nn = n, rr = r;
    e.t1 = std::pow(b, (nn + 1) / 2) * std::pow(p, -rr / 2) * std::pow(q, (nn - rr - 1) / 4) * logpow;
    e.t2 = std::pow(b, (nn + 1) / 2) * std::pow(p, (nn - 2 * rr) / 2) * std::pow(q, -0.25) * logpow;
    e.t3 = std::pow(b, nn / 2) * std::pow(p, -rr / 2) * std::pow(q, (nn - rr) / 4) * logpow;
    e.t4 = std::pow(b, nn / 2) * std::pow(p, (nn - rr) / 2) * logpow;
    e.t5 = std::pow(b, nn) * std::pow(p, -(nn + rr - 1) / 2) * std::pow(q, -rr);
    e.t6 = std::pow(b, nn - 1) * std::pow(p, -rr + 1) * std::pow(q, -rr);
    e.total = e.t1 + e.t2 + e.t3 + e.t4 + e.t5 + e.t6;
    return e;
}

namespace {

std::string instance_key(const Instance& inst) {
    std::ostringstream os;
    os << inst.n() << "|" << inst.r();
    for (const auto& f : inst.polys()) os << "|" << f.to_string();
    std::ostringstream hex;
    hex << std::hex << fnv1a64(os.str());
    return hex.str();
}

}  // namespace

AuditReport audit(const Instance& inst, std::int64_t b, std::uint64_t p, std::uint64_t q,
                  const AuditOptions& opt) {
    const unsigned n = inst.n();
    const unsigned r = inst.r();
    if (!is_prime_u64(p) || !is_prime_u64(q) || p == q)
        throw ContractError("audit: p and q must be distinct primes");
    const std::int64_t side = 2 * b + 1;
    if (!(static_cast<std::int64_t>(p) < side && side < static_cast<std::int64_t>(q)))
        throw ContractError("audit: need p < 2B+1 < q");
    if (side % static_cast<std::int64_t>(p) != 0)
        throw ContractError("audit: exact-identity mode requires p | 2B+1");

    AuditReport rep;
    rep.n = n;
    rep.r = r;
    rep.b = b;
    rep.p = p;
    rep.q = q;
    rep.seed = opt.seed;
    rep.instance_key = instance_key(inst);

    BoxZ box = BoxZ::symmetric(n, b);
    rep.n_count = count_box_mod(inst, box, p * q, opt.en);

    // bucket pass: joint residue histogram over (x mod p, f(x) mod q)
    std::uint64_t pn = 1;
    for (unsigned i = 0; i < n; ++i) pn *= p;
    std::uint64_t qr = 1;
    for (unsigned i = 0; i < r; ++i) qr *= q;
    if (pn * qr > 50'000'000ull)
        throw BudgetError("audit: residue histogram p^n q^r is too large for this build");
    std::vector<std::uint32_t> bucket(pn * qr, 0);
    auto rps_q = reduce_system(inst.polys(), q);
    std::vector<std::uint32_t> res_p(n), res_q(n);
    box.for_each([&](const std::vector<std::int64_t>& x) {
        for (unsigned i = 0; i < n; ++i) {
            res_p[i] = residue_i64(x[i], p);
            res_q[i] = residue_i64(x[i], q);
        }
        std::uint64_t wi = 0;
        for (unsigned i = 0; i < n; ++i) wi = wi * p + res_p[i];
        std::uint64_t ai = 0;
        for (unsigned i = 0; i < r; ++i) ai = ai * q + rps_q[i].eval_prime(res_q.data(), q);
        ++bucket[wi * qr + ai];
    });

    // membership of w in X(F_p)
    PointSet xp = affine_points(inst.polys(), p, opt.en);
    rep.x_fp_count = xp.points.size();
    std::vector<char> in_x(pn, 0);
    for (const auto& w : xp.points) {
        std::uint64_t wi = 0;
        for (unsigned i = 0; i < n; ++i) wi = wi * p + w[i];
        in_x[wi] = 1;
    }

    BigInt side_n = pow_bigint(BigInt(side), n);
    rep.k_value = BigRat(side_n, BigInt(pn) * BigInt(qr));

    BigRat s_acc = 0, sigma_acc = 0, sigma_all = 0;
    BigInt z_acc = 0;
    BigInt n_via_buckets = 0;
    for (std::uint64_t wi = 0; wi < pn; ++wi) {
        for (std::uint64_t ai = 0; ai < qr; ++ai) {
            std::uint32_t c = bucket[wi * qr + ai];
            BigRat dev = BigRat(c) - rep.k_value;
            sigma_all += dev * dev;
            z_acc += BigInt(c) * BigInt(c);
            if (ai == 0 && in_x[wi]) {
                n_via_buckets += c;
                s_acc += dev;
                sigma_acc += dev * dev;
            }
        }
    }
    rep.s_value = s_acc;
    rep.sigma_bracket = sigma_acc;
    rep.sigma_enlarged = sigma_all;
    rep.z_sum = z_acc;

    // deviation table over the support |y| < (2B+1)/p, plus a zero shell
    const std::int64_t m_shells = side / static_cast<std::int64_t>(p);  // y range: |y| <= m-1
    std::vector<std::int64_t> y(n, -(m_shells - 1));
    BigRat delta_acc = 0;
    bool support_ok = true;
    if (m_shells >= 1) {
        while (true) {
            BigRat d = delta(inst, b, p, q, y, opt.en);
            delta_acc += d;
            if (opt.with_delta_table || opt.with_census) {
                DeltaEntry entry;
                entry.y = y;
                entry.value = d;
                if (opt.with_census) {
                    DiffSystem ds = difference_system(inst, p, y, q, opt.census);
                    entry.sigma = ds.sigma;
                    entry.s_y = ds.s_y;
                    ++rep.census_sigma[ds.sigma];
                    if (ds.sigma == static_cast<int>(r)) ++rep.census_s[ds.s_y];
                }
                if (opt.with_delta_table) rep.delta_table.push_back(std::move(entry));
            }
            int i = static_cast<int>(n) - 1;
            for (; i >= 0; --i) {
                if (y[i] < m_shells - 1) {
                    ++y[i];
                    break;
                }
                y[i] = -(m_shells - 1);
            }
            if (i < 0) break;
        }
    }
    rep.delta_sum = delta_acc;

    // support law: the first shell outside the range must vanish
    {
        std::vector<std::int64_t> ys(n, 0);
        ys[0] = m_shells;
        support_ok = support_ok && (delta(inst, b, p, q, ys, opt.en) == 0);
        std::vector<std::int64_t> yc(n, m_shells);
        support_ok = support_ok && (delta(inst, b, p, q, yc, opt.en) == 0);
        ys[0] = -m_shells;
        support_ok = support_ok && (delta(inst, b, p, q, ys, opt.en) == 0);
    }

    rep.main_term = BigRat(side_n, pow_bigint(BigInt(p), r) * pow_bigint(BigInt(q), r));
    rep.residual = BigRat(rep.n_count) - rep.main_term;
    rep.error_terms = error_term_budget(n, r, static_cast<double>(b), static_cast<double>(p),
                                        static_cast<double>(q));
    rep.residual_over_error = std::abs(to_double(rep.residual)) / rep.error_terms.total;

    BigRat pnqr = BigRat(BigInt(pn) * BigInt(qr));
    rep.flags.box_partition_exact =
        (BigRat(rep.n_count) == rep.s_value + rep.k_value * BigRat(rep.x_fp_count)) &&
        (n_via_buckets == rep.n_count);
    rep.flags.z_decomposition_exact =
        (BigRat(rep.z_sum) == rep.delta_sum + pnqr * rep.k_value * rep.k_value);
    rep.flags.sigma_bounded_by_delta = (rep.sigma_bracket <= rep.delta_sum);
    rep.flags.cauchy_inequality =
        (rep.s_value * rep.s_value <= BigRat(rep.x_fp_count) * rep.sigma_bracket);
    rep.flags.delta_support = support_ok;
    return rep;
}

StrataCensus strata_census(const Instance& inst, std::int64_t b, std::uint64_t p, std::uint64_t q,
                           const CensusOptions& opt) {
    const unsigned n = inst.n();
    const std::int64_t side = 2 * b + 1;
    if (side % static_cast<std::int64_t>(p) != 0)
        throw ContractError("strata_census: exact-identity mode requires p | 2B+1");
    const std::int64_t m_shells = side / static_cast<std::int64_t>(p);

    StrataCensus out;
    std::vector<std::int64_t> y(n, -(m_shells - 1));
    if (m_shells >= 1) {
        while (true) {
            ++out.total_y;
            DiffSystem ds = difference_system(inst, p, y, q, opt);
            ++out.sigma_hist[ds.sigma];
            if (ds.sigma == static_cast<int>(inst.r())) ++out.s_hist[ds.s_y];
            int i = static_cast<int>(n) - 1;
            for (; i >= 0; --i) {
                if (y[i] < m_shells - 1) {
                    ++y[i];
                    break;
                }
                y[i] = -(m_shells - 1);
            }
            if (i < 0) break;
        }
    }
    double bp = static_cast<double>(b) / static_cast<double>(p);
    for (const auto& [sigma, cnt] : out.sigma_hist)
        out.sigma_ratio[sigma] =
            static_cast<double>(cnt) / std::pow(bp, static_cast<double>(sigma));
    for (const auto& [s, cnt] : out.s_hist)
        out.s_ratio[s] = static_cast<double>(cnt) /
                         std::pow(bp, static_cast<double>(n) - static_cast<double>(s) - 1.0);
    return out;
}

BracketedAudit audit_bracketed(const Instance& inst, std::int64_t b, std::uint64_t p,
                               std::uint64_t q, const AuditOptions& opt) {
    const std::int64_t pp = static_cast<std::int64_t>(p);
    std::int64_t rem = (pp - 1) / 2;
    std::int64_t b1 = b, b2 = b;
    while (b1 >= 1 && (((b1 % pp) + pp) % pp != rem || !(pp < 2 * b1 + 1))) --b1;
    while (((b2 % pp) + pp) % pp != rem) ++b2;
    if (b1 < 1) throw ContractError("audit_bracketed: no admissible lower B");
    BracketedAudit out{audit(inst, b1, p, q, opt), audit(inst, b2, p, q, opt)};
    return out;
}

}  // namespace vdclab

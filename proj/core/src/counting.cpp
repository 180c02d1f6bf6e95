#include "vdclab/counting.hpp"

#include <algorithm>
#include <cmath>

#include "vdclab/parallel.hpp"

namespace vdclab {

BoxZ::BoxZ(std::vector<std::int64_t> center, std::vector<std::int64_t> half)
    : center_(std::move(center)), half_(std::move(half)) {
    if (center_.size() != half_.size() || center_.empty())
        throw ContractError("BoxZ: center/half length mismatch");
    for (auto h : half_)
        if (h < 0) throw ContractError("BoxZ: negative half-width");
}

BoxZ BoxZ::symmetric(unsigned n, std::int64_t b) {
    if (b < 0) throw ContractError("BoxZ: negative B");
    return BoxZ(std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, b));
}

BigInt BoxZ::point_count() const {
    BigInt c = 1;
    for (unsigned i = 0; i < n(); ++i) c *= BigInt(side(i));
    return c;
}

std::uint64_t BoxZ::point_count_checked(std::uint64_t budget) const {
    BigInt c = point_count();
    if (c > BigInt(budget))
        throw BudgetError("box enumeration of " + c.str() + " points exceeds the budget; raise --budget");
    return c.convert_to<std::uint64_t>();
}

bool BoxZ::fits_modulus(std::uint64_t m) const {
    for (unsigned i = 0; i < n(); ++i)
        if (static_cast<std::uint64_t>(side(i)) > m) return false;
    return true;
}

std::int64_t BoxZ::max_abs_coordinate() const {
    std::int64_t b = 0;
    for (unsigned i = 0; i < n(); ++i)
        b = std::max({b, static_cast<std::int64_t>(std::llabs(lo(i))),
                      static_cast<std::int64_t>(std::llabs(hi(i)))});
    return b;
}

void BoxZ::for_each(const std::function<void(const std::vector<std::int64_t>&)>& fn) const {
    std::vector<std::int64_t> x(n());
    for (unsigned i = 0; i < n(); ++i) x[i] = lo(i);
    while (true) {
        fn(x);
        int i = static_cast<int>(n()) - 1;
        for (; i >= 0; --i) {
            if (x[i] < hi(i)) {
                ++x[i];
                break;
            }
            x[i] = lo(i);
        }
        if (i < 0) break;
    }
}

namespace {

// exact evaluation in 128-bit arithmetic, valid once eval_bound fits
__int128 eval_i128(const IntPoly& p, const std::vector<std::int64_t>& x) {
    __int128 acc = 0;
    for (const auto& [e, c] : p.terms()) {
        __int128 t = c.convert_to<std::int64_t>();
        for (unsigned i = 0; i < p.n_vars(); ++i)
            for (std::uint32_t j = 0; j < e[i]; ++j) t *= x[i];
        acc += t;
    }
    return acc;
}

bool i64_eval_safe(const std::vector<IntPoly>& polys, const BoxZ& box) {
    BigInt bound = BigInt(box.max_abs_coordinate());
    BigInt lim = BigInt(1) << 62;
    for (const auto& p : polys) {
        if (p.eval_bound(bound) >= lim) return false;
        if (p.height() >= lim) return false;
    }
    return true;
}

}  // namespace

std::uint64_t count_box(const Instance& inst, const BoxZ& box, const EnumOptions& opt) {
    if (box.n() != inst.n()) throw ContractError("count_box: box dimension mismatch");
    box.point_count_checked(opt.budget);
    const auto& polys = inst.polys();

    std::uint64_t count = 0;
    if (i64_eval_safe(polys, box)) {
        box.for_each([&](const std::vector<std::int64_t>& x) {
            for (const auto& p : polys)
                if (eval_i128(p, x) != 0) return;
            ++count;
        });
    } else {
        std::vector<BigInt> xb(box.n());
        box.for_each([&](const std::vector<std::int64_t>& x) {
            for (unsigned i = 0; i < box.n(); ++i) xb[i] = x[i];
            for (const auto& p : polys)
                if (p.eval(xb) != 0) return;
            ++count;
        });
    }
    return count;
}

namespace {

void check_box_modulus(const BoxZ& box, std::uint64_t m) {
    if (m < 2) throw ContractError("count_box_mod: modulus must be >= 2");
    if (!box.fits_modulus(m))
        throw ContractError("count_box_mod: a box side exceeds the modulus (a residue class "
                            "would repeat)");
    // m must be prime or a product of two distinct primes
    std::uint64_t t = m;
    std::vector<std::uint64_t> factors;
    for (std::uint64_t d = 2; d * d <= t && factors.size() <= 2; ++d) {
        while (t % d == 0) {
            factors.push_back(d);
            t /= d;
        }
    }
    if (t > 1) factors.push_back(t);
    bool ok = factors.size() == 1 || (factors.size() == 2 && factors[0] != factors[1]);
    if (!ok) throw ContractError("count_box_mod: modulus must be prime or a product of two "
                                 "distinct primes");
}

}  // namespace

std::uint64_t count_box_mod(const std::vector<IntPoly>& polys, const BoxZ& box, std::uint64_t m,
                            const EnumOptions& opt) {
    const unsigned n = box.n();
    for (const auto& p : polys)
        if (p.n_vars() != n) throw ContractError("count_box_mod: dimension mismatch");
    check_box_modulus(box, m);
    box.point_count_checked(opt.budget);

    auto rps = reduce_system(polys, m);
    std::vector<ReducedPoly> live;
    for (auto& rp : rps) {
        if (rp.is_zero()) continue;
        if (rp.degree() == 0) return 0;
        live.push_back(std::move(rp));
    }
    if (live.empty()) return box.point_count().convert_to<std::uint64_t>();

    // odometer with per-axis residues so the modular reductions are O(1)
    // per step; parallel over the leading axis
    struct Acc {
        std::uint64_t count = 0;
    };
    const std::uint64_t lead_len = static_cast<std::uint64_t>(box.side(0));
    auto body = [&](Acc& acc, std::uint64_t t0_lo, std::uint64_t t0_hi) {
        std::vector<std::int64_t> x(n);
        std::vector<std::uint32_t> res(n);
        for (std::uint64_t t0 = t0_lo; t0 < t0_hi; ++t0) {
            x[0] = box.lo(0) + static_cast<std::int64_t>(t0);
            for (unsigned i = 1; i < n; ++i) x[i] = box.lo(i);
            for (unsigned i = 0; i < n; ++i) {
                std::int64_t mm = static_cast<std::int64_t>(m);
                res[i] = static_cast<std::uint32_t>(((x[i] % mm) + mm) % mm);
            }
            while (true) {
                bool zero = true;
                for (const auto& rp : live) {
                    if (rp.eval_prime(res.data(), m) != 0) {
                        zero = false;
                        break;
                    }
                }
                if (zero) ++acc.count;
                int i = static_cast<int>(n) - 1;
                for (; i >= 1; --i) {
                    if (x[i] < box.hi(i)) {
                        ++x[i];
                        res[i] = (res[i] + 1 == m) ? 0 : res[i] + 1;
                        break;
                    }
                    x[i] = box.lo(i);
                    std::int64_t mm = static_cast<std::int64_t>(m);
                    res[i] = static_cast<std::uint32_t>(((x[i] % mm) + mm) % mm);
                }
                if (i < 1) break;
            }
        }
    };
    Acc total = parallel_reduce<Acc>(lead_len, opt.threads, body,
                                     [](Acc& t, const Acc& p) { t.count += p.count; });
    return total.count;
}

std::uint64_t count_box_mod(const Instance& inst, const BoxZ& box, std::uint64_t m,
                            const EnumOptions& opt) {
    return count_box_mod(inst.polys(), box, m, opt);
}

HooleyResidual hooley_deligne_residual(const Instance& inst, std::uint64_t q,
                                       const GeometryOptions& opt) {
    const unsigned n = inst.n();
    const unsigned r = inst.r();
    if (!is_prime_u64(q)) throw ContractError("hooley_deligne_residual: q must be prime");

    HooleyResidual out;
    out.q = q;
    FieldCtx Fq(q, 1);
    out.count = count_points(inst.polys(), Fq, CountMode::Affine, opt.en);

    if (n == r) {
        // zero-dimensional regime: count bounded by the degree product
        out.bezout_regime = true;
        BigInt deg_bound = 1;
        for (const auto& f : inst.polys()) deg_bound *= f.degree();
        if (out.count > deg_bound)
            throw HypothesisError("hooley_deligne_residual: count exceeds the degree bound");
        out.main = out.count;
        out.residual = 0;
        return out;
    }

    // projective closure: homogenizations G_i in P^n; its hyperplane
    // section at infinity is the leading-form scheme in P^{n-1}
    std::vector<IntPoly> closure;
    closure.reserve(r);
    for (const auto& f : inst.polys()) closure.push_back(homogenize(f));
    int dim_y = projective_dimension(closure, q, n + 1, opt.dim);
    if (dim_y != static_cast<int>(n - r))
        throw HypothesisError("hooley_deligne_residual: projective closure is not a complete "
                              "intersection of codimension r (dim = " + std::to_string(dim_y) + ")");
    int dim_z = projective_dimension(inst.leading_forms(), q, n, opt.dim);
    if (dim_z != dim_y - 1)
        throw HypothesisError("hooley_deligne_residual: scheme at infinity has dim " +
                              std::to_string(dim_z) + ", expected dim Y - 1 = " +
                              std::to_string(dim_y - 1));
    int s = dim_z == -1 ? -1 : singular_dimension(inst.leading_forms(), q, n, opt.dim);
    if (s > dim_z) s = dim_z;
    if (dim_z >= 0 && s == dim_z)
        throw HypothesisError("hooley_deligne_residual: scheme at infinity is singular "
                              "everywhere (s = dim Z)");
    out.s = s;

    out.main = pow_bigint(BigInt(q), n - r);
    out.residual = out.count - out.main;
    double expo = (static_cast<double>(n) - r + 2 + s) / 2.0;
    out.bound = std::pow(static_cast<double>(q), expo);
    out.ratio = std::abs(to_double(out.residual)) / out.bound;
    return out;
}

// --- weights ---

namespace {

// axis maxima M_j of |phi^(j)| with phi(u) = exp(-c/(1-u^2)): the j-th
// derivative is P_j(u)/(1-u^2)^(2j) * phi(u) with the polynomial recurrence
// P_{j+1} = (P_j'(1-u^2) + 4j u P_j)(1-u^2) - 2cu P_j.
std::vector<double> axis_derivative_maxima(double c, unsigned max_order) {
    std::vector<std::vector<double>> p(max_order + 1);
    p[0] = {1.0};
    auto deriv = [](const std::vector<double>& a) {
        std::vector<double> d(a.size() > 1 ? a.size() - 1 : 1, 0.0);
        for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<double>(i);
        return d;
    };
    auto mul = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> r(a.size() + b.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return r;
    };
    auto add = [](std::vector<double> a, const std::vector<double>& b) {
        if (b.size() > a.size()) a.resize(b.size(), 0.0);
        for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
        return a;
    };
    const std::vector<double> one_minus_u2 = {1.0, 0.0, -1.0};
    for (unsigned j = 0; j + 1 <= max_order; ++j) {
        std::vector<double> term1 = mul(add(mul(deriv(p[j]), one_minus_u2),
                                            mul(p[j], {0.0, 4.0 * static_cast<double>(j)})),
                                        one_minus_u2);
        std::vector<double> term2 = mul(p[j], {0.0, -2.0 * c});
        p[j + 1] = add(std::move(term1), term2);
    }

    std::vector<double> maxima(max_order + 1, 0.0);
    const int grid = 10000;
    for (int g = 0; g <= grid; ++g) {
        double u = -1.0 + 2.0 * static_cast<double>(g) / grid;
        double w = 1.0 - u * u;
        if (w <= 1e-12) continue;
        for (unsigned j = 0; j <= max_order; ++j) {
            double pv = 0.0;
            for (std::size_t i = p[j].size(); i-- > 0;) pv = pv * u + p[j][i];
            // log-space to survive the pole/exponential cancellation
            double lv = std::log(std::abs(pv) + 1e-300) - 2.0 * j * std::log(w) - c / w;
            maxima[j] = std::max(maxima[j], std::exp(lv));
        }
    }
    return maxima;
}

}  // namespace

BumpWeight::BumpWeight(double support_halfwidth, unsigned sharpness)
    : L_(support_halfwidth), sharpness_(sharpness) {
    if (L_ <= 0) throw ContractError("BumpWeight: support half-width must be positive");
    if (sharpness_ < 1) throw ContractError("BumpWeight: sharpness must be >= 1");
    axis_max_ = axis_derivative_maxima(1.0 / static_cast<double>(sharpness_), kMaxDerivativeOrder);
}

double BumpWeight::profile(double u) const {
    double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (static_cast<double>(sharpness_) * (1.0 - u2)));
}

double BumpWeight::value(const std::vector<double>& t) const {
    double w = 1.0;
    for (double ti : t) {
        w *= profile(ti / L_);
        if (w == 0.0) return 0.0;
    }
    return w;
}

double BumpWeight::derivative_bound(unsigned k, unsigned n) const {
    if (k > kMaxDerivativeOrder)
        throw ContractError("BumpWeight: derivative order beyond the tabulated range");
    if (n == 0) throw ContractError("BumpWeight: n must be positive");
    // max over compositions k_1 + ... + k_n = k of prod M_{k_i} / L^k
    std::vector<double> best(k + 1, 0.0);
    best[0] = 1.0;
    for (unsigned axis = 0; axis < n; ++axis) {
        std::vector<double> next(k + 1, 0.0);
        for (unsigned used = 0; used <= k; ++used) {
            if (best[used] == 0.0) continue;
            for (unsigned j = 0; used + j <= k; ++j)
                next[used + j] = std::max(next[used + j], best[used] * axis_max_[j]);
        }
        best = std::move(next);
    }
    return best[k] / std::pow(L_, static_cast<double>(k));
}

// --- weighted counts ---

namespace {

// iterate x over the integer points of [lo_i, hi_i] and accumulate
void for_each_int_box(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi,
                      const std::function<void(const std::vector<std::int64_t>&)>& fn) {
    const unsigned n = static_cast<unsigned>(lo.size());
    for (unsigned i = 0; i < n; ++i)
        if (lo[i] > hi[i]) return;
    std::vector<std::int64_t> x = lo;
    while (true) {
        fn(x);
        int i = static_cast<int>(n) - 1;
        for (; i >= 0; --i) {
            if (x[i] < hi[i]) {
                ++x[i];
                break;
            }
            x[i] = lo[i];
        }
        if (i < 0) break;
    }
}

double kahan_total(const std::vector<double>& vals) {
    double s = 0, c = 0;
    for (double v : vals) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    return s + c;
}

}  // namespace

double weighted_count(const std::vector<IntPoly>& polys, const BumpWeight& weight, double b,
                      std::uint64_t q) {
    if (b < 1.0) throw ContractError("weighted_count: B must be >= 1");
    unsigned n = polys.empty() ? 0 : polys[0].n_vars();
    if (n == 0) throw ContractError("weighted_count: empty variable set");
    auto rps = reduce_system(polys, q);

    // strict support |x_i| < B*L on integers
    std::int64_t reach = static_cast<std::int64_t>(std::ceil(b * weight.support())) - 1;
    std::vector<std::int64_t> lo(n, -reach), hi(n, reach);
    std::vector<std::uint32_t> res(n);
    std::vector<double> t(n);
    double s = 0, comp = 0;
    for_each_int_box(lo, hi, [&](const std::vector<std::int64_t>& x) {
        std::int64_t mm = static_cast<std::int64_t>(q);
        for (unsigned i = 0; i < n; ++i)
            res[i] = static_cast<std::uint32_t>(((x[i] % mm) + mm) % mm);
        for (const auto& rp : rps)
            if (rp.eval_prime(res.data(), q) != 0) return;
        for (unsigned i = 0; i < n; ++i) t[i] = static_cast<double>(x[i]) / b;
        double v = weight.value(t);
        double tt = s + v;
        if (std::abs(s) >= std::abs(v))
            comp += (s - tt) + v;
        else
            comp += (v - tt) + s;
        s = tt;
    });
    return s + comp;
}

WeightedResidual weighted_residual(const Instance& inst, const BumpWeight& weight, double b,
                                   std::uint64_t q, const WeightedOptions& opt) {
    const unsigned n = inst.n();
    const unsigned r = inst.r();
    if (b < 1.0) throw ContractError("weighted_residual: B must be >= 1");
    if (b > opt.b_over_q_max * static_cast<double>(q))
        throw ContractError("weighted_residual: B exceeds the configured multiple of q");
    for (const auto& lf : inst.leading_forms())
        if (lf.degree() < 2)
            throw ContractError("weighted_residual: leading forms must have degree >= 2");

    WeightedResidual out;
    if (opt.verify_geometry) {
        int dim_z = projective_dimension(inst.leading_forms(), q, n, opt.geom.dim);
        if (dim_z != static_cast<int>(n) - 1 - static_cast<int>(r))
            throw HypothesisError("weighted_residual: dim Z_q != n-1-r");
        out.s = dim_z == -1 ? -1 : singular_dimension(inst.leading_forms(), q, n, opt.geom.dim);
        if (out.s > dim_z) out.s = dim_z;
    }

    out.lhs = weighted_count(inst.polys(), weight, b, q);
    double full = weighted_count({IntPoly(n)}, weight, b, q);
    out.main = full / std::pow(static_cast<double>(q), static_cast<double>(r));
    out.residual = out.lhs - out.main;
    if (n > 4) {
        out.error_term_skipped = true;
    } else {
        double d2n = weight.derivative_bound(2 * n, n);
        out.error_term_bound = d2n * std::pow(b, out.s + 1.0) *
                               std::pow(static_cast<double>(q),
                                        (static_cast<double>(n) - r - out.s - 2.0) / 2.0) *
                               (b + std::sqrt(static_cast<double>(q)));
    }
    return out;
}

double weighted_delta(const Instance& inst, const BumpWeight& weight, double b, std::uint64_t p,
                      std::uint64_t q, const std::vector<std::int64_t>& y) {
    const unsigned n = inst.n();
    if (y.size() != n) throw ContractError("weighted_delta: shift dimension mismatch");
    if (b < 1.0) throw ContractError("weighted_delta: B must be >= 1");

    std::vector<IntPoly> diff;
    diff.reserve(inst.r());
    std::vector<BigInt> yb(n);
    for (unsigned i = 0; i < n; ++i) yb[i] = y[i];
    for (const auto& f : inst.polys()) diff.push_back(difference_poly(f, BigInt(p), yb));
    auto rps = reduce_system(diff, q);

    // support of W_y: |x_i| < 2BL and |x_i + p y_i| < 2BL
    double reach = 2.0 * b * weight.support();
    std::vector<std::int64_t> lo(n), hi(n);
    for (unsigned i = 0; i < n; ++i) {
        double plo = -reach, phi = reach;
        double qlo = -reach - static_cast<double>(p) * y[i];
        double qhi = reach - static_cast<double>(p) * y[i];
        lo[i] = static_cast<std::int64_t>(std::floor(std::max(plo, qlo))) - 1;
        hi[i] = static_cast<std::int64_t>(std::ceil(std::min(phi, qhi))) + 1;
    }

    std::vector<std::uint32_t> res(n);
    std::vector<double> t1(n), t2(n);
    double on_sum = 0, on_c = 0, all_sum = 0, all_c = 0;
    auto accumulate = [](double& s, double& c, double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    };
    for_each_int_box(lo, hi, [&](const std::vector<std::int64_t>& x) {
        for (unsigned i = 0; i < n; ++i) {
            t1[i] = static_cast<double>(x[i]) / (2.0 * b);
            t2[i] = static_cast<double>(x[i] + static_cast<std::int64_t>(p) * y[i]) / (2.0 * b);
        }
        double w = weight.value(t1) * weight.value(t2);
        if (w == 0.0) return;
        accumulate(all_sum, all_c, w);
        std::int64_t mm = static_cast<std::int64_t>(q);
        for (unsigned i = 0; i < n; ++i)
            res[i] = static_cast<std::uint32_t>(((x[i] % mm) + mm) % mm);
        bool on = true;
        for (const auto& rp : rps)
            if (rp.eval_prime(res.data(), q) != 0) {
                on = false;
                break;
            }
        if (on) accumulate(on_sum, on_c, w);
    });
    double qr = std::pow(static_cast<double>(q), static_cast<double>(inst.r()));
    return (on_sum + on_c) - (all_sum + all_c) / qr;
}

BigRat indicator_delta(const Instance& inst, double support_halfwidth, double b, std::uint64_t p,
                       std::uint64_t q, const std::vector<std::int64_t>& y) {
    const unsigned n = inst.n();
    if (y.size() != n) throw ContractError("indicator_delta: shift dimension mismatch");

    std::vector<IntPoly> diff;
    std::vector<BigInt> yb(n);
    for (unsigned i = 0; i < n; ++i) yb[i] = y[i];
    for (const auto& f : inst.polys()) diff.push_back(difference_poly(f, BigInt(p), yb));
    auto rps = reduce_system(diff, q);

    double reach = 2.0 * b * support_halfwidth;
    // strict inequality |x| < reach on integers
    std::int64_t rbound = static_cast<std::int64_t>(std::ceil(reach)) - 1;
    std::vector<std::int64_t> lo(n), hi(n);
    for (unsigned i = 0; i < n; ++i) {
        std::int64_t shift = static_cast<std::int64_t>(p) * y[i];
        lo[i] = std::max(-rbound, -rbound - shift);
        hi[i] = std::min(rbound, rbound - shift);
    }
    BigInt on = 0, all = 0;
    std::vector<std::uint32_t> res(n);
    for_each_int_box(lo, hi, [&](const std::vector<std::int64_t>& x) {
        ++all;
        std::int64_t mm = static_cast<std::int64_t>(q);
        for (unsigned i = 0; i < n; ++i)
            res[i] = static_cast<std::uint32_t>(((x[i] % mm) + mm) % mm);
        for (const auto& rp : rps)
            if (rp.eval_prime(res.data(), q) != 0) return;
        ++on;
    });
    BigInt qr = pow_bigint(BigInt(q), inst.r());
    return BigRat(on) - BigRat(all, qr);
}

}  // namespace vdclab

#include "vdclab/variety.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vdclab/linalg.hpp"
#include "vdclab/parallel.hpp"
#include "vdclab/rng.hpp"

namespace vdclab {

namespace {

void check_forms(const std::vector<IntPoly>& forms, unsigned m, const char* op) {
    for (const auto& f : forms) {
        if (f.n_vars() != m) throw ContractError(std::string(op) + ": variable count mismatch");
        if (!f.is_homogeneous()) throw ContractError(std::string(op) + ": input is not a form");
    }
}

// forms with nonzero reduction mod q; a surviving constant marks the
// variety empty
struct LiveSystem {
    std::vector<IntPoly> forms;  // nonconstant survivors (lifted back to IntPoly)
    bool empty_variety = false;  // a nonzero constant survived
};

LiveSystem live_system(const std::vector<IntPoly>& forms, std::uint64_t q) {
    LiveSystem out;
    for (const auto& f : forms) {
        ReducedPoly rp(f, q);
        if (rp.is_zero()) continue;
        if (rp.degree() == 0) {
            out.empty_variety = true;
            continue;
        }
        out.forms.push_back(rp.lift());
    }
    return out;
}

unsigned rank_mod_q(std::vector<std::vector<std::uint64_t>>& m, std::uint64_t q) {
    unsigned rank = 0;
    const unsigned rows = static_cast<unsigned>(m.size());
    if (rows == 0) return 0;
    const unsigned cols = static_cast<unsigned>(m[0].size());
    for (unsigned col = 0; col < cols && rank < rows; ++col) {
        unsigned pivot = rank;
        while (pivot < rows && m[pivot][col] % q == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        std::uint64_t inv = 1, base = m[rank][col] % q, e = q - 2;
        while (e) {
            if (e & 1) inv = inv * base % q;
            base = base * base % q;
            e >>= 1;
        }
        for (unsigned j = col; j < cols; ++j) m[rank][j] = m[rank][j] % q * inv % q;
        for (unsigned i = 0; i < rows; ++i) {
            if (i == rank) continue;
            std::uint64_t f = m[i][col] % q;
            if (f == 0) continue;
            for (unsigned j = col; j < cols; ++j)
                m[i][j] = (m[i][j] % q + (q - f) * (m[rank][j] % q)) % q;
        }
        ++rank;
    }
    return rank;
}

bool all_zero_at(const std::vector<ReducedPoly>& rps, const FieldCtx& ctx, const FieldElem* pt) {
    for (const auto& rp : rps)
        if (!ctx.is_zero(rp.eval(ctx, pt))) return false;
    return true;
}

std::uint64_t count_zeros_affine_prime(const std::vector<ReducedPoly>& rps, std::uint64_t q,
                                       unsigned m, unsigned threads) {
    struct Acc {
        std::uint64_t count = 0;
    };
    auto body = [&](Acc& acc, std::uint64_t first_lo, std::uint64_t first_hi) {
        std::vector<std::uint32_t> pt(m, 0);
        for (std::uint64_t x0 = first_lo; x0 < first_hi; ++x0) {
            pt[0] = static_cast<std::uint32_t>(x0);
            std::fill(pt.begin() + 1, pt.end(), 0u);
            while (true) {
                bool zero = true;
                for (const auto& rp : rps) {
                    if (rp.eval_prime(pt.data(), q) != 0) {
                        zero = false;
                        break;
                    }
                }
                if (zero) ++acc.count;
                int i = static_cast<int>(m) - 1;
                for (; i >= 1; --i) {
                    if (++pt[i] < q) break;
                    pt[i] = 0;
                }
                if (i < 1) break;
            }
        }
    };
    Acc total =
        parallel_reduce<Acc>(q, threads, body, [](Acc& t, const Acc& p) { t.count += p.count; });
    return total.count;
}

}  // namespace

std::uint64_t count_points(const std::vector<IntPoly>& forms, const FieldCtx& ctx,
                           CountMode mode, const EnumOptions& opt) {
    unsigned m = forms.empty() ? 0 : forms[0].n_vars();
    for (const auto& f : forms)
        if (f.n_vars() != m) throw ContractError("count_points: variable count mismatch");
    if (mode == CountMode::Projective) check_forms(forms, m, "count_points");
    if (m == 0) throw ContractError("count_points: needs at least one variable");

    auto rps = reduce_system(forms, ctx.q());
    std::vector<ReducedPoly> live;
    for (auto& rp : rps) {
        if (rp.is_zero()) continue;
        if (rp.degree() == 0) return 0;  // nonzero constant: no common zeros
        live.push_back(std::move(rp));
    }

    if (mode == CountMode::Affine) {
        std::uint64_t total = affine_point_count(ctx, m, opt.budget);
        if (live.empty()) return total;
        if (ctx.prime_field()) return count_zeros_affine_prime(live, ctx.q(), m, opt.threads);
        std::uint64_t count = 0;
        for_each_affine(ctx, m, opt.budget, [&](const FieldElem* pt) {
            if (all_zero_at(live, ctx, pt)) ++count;
        });
        return count;
    }

    std::uint64_t total = projective_point_count(ctx, m, opt.budget);
    if (live.empty()) return total;
    std::uint64_t count = 0;
    for_each_projective(ctx, m, opt.budget, [&](const FieldElem* pt) {
        if (all_zero_at(live, ctx, pt)) ++count;
    });
    return count;
}

// --- dimension estimation ---

namespace {

// true if the system restricted to a random codim-D subspace has a point
// over F_{q^k} for some k <= max_ext within the budget
bool slice_nonempty(const std::vector<ReducedPoly>& live, unsigned m, std::uint64_t q, unsigned D,
                    Rng& rng, const DimOptions& opt) {
    FieldCtx Fq(q, 1);
    FfeMatrix a;
    for (int attempt = 0; attempt < 64; ++attempt) {
        a.assign(D, std::vector<FieldElem>(m));
        for (auto& row : a)
            for (auto& e : row) e = Fq.from_residue(static_cast<std::int64_t>(rng.below(q)));
        if (rank_ffe(a, Fq) == D) break;
        a.clear();
    }
    if (a.empty()) throw std::logic_error("slice_nonempty: could not draw a full-rank slice");
    FfeMatrix basis = kernel_basis_ffe(a, Fq);  // s = m - D spanning vectors
    const unsigned s = static_cast<unsigned>(basis.size());

    for (unsigned k = 1; k <= opt.max_ext; ++k) {
        FieldCtx ctx(q, k);
        long double pts = 1;
        for (unsigned i = 0; i + 1 < s; ++i) pts *= static_cast<long double>(ctx.order());
        if (k > 1 && pts > static_cast<long double>(opt.growth_budget)) break;
        std::vector<FieldElem> x(m);
        bool found = false;
        for_each_projective(ctx, s, opt.enum_budget, [&](const FieldElem* t) {
            if (found) return;
            for (unsigned j = 0; j < m; ++j) {
                FieldElem acc = ctx.zero();
                for (unsigned i = 0; i < s; ++i) {
                    FieldElem b = ctx.from_residue(basis[i][j].c[0]);
                    acc = ctx.add(acc, ctx.mul(t[i], b));
                }
                x[j] = acc;
            }
            if (all_zero_at(live, ctx, x.data())) found = true;
        });
        if (found) return true;
    }
    return false;
}

struct GrowthData {
    std::vector<unsigned> ks;
    std::vector<std::uint64_t> counts;
};

GrowthData growth_counts(const std::vector<IntPoly>& live, unsigned m, std::uint64_t q,
                         const DimOptions& opt) {
    GrowthData g;
    for (unsigned k = 1; k <= opt.max_ext; ++k) {
        FieldCtx ctx(q, k);
        long double pts = 1;
        for (unsigned i = 0; i + 1 < m; ++i) pts *= static_cast<long double>(ctx.order());
        if (pts > static_cast<long double>(opt.growth_budget)) {
            if (k == 1)
                throw BudgetError("projective_dimension: base-field enumeration exceeds the "
                                  "growth budget; raise --budget");
            break;
        }
        EnumOptions eopt;
        eopt.budget = opt.enum_budget;
        g.ks.push_back(k);
        g.counts.push_back(count_points(live, ctx, CountMode::Projective, eopt));
    }
    return g;
}

int round_log(std::uint64_t count, unsigned k, std::uint64_t q) {
    if (count == 0) return -1;
    double v = std::log(static_cast<double>(count)) / (k * std::log(static_cast<double>(q)));
    return static_cast<int>(std::llround(v));
}

}  // namespace

int projective_dimension(const std::vector<IntPoly>& forms, std::uint64_t q, unsigned m,
                         const DimOptions& opt) {
    if (m < 1) throw ContractError("projective_dimension: needs at least one variable");
    if (!forms.empty() && forms[0].n_vars() != m)
        throw ContractError("projective_dimension: m mismatch");
    check_forms(forms, m, "projective_dimension");
    if (!is_prime_u64(q)) throw ContractError("projective_dimension: q must be prime");

    LiveSystem live = live_system(forms, q);
    if (live.empty_variety) return -1;
    const unsigned rp = static_cast<unsigned>(live.forms.size());
    if (rp == 0) return static_cast<int>(m) - 1;

    GrowthData g = growth_counts(live.forms, m, q, opt);
    bool any_points =
        std::any_of(g.counts.begin(), g.counts.end(), [](std::uint64_t c) { return c > 0; });
    if (!any_points) return -1;  // empty over every tested extension

    // slicing estimator, floored at m-1-r' (dimension theorem, Z nonempty)
    Rng rng(opt.seed ^ 0x51ce0fbeefull);
    auto rlive = reduce_system(live.forms, q);
    int floor_dim = std::max(0, static_cast<int>(m) - 1 - static_cast<int>(rp));
    int slice_dim = 0;
    for (unsigned D = 1; D + 1 <= m; ++D) {
        unsigned yes = 0;
        for (unsigned t = 0; t < opt.slice_trials; ++t)
            if (slice_nonempty(rlive, m, q, D, rng, opt)) ++yes;
        if (2 * yes > opt.slice_trials)
            slice_dim = static_cast<int>(D);
        else
            break;
    }
    slice_dim = std::max(slice_dim, floor_dim);

    unsigned k_star = g.ks.back();
    int growth_dim = round_log(g.counts.back(), k_star, q);
    if (growth_dim == slice_dim) return growth_dim;

    // Escalation before giving up: the count ratio between the two largest
    // affordable extensions cancels the component-count constant that skews
    // the single-field estimate at small q.
    if (g.ks.size() >= 2) {
        std::uint64_t c_hi = g.counts[g.ks.size() - 1];
        std::uint64_t c_lo = g.counts[g.ks.size() - 2];
        unsigned dk = g.ks[g.ks.size() - 1] - g.ks[g.ks.size() - 2];
        if (c_lo > 0 && c_hi > 0) {
            double slope = std::log(static_cast<double>(c_hi) / static_cast<double>(c_lo)) /
                           (dk * std::log(static_cast<double>(q)));
            if (static_cast<int>(std::llround(slope)) == slice_dim) return slice_dim;
        }
    }
    std::ostringstream os;
    os << "dimension ambiguous, increase k or q (growth estimate " << growth_dim
       << " at k=" << k_star << ", slicing estimate " << slice_dim << ")";
    throw DimensionAmbiguous(os.str());
}

int fast_projective_dimension(const std::vector<IntPoly>& forms, std::uint64_t q, unsigned m,
                              const DimOptions& opt) {
    check_forms(forms, m, "fast_projective_dimension");
    LiveSystem live = live_system(forms, q);
    if (live.empty_variety) return -1;
    const unsigned rp = static_cast<unsigned>(live.forms.size());
    if (rp == 0) return static_cast<int>(m) - 1;
    if (rp == 1) return static_cast<int>(m) - 2;  // one nonzero form always cuts a hypersurface
    if (rp >= m) return projective_dimension(forms, q, m, opt);  // emptiness possible: full path

    BigInt degree_bound = 1;
    for (const auto& f : live.forms) degree_bound *= f.degree();
    FieldCtx Fq(q, 1);
    EnumOptions eopt;
    eopt.budget = opt.enum_budget;
    std::uint64_t c1 = count_points(live.forms, Fq, CountMode::Projective, eopt);
    int floor_dim = std::max(0, static_cast<int>(m) - 1 - static_cast<int>(rp));
    if (floor_dim == 0 && BigInt(c1) <= degree_bound) return 0;

    Rng rng(opt.seed ^ 0xfa57d1ull);
    auto rlive = reduce_system(live.forms, q);
    int slice_dim = 0;
    for (unsigned D = 1; D + 1 <= m; ++D) {
        unsigned yes = 0;
        for (unsigned t = 0; t < opt.slice_trials; ++t)
            if (slice_nonempty(rlive, m, q, D, rng, opt)) ++yes;
        if (2 * yes > opt.slice_trials)
            slice_dim = static_cast<int>(D);
        else
            break;
    }
    return std::max(slice_dim, floor_dim);
}

// --- singular locus ---

SingularLocusResult singular_points(const std::vector<IntPoly>& forms, const FieldCtx& ctx,
                                    const EnumOptions& opt) {
    if (forms.empty()) throw ContractError("singular_points: empty system");
    const unsigned m = forms[0].n_vars();
    check_forms(forms, m, "singular_points");
    const unsigned r = static_cast<unsigned>(forms.size());

    auto rps = reduce_system(forms, ctx.q());
    std::vector<std::vector<ReducedPoly>> grads(r);
    for (unsigned i = 0; i < r; ++i) {
        auto g = gradient(forms[i]);
        for (auto& gp : g) grads[i].emplace_back(gp, ctx.q());
    }

    SingularLocusResult out;
    for_each_projective(ctx, m, opt.budget, [&](const FieldElem* pt) {
        for (const auto& rp : rps)
            if (!ctx.is_zero(rp.eval(ctx, pt))) return;
        ++out.variety_count;
        FfeMatrix jac(r, std::vector<FieldElem>(m));
        for (unsigned i = 0; i < r; ++i)
            for (unsigned j = 0; j < m; ++j) jac[i][j] = grads[i][j].eval(ctx, pt);
        if (rank_ffe(std::move(jac), ctx) < r)
            out.points.push_back(ProjPoint{std::vector<FieldElem>(pt, pt + m)});
    });
    return out;
}

namespace {

IntPoly det_poly(const std::vector<std::vector<IntPoly>>& m, unsigned nv) {
    const unsigned n = static_cast<unsigned>(m.size());
    if (n == 0) return IntPoly::constant(nv, 1);
    if (n == 1) return m[0][0];
    IntPoly det(nv);
    for (unsigned j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<IntPoly>> minor;
        minor.reserve(n - 1);
        for (unsigned i = 1; i < n; ++i) {
            std::vector<IntPoly> row;
            row.reserve(n - 1);
            for (unsigned l = 0; l < n; ++l)
                if (l != j) row.push_back(m[i][l]);
            minor.push_back(std::move(row));
        }
        IntPoly term = m[0][j] * det_poly(minor, nv);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

}  // namespace

std::vector<IntPoly> jacobian_minors(const std::vector<IntPoly>& forms) {
    if (forms.empty()) throw ContractError("jacobian_minors: empty system");
    const unsigned m = forms[0].n_vars();
    const unsigned r = static_cast<unsigned>(forms.size());
    if (r > m) throw ContractError("jacobian_minors: more forms than variables");
    std::vector<std::vector<IntPoly>> jac;
    jac.reserve(r);
    for (const auto& f : forms) jac.push_back(gradient(f));

    std::vector<IntPoly> minors;
    std::vector<unsigned> cols(r);
    std::iota(cols.begin(), cols.end(), 0u);
    while (true) {
        std::vector<std::vector<IntPoly>> sub(r);
        for (unsigned i = 0; i < r; ++i)
            for (unsigned j : cols) sub[i].push_back(jac[i][j]);
        IntPoly d = det_poly(sub, m);
        if (!d.is_zero()) minors.push_back(std::move(d));
        int i = static_cast<int>(r) - 1;
        while (i >= 0 && cols[i] == m - r + static_cast<unsigned>(i)) --i;
        if (i < 0) break;
        ++cols[i];
        for (unsigned j = static_cast<unsigned>(i) + 1; j < r; ++j) cols[j] = cols[j - 1] + 1;
    }
    return minors;
}

int singular_dimension(const std::vector<IntPoly>& forms, std::uint64_t q, unsigned m,
                       const DimOptions& opt) {
    std::vector<IntPoly> system = forms;
    for (auto& mp : jacobian_minors(forms)) system.push_back(std::move(mp));
    return projective_dimension(system, q, m, opt);
}

SingReport analyze_forms(const std::vector<IntPoly>& forms, std::uint64_t q, unsigned m,
                         unsigned expected_codim, const DimOptions& opt) {
    SingReport rep;
    rep.q = q;
    rep.seed = opt.seed;
    rep.dim_Z = projective_dimension(forms, q, m, opt);
    rep.is_complete_intersection_codim =
        (rep.dim_Z == static_cast<int>(m) - 1 - static_cast<int>(expected_codim));
    rep.dim_sing = rep.dim_Z == -1 ? -1 : singular_dimension(forms, q, m, opt);
    if (rep.dim_sing > rep.dim_Z) rep.dim_sing = rep.dim_Z;

    LiveSystem live = live_system(forms, q);
    if (!live.empty_variety) {
        GrowthData g = growth_counts(live.forms, m, q, opt);
        for (std::size_t i = 0; i < g.ks.size(); ++i) {
            rep.k_list.push_back(g.ks[i]);
            rep.point_counts[g.ks[i]] = g.counts[i];
        }
    }
    return rep;
}

// --- strata of the differenced geometry ---

StrataResult strata_sets(const std::vector<IntPoly>& forms, std::uint64_t q,
                         const EnumOptions& opt) {
    if (forms.empty()) throw ContractError("strata_sets: empty system");
    const unsigned m = forms[0].n_vars();
    check_forms(forms, m, "strata_sets");
    const unsigned r = static_cast<unsigned>(forms.size());

    for (const auto& f : forms)
        if (static_cast<std::uint64_t>(f.degree()) % q == 0)
            throw HypothesisError("strata_sets: q divides deg G_i");
    DimOptions dopt;
    dopt.enum_budget = opt.budget;
    SingReport rep = analyze_forms(forms, q, m, r, dopt);
    if (!rep.is_complete_intersection_codim)
        throw HypothesisError("strata_sets: Z_q is not a complete intersection of codimension r");
    if (rep.dim_sing != -1) throw HypothesisError("strata_sets: Z_q is singular");

    FieldCtx Fq(q, 1);
    auto xs = collect_projective(Fq, m, opt.budget);
    const std::size_t nx = xs.size();
    if (nx * nx > opt.budget)
        throw BudgetError("strata_sets: pair enumeration exceeds the point budget; raise --budget");

    std::vector<std::vector<ReducedPoly>> grads(r);
    std::vector<std::vector<std::vector<ReducedPoly>>> hess(r);
    for (unsigned i = 0; i < r; ++i) {
        auto g = gradient(forms[i]);
        grads[i].reserve(m);
        for (auto& gp : g) grads[i].emplace_back(gp, q);
        auto h = hessian(forms[i]);
        hess[i].resize(m);
        for (unsigned j = 0; j < m; ++j)
            for (unsigned l = 0; l < m; ++l) hess[i][j].emplace_back(h[j][l], q);
    }
    // cache gradient and Hessian values at every x
    std::vector<std::uint32_t> pt(m);
    std::vector<std::vector<std::uint32_t>> gval(nx, std::vector<std::uint32_t>(r * m));
    std::vector<std::vector<std::uint32_t>> hval(nx, std::vector<std::uint32_t>(r * m * m));
    for (std::size_t xi = 0; xi < nx; ++xi) {
        for (unsigned j = 0; j < m; ++j) pt[j] = xs[xi].coords[j].c[0];
        for (unsigned i = 0; i < r; ++i) {
            for (unsigned j = 0; j < m; ++j)
                gval[xi][i * m + j] = grads[i][j].eval_prime(pt.data(), q);
            for (unsigned j = 0; j < m; ++j)
                for (unsigned l = 0; l < m; ++l)
                    hval[xi][(i * m + j) * m + l] = hess[i][j][l].eval_prime(pt.data(), q);
        }
    }

    StrataResult out;
    out.q = q;
    std::vector<double> half_proj(m);  // #P^s(F_q)/2 for s = 0..m-1
    {
        double size = 1, acc = 1;
        for (unsigned s = 0; s < m; ++s) {
            if (s > 0) {
                size *= static_cast<double>(q);
                acc += size;
            }
            half_proj[s] = acc / 2.0;
        }
    }

    out.fibers.reserve(nx);
    std::vector<std::uint32_t> y(m);
    std::vector<std::vector<std::uint64_t>> mat(r, std::vector<std::uint64_t>(m));
    for (std::size_t yi = 0; yi < nx; ++yi) {
        for (unsigned j = 0; j < m; ++j) y[j] = xs[yi].coords[j].c[0];
        std::uint64_t fiber = 0;
        for (std::size_t xi = 0; xi < nx; ++xi) {
            bool in_s = true;
            for (unsigned i = 0; i < r && in_s; ++i) {
                std::uint64_t dot = 0;
                const auto& gv = gval[xi];
                for (unsigned j = 0; j < m; ++j)
                    dot += static_cast<std::uint64_t>(y[j]) * gv[i * m + j];
                if (dot % q != 0) in_s = false;
            }
            if (!in_s) continue;
            const auto& hv = hval[xi];
            for (unsigned i = 0; i < r; ++i)
                for (unsigned l = 0; l < m; ++l) {
                    std::uint64_t dot = 0;
                    for (unsigned j = 0; j < m; ++j)
                        dot += static_cast<std::uint64_t>(y[j]) * hv[(i * m + j) * m + l];
                    mat[i][l] = dot % q;
                }
            if (rank_mod_q(mat, q) < r) ++fiber;
        }
        out.s_count += fiber;
        int fdim = -1;
        for (unsigned s = 0; s < m; ++s)
            if (static_cast<double>(fiber) >= half_proj[s]) fdim = static_cast<int>(s);
        out.fibers.push_back({xs[yi], fiber, fdim});
    }

    for (int s = -1; s < static_cast<int>(m); ++s) {
        std::vector<std::uint32_t> members;
        for (std::size_t yi = 0; yi < nx; ++yi)
            if (out.fibers[yi].fiber_dim >= s) members.push_back(static_cast<std::uint32_t>(yi));
        out.t_sets[s] = std::move(members);
    }
    out.c_ratio = static_cast<double>(out.s_count) /
                  std::pow(static_cast<double>(q), static_cast<double>(m) - 2.0);
    return out;
}

// --- searches replacing the existence lemmas ---

std::vector<BigInt> find_good_hyperplane(const std::vector<IntPoly>& forms, std::uint64_t q,
                                         unsigned height_bound, const DimOptions& opt) {
    if (forms.empty()) throw ContractError("find_good_hyperplane: empty system");
    const unsigned m = forms[0].n_vars();
    check_forms(forms, m, "find_good_hyperplane");
    const unsigned r = static_cast<unsigned>(forms.size());

    SingReport rep = analyze_forms(forms, q, m, r, opt);
    if (rep.dim_Z == -1) throw HypothesisError("find_good_hyperplane: variety is empty");
    if (!rep.is_complete_intersection_codim)
        throw HypothesisError("find_good_hyperplane: codimension is not r");
    if (rep.dim_sing < 0)
        throw ContractError("find_good_hyperplane: already nonsingular, nothing to improve");
    const int s = rep.dim_sing;
    const int dim_z = rep.dim_Z;

    std::vector<std::int64_t> a(m);
    for (unsigned h = 1; h <= height_bound; ++h) {
        std::fill(a.begin(), a.end(), -static_cast<std::int64_t>(h));
        while (true) {
            bool at_height = false;
            for (auto v : a)
                if (std::llabs(v) == static_cast<std::int64_t>(h)) at_height = true;
            if (at_height) {
                std::int64_t lead = 0;
                std::uint64_t g = 0;
                for (auto v : a) {
                    if (lead == 0) lead = v;
                    g = std::gcd(g, static_cast<std::uint64_t>(std::llabs(v)));
                }
                if (lead > 0 && g == 1) {
                    IntPoly L(m);
                    for (unsigned j = 0; j < m; ++j) {
                        Exponents e(m, 0);
                        e[j] = 1;
                        L.add_term(e, BigInt(a[j]));
                    }
                    if (!ReducedPoly(L, q).is_zero()) {
                        std::vector<IntPoly> sliced = forms;
                        sliced.push_back(L);
                        try {
                            int dz = projective_dimension(sliced, q, m, opt);
                            if (dz == dim_z - 1 && singular_dimension(sliced, q, m, opt) == s - 1) {
                                std::vector<BigInt> out(m);
                                for (unsigned j = 0; j < m; ++j) out[j] = a[j];
                                return out;
                            }
                        } catch (const DimensionAmbiguous&) {
                            // skip candidates whose geometry we cannot certify
                        }
                    }
                }
            }
            int i = static_cast<int>(m) - 1;
            for (; i >= 0; --i) {
                if (a[i] < static_cast<std::int64_t>(h)) {
                    ++a[i];
                    break;
                }
                a[i] = -static_cast<std::int64_t>(h);
            }
            if (i < 0) break;
        }
    }
    throw SearchExhausted("find_good_hyperplane: no linear form up to height " +
                          std::to_string(height_bound) + " improves the singular locus");
}

std::uint64_t find_good_prime(const Instance& inst, std::uint64_t target, double window_factor,
                              const GoodPrimeOptions& opt) {
    if (target < 2) target = 2;
    const auto& forms = inst.leading_forms();
    const unsigned m = inst.n();
    const unsigned r = inst.r();
    const int want_dim = static_cast<int>(m) - 1 - static_cast<int>(r);
    std::uint64_t hi =
        static_cast<std::uint64_t>(window_factor * static_cast<double>(target));
    std::ostringstream defects;
    for (std::uint64_t p = next_prime(target); p <= hi; p = next_prime(p + 1)) {
        if (opt.require_odd && p == 2) {
            defects << " p=2: excluded (exact-identity mode needs odd p);";
            continue;
        }
        try {
            SingReport rep = analyze_forms(forms, p, m, r, opt.dim);
            if (rep.dim_Z != want_dim) {
                defects << " p=" << p << ": dim " << rep.dim_Z << " != " << want_dim << ";";
                continue;
            }
            if (rep.dim_sing != -1) {
                defects << " p=" << p << ": singular (dim Sing = " << rep.dim_sing << ");";
                continue;
            }
            return p;
        } catch (const std::exception& e) {
            defects << " p=" << p << ": " << e.what() << ";";
        }
    }
    throw SearchExhausted("find_good_prime: no good prime in [" + std::to_string(target) + ", " +
                          std::to_string(hi) + "]:" + defects.str());
}

SectionSingDim hyperplane_section_sing_dim(const std::vector<IntPoly>& forms,
                                           const std::vector<std::uint32_t>& a, std::uint64_t q,
                                           const EnumOptions& opt) {
    if (forms.empty()) throw ContractError("hyperplane_section_sing_dim: empty system");
    const unsigned m = forms[0].n_vars();
    check_forms(forms, m, "hyperplane_section_sing_dim");
    if (a.size() != m) throw ContractError("hyperplane_section_sing_dim: covector length mismatch");
    const unsigned r = static_cast<unsigned>(forms.size());

    FieldCtx Fq(q, 1);
    bool a_zero = true;
    for (auto v : a)
        if (v % q != 0) a_zero = false;
    if (a_zero) throw ContractError("hyperplane_section_sing_dim: a = 0 is the main-term case");

    FfeMatrix arow(1, std::vector<FieldElem>(m));
    for (unsigned j = 0; j < m; ++j) arow[0][j] = Fq.from_residue(a[j] % q);
    FfeMatrix basis = kernel_basis_ffe(arow, Fq);  // m-1 vectors spanning the hyperplane

    std::vector<std::vector<IntPoly>> grads;
    grads.reserve(r);
    for (const auto& f : forms) grads.push_back(gradient(f));

    SectionSingDim out;
    for (unsigned k = 1; k <= 2; ++k) {
        FieldCtx ctx(q, k);
        long double cost = 1;
        for (unsigned i = 0; i + 2 < m; ++i) cost *= static_cast<long double>(ctx.order());
        if (cost > static_cast<long double>(opt.budget)) break;
        auto rps = reduce_system(forms, q);
        std::vector<std::vector<ReducedPoly>> rgrads(r);
        for (unsigned i = 0; i < r; ++i)
            for (const auto& gp : grads[i]) rgrads[i].emplace_back(gp, q);

        std::uint64_t sing = 0;
        std::vector<FieldElem> x(m);
        for_each_projective(ctx, m - 1, opt.budget, [&](const FieldElem* t) {
            for (unsigned j = 0; j < m; ++j) {
                FieldElem acc = ctx.zero();
                for (unsigned i = 0; i + 1 < m; ++i)
                    acc = ctx.add(acc, ctx.mul(t[i], ctx.from_residue(basis[i][j].c[0])));
                x[j] = acc;
            }
            for (const auto& rp : rps)
                if (!ctx.is_zero(rp.eval(ctx, x.data()))) return;
            // Jacobian of (F_1..F_r, a.x); rank < r+1 marks a singular point
            FfeMatrix jac(r + 1, std::vector<FieldElem>(m));
            for (unsigned i = 0; i < r; ++i)
                for (unsigned j = 0; j < m; ++j) jac[i][j] = rgrads[i][j].eval(ctx, x.data());
            for (unsigned j = 0; j < m; ++j) jac[r][j] = ctx.from_residue(a[j] % q);
            if (rank_ffe(std::move(jac), ctx) < r + 1) ++sing;
        });
        if (sing > 0) {
            out.delta = 0;
            out.from_extension = (k > 1);
            double half_line = (static_cast<double>(ctx.order()) + 1.0) / 2.0;
            out.flagged_ge1 = static_cast<double>(sing) >= half_line;
            if (out.flagged_ge1) out.delta = 1;
            return out;
        }
    }
    out.delta = -1;
    return out;
}

}  // namespace vdclab

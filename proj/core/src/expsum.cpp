#include "vdclab/expsum.hpp"

#include <algorithm>
#include <cmath>

#include "vdclab/linalg.hpp"
#include "vdclab/rng.hpp"

namespace vdclab {

namespace {

std::uint32_t residue(std::int64_t v, std::uint64_t q) {
    std::int64_t m = static_cast<std::int64_t>(q);
    return static_cast<std::uint32_t>(((v % m) + m) % m);
}

}  // namespace

CharSum s1(const BoxZ& box, const std::vector<std::int64_t>& a, std::uint64_t q) {
    if (a.size() != box.n()) throw ContractError("s1: covector dimension mismatch");
    if (!box.fits_modulus(q)) throw ContractError("s1: a box side exceeds q");
    CharTable chi(q);

    CharSum out;
    out.q = q;
    out.terms = box.point_count().convert_to<std::uint64_t>();
    std::complex<double> prod{1.0, 0.0};
    for (unsigned i = 0; i < box.n(); ++i) {
        std::uint32_t ai = residue(a[i], q);
        std::int64_t len = box.side(i);
        if (ai == 0) {
            prod *= static_cast<double>(len);
            continue;
        }
        // sum_{b=lo..hi} e_q(-a_i b) = e_q(-a_i lo) (1 - w^len)/(1 - w), w = e_q(-a_i)
        std::uint32_t w_exp = static_cast<std::uint32_t>(q - ai);  // -a_i mod q
        std::uint32_t start = residue(-(a[i] % static_cast<std::int64_t>(q)) * box.lo(i), q);
        std::uint32_t len_exp =
            static_cast<std::uint32_t>((static_cast<std::uint64_t>(w_exp) * (len % static_cast<std::int64_t>(q))) % q);
        std::complex<double> w = chi(w_exp);
        std::complex<double> num = 1.0 - chi(len_exp);
        std::complex<double> den = 1.0 - w;
        prod *= chi(start) * num / den;
    }
    out.value = prod;
    return out;
}

PointSet affine_points(const std::vector<IntPoly>& polys, std::uint64_t q,
                       const EnumOptions& opt) {
    if (polys.empty()) throw ContractError("affine_points: empty system");
    const unsigned n = polys[0].n_vars();
    FieldCtx Fq(q, 1);
    affine_point_count(Fq, n, opt.budget);

    auto rps = reduce_system(polys, q);
    std::vector<ReducedPoly> live;
    bool impossible = false;
    for (auto& rp : rps) {
        if (rp.is_zero()) continue;
        if (rp.degree() == 0) impossible = true;
        live.push_back(std::move(rp));
    }

    PointSet out;
    out.q = q;
    out.n = n;
    if (impossible) return out;
    std::vector<std::uint32_t> pt(n, 0);
    while (true) {
        bool zero = true;
        for (const auto& rp : live) {
            if (rp.eval_prime(pt.data(), q) != 0) {
                zero = false;
                break;
            }
        }
        if (zero) out.points.push_back(pt);
        int i = static_cast<int>(n) - 1;
        for (; i >= 0; --i) {
            if (++pt[i] < q) break;
            pt[i] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

CharSum s2(const PointSet& xset, const std::vector<std::int64_t>& a) {
    if (a.size() != xset.n) throw ContractError("s2: covector dimension mismatch");
    CharTable chi(xset.q);
    std::vector<std::uint32_t> ar(xset.n);
    for (unsigned i = 0; i < xset.n; ++i) ar[i] = residue(a[i], xset.q);

    KahanComplex acc;
    for (const auto& x : xset.points) {
        std::uint64_t dot = 0;
        for (unsigned i = 0; i < xset.n; ++i) dot += static_cast<std::uint64_t>(ar[i]) * x[i];
        acc.add(chi(dot % xset.q));
    }
    CharSum out;
    out.value = acc.value();
    out.terms = xset.points.size();
    out.q = xset.q;
    return out;
}

CharSum s2(const std::vector<IntPoly>& polys, const std::vector<std::int64_t>& a, std::uint64_t q,
           const EnumOptions& opt) {
    return s2(affine_points(polys, q, opt), a);
}

FourierInversionCheck fourier_inversion_check(const Instance& inst, const BoxZ& box,
                                              std::uint64_t q, const FourierOptions& opt) {
    const unsigned n = inst.n();
    if (box.n() != n) throw ContractError("fourier_inversion_check: box dimension mismatch");
    if (!box.fits_modulus(q)) throw ContractError("fourier_inversion_check: box side exceeds q");
    if (!is_prime_u64(q)) throw ContractError("fourier_inversion_check: q must be prime");

    FourierInversionCheck out;
    out.lhs = static_cast<double>(count_box_mod(inst, box, q, opt.en));

    PointSet xset = affine_points(inst.polys(), q, opt.en);
    CharTable chi(q);

    // S1 closed-form state per axis, evaluated per a below
    long double full_sweep = std::pow(static_cast<long double>(q), static_cast<long double>(n));
    std::vector<std::int64_t> a(n, 0);
    auto term = [&](const std::vector<std::int64_t>& av) {
        return s1(box, av, q).value * s2(xset, av).value;
    };

    if (full_sweep <= static_cast<long double>(opt.full_sweep_cap)) {
        KahanComplex acc;
        std::uint64_t count = 0;
        while (true) {
            acc.add(term(a));
            ++count;
            int i = static_cast<int>(n) - 1;
            for (; i >= 0; --i) {
                if (++a[i] < static_cast<std::int64_t>(q)) break;
                a[i] = 0;
            }
            if (i < 0) break;
        }
        out.a_count = count;
        double qn = std::pow(static_cast<double>(q), static_cast<double>(n));
        out.rhs = acc.value() / qn;
        out.abs_err = std::abs(out.lhs - out.rhs.real());
        out.imag_abs = std::abs(out.rhs.imag());
        return out;
    }

    // statistical mode: the identity states lhs = mean over a of S1(a)S2(a)
    out.sampled = true;
    Rng rng(opt.seed ^ 0xf0a57a11ull);
    KahanComplex acc;
    double sq = 0;
    for (std::uint64_t t = 0; t < opt.sample_size; ++t) {
        for (unsigned i = 0; i < n; ++i) a[i] = static_cast<std::int64_t>(rng.below(q));
        auto v = term(a);
        acc.add(v);
        sq += std::norm(v);
    }
    out.a_count = opt.sample_size;
    double mean_count = static_cast<double>(opt.sample_size);
    out.rhs = acc.value() / mean_count;
    out.abs_err = std::abs(out.lhs - out.rhs.real());
    out.imag_abs = std::abs(out.rhs.imag());
    double var = sq / mean_count - std::norm(out.rhs);
    out.sample_stderr = std::sqrt(std::max(0.0, var) / mean_count);
    return out;
}

VSubspaceCheck v_subspace_identity(const Instance& inst, const std::vector<IntPoly>& linear,
                                   const BoxZ& box, std::uint64_t q, const EnumOptions& opt) {
    const unsigned n = inst.n();
    if (box.n() != n) throw ContractError("v_subspace_identity: box dimension mismatch");
    if (!box.fits_modulus(q)) throw ContractError("v_subspace_identity: box side exceeds q");
    if (linear.empty()) throw ContractError("v_subspace_identity: needs at least one linear form");
    const unsigned s1count = static_cast<unsigned>(linear.size());  // s+1

    // leading forms of the l_i must be degree-1 and independent mod q
    FieldCtx Fq(q, 1);
    FfeMatrix lmat(s1count, std::vector<FieldElem>(n));
    std::vector<std::vector<std::uint32_t>> lrows(s1count, std::vector<std::uint32_t>(n, 0));
    for (unsigned i = 0; i < s1count; ++i) {
        if (linear[i].n_vars() != n)
            throw ContractError("v_subspace_identity: linear form dimension mismatch");
        IntPoly lf = leading_form(linear[i]);
        if (lf.degree() != 1)
            throw ContractError("v_subspace_identity: leading form is not linear");
        for (const auto& [e, c] : lf.terms()) {
            for (unsigned j = 0; j < n; ++j)
                if (e[j] == 1) lrows[i][j] = residue(c.convert_to<std::int64_t>() % static_cast<std::int64_t>(q), q);
        }
        for (unsigned j = 0; j < n; ++j) lmat[i][j] = Fq.from_residue(lrows[i][j]);
    }
    if (rank_ffe(lmat, Fq) < s1count)
        throw HypothesisError("v_subspace_identity: leading linear forms are dependent mod q "
                              "(the span V has the wrong size)");

    // X includes the linear equations
    std::vector<IntPoly> xsys = inst.polys();
    for (const auto& l : linear) xsys.push_back(l);
    PointSet xset = affine_points(xsys, q, opt);

    VSubspaceCheck out;
    out.x_count = xset.points.size();
    out.lambda_count = count_box_mod(linear, box, q, opt);
    out.rhs = out.x_count * out.lambda_count;

    // sweep the span of the L_i: q^{s+1} covectors
    std::vector<std::uint32_t> c(s1count, 0);
    std::vector<std::int64_t> a(n);
    KahanComplex acc;
    while (true) {
        for (unsigned j = 0; j < n; ++j) {
            std::uint64_t v = 0;
            for (unsigned i = 0; i < s1count; ++i)
                v += static_cast<std::uint64_t>(c[i]) * lrows[i][j];
            a[j] = static_cast<std::int64_t>(v % q);
        }
        acc.add(s1(box, a, q).value * s2(xset, a).value);
        int i = static_cast<int>(s1count) - 1;
        for (; i >= 0; --i) {
            if (++c[i] < q) break;
            c[i] = 0;
        }
        if (i < 0) break;
    }
    double scale = std::pow(static_cast<double>(q), static_cast<double>(s1count));
    out.lhs = acc.value() / scale;
    out.abs_err = std::abs(out.lhs - std::complex<double>(to_double(out.rhs), 0.0));
    return out;
}

KatzReport katz_bound_report(const Instance& inst, std::uint64_t q, unsigned samples,
                             const KatzOptions& opt) {
    const unsigned n = inst.n();
    const unsigned r = inst.r();
    for (const auto& lf : inst.leading_forms())
        if (lf.degree() < 2)
            throw ContractError("katz_bound_report: leading forms must have degree >= 2");
    SingReport rep = analyze_forms(inst.leading_forms(), q, n, r, opt.geom.dim);
    if (!rep.is_complete_intersection_codim)
        throw HypothesisError("katz_bound_report: Z_q is not a complete intersection of codim r");
    if (rep.dim_sing != -1) throw HypothesisError("katz_bound_report: Z_q is singular");

    PointSet xset = affine_points(inst.polys(), q, opt.geom.en);

    KatzReport out;
    out.q = q;
    out.seed = opt.seed;
    Rng rng(opt.seed ^ (q * 0x9e3779b9ull));
    std::vector<std::uint32_t> a(n);
    std::vector<std::int64_t> ai(n);
    for (unsigned t = 0; t < samples; ++t) {
        bool nonzero = false;
        while (!nonzero) {
            for (unsigned i = 0; i < n; ++i) {
                a[i] = static_cast<std::uint32_t>(rng.below(q));
                if (a[i]) nonzero = true;
            }
        }
        for (unsigned i = 0; i < n; ++i) ai[i] = a[i];
        KatzRow row;
        row.a = a;
        row.abs_sum = std::abs(s2(xset, ai).value);
        SectionSingDim sd = hyperplane_section_sing_dim(inst.leading_forms(), a, q, opt.geom.en);
        row.delta = sd.delta;
        row.delta_flagged = sd.flagged_ge1;
        row.delta_from_ext = sd.from_extension;
        double expo = (static_cast<double>(n) - r + 1 + row.delta) / 2.0;
        row.ratio = row.abs_sum / std::pow(static_cast<double>(q), expo);
        out.max_ratio = std::max(out.max_ratio, row.ratio);
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace vdclab

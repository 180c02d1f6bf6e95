#include "doctest.h"

#include <cmath>

#include "vdclab/vdc.hpp"
#include "vdclab/rng.hpp"

using namespace vdclab;

namespace {

IntPoly var(unsigned n, unsigned i, unsigned e = 1) { return IntPoly::monomial(n, i, e, 1); }

IntPoly diagonal_form(unsigned n, unsigned d) {
    IntPoly f(n);
    for (unsigned i = 0; i < n; ++i) f = f + var(n, i, d);
    return f;
}

}  // namespace

TEST_CASE("prime plan closed forms") {
    SelectPrimesOptions opt;
    opt.exact_identity = false;
    PrimePlan plan = select_primes(10, 1, 50, opt);
    CHECK(plan.e_p == doctest::Approx(0.65625).epsilon(1e-12));
    CHECK(plan.e_q == doctest::Approx(1.390625).epsilon(1e-12));
    CHECK(plan.density_exponent == doctest::Approx(7.953125).epsilon(1e-12));
    CHECK(plan.hypersurface_reference == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(plan.density_exponent < plan.hypersurface_reference);
    CHECK(plan.e_p_exact == BigRat(84, 128));
    CHECK(plan.e_q_exact == BigRat(178, 128));

    // regime gate
    CHECK_THROWS_AS(select_primes(5, 1, 10), ContractError);
    SelectPrimesOptions relax;
    relax.relax_regime = true;
    CHECK_NOTHROW(select_primes(5, 1, 10, relax));
    CHECK_THROWS_AS(select_primes(3, 3, 10, relax), ContractError);
}

TEST_CASE("prime plan selects matched primes with constraints") {
    SelectPrimesOptions opt;
    opt.relax_regime = true;
    opt.exact_identity = true;
    // n=3, r=1: e_p = 0.4375, e_q = 0.625; window pushes q above 2B+1+p
    for (std::int64_t b : {4, 7, 13}) {
        PrimePlan plan = select_primes(3, 1, b, opt);
        CHECK(plan.p == 3);
        CHECK(plan.b == b);  // 2b+1 already a multiple of 3 for these
        CHECK((2 * plan.b + 1) % plan.p == 0);
        CHECK(plan.q > static_cast<std::uint64_t>(2 * plan.b + 1));
        CHECK(plan.p != plan.q);
    }
    PrimePlan p4 = select_primes(3, 1, 4, opt);
    PrimePlan p13 = select_primes(3, 1, 13, opt);
    CHECK(p4.q == 11);  // nearest prime >= 2B+2 = 10
    CHECK(p13.q == 29);

    SelectPrimesOptions strict = opt;
    strict.strict_window = true;
    PrimePlan ps = select_primes(3, 1, 13, strict);
    CHECK(2 * ps.p < static_cast<std::uint64_t>(2 * ps.b + 1));
    CHECK(static_cast<std::uint64_t>(2 * ps.b + 1) + ps.p < ps.q);
    CHECK(ps.q == 31);

    // B adjustment when 2B+1 is not a multiple of p
    PrimePlan adj = select_primes(3, 1, 5, opt);
    CHECK((2 * adj.b + 1) % adj.p == 0);
    CHECK(std::llabs(adj.b - 5) <= static_cast<std::int64_t>(adj.p));
}

TEST_CASE("prime plan honors instance goodness") {
    // leading form x1^3+x2^3+x3^3 is singular mod 3, so p must skip 3
    Instance inst(3, {diagonal_form(3, 3) + var(3, 0)});
    SelectPrimesOptions opt;
    opt.relax_regime = true;
    opt.exact_identity = true;
    opt.instance = &inst;
    PrimePlan plan = select_primes(3, 1, 7, opt);
    CHECK(plan.p == 5);
    CHECK((2 * plan.b + 1) % 5 == 0);
    CHECK(plan.q >= static_cast<std::uint64_t>(2 * plan.b + 2));
}

TEST_CASE("difference systems classify shifts") {
    Instance fermat(4, {diagonal_form(4, 3)});
    std::uint64_t p = 2, q = 7;

    // y = 0: everything vanishes, sigma = 0
    DiffSystem d0 = difference_system(fermat, p, {0, 0, 0, 0}, q);
    CHECK(d0.all_zero);
    CHECK(d0.sigma == 0);

    // y = e1: leading form 6 x1^2, a single hypersurface: sigma = 1 = r
    DiffSystem d1 = difference_system(fermat, p, {1, 0, 0, 0}, q);
    CHECK_FALSE(d1.all_zero);
    REQUIRE(d1.leading_mod_q.size() == 1);
    CHECK(d1.leading_mod_q[0].degree() == 2);
    CHECK(d1.sigma == 1);
    // Z_y = {x1^2 = 0} is a double plane: singular everywhere, s = dim Z = 2
    CHECK(d1.s_y == 2);

    // generic shift: smooth quadric section, s = -1
    DiffSystem d2 = difference_system(fermat, p, {1, 1, 1, 1}, q);
    CHECK(d2.sigma == 1);
    CHECK(d2.s_y == -1);

    // shift divisible by q degenerates the leading-form law; classified by
    // the computed codimension of the lower-order parts
    DiffSystem d3 = difference_system(fermat, p, {7, 0, 0, 0}, q);
    CHECK(d3.sigma >= 0);
}

TEST_CASE("leading-form law along a census") {
    Instance inst(3, {diagonal_form(3, 3) + var(3, 1)});
    std::uint64_t p = 3, q = 13;
    Rng rng(4242);
    for (int iter = 0; iter < 40; ++iter) {
        std::vector<std::int64_t> y{rng.range(-3, 3), rng.range(-3, 3), rng.range(-3, 3)};
        std::vector<BigInt> yb(3);
        for (unsigned i = 0; i < 3; ++i) yb[i] = y[i];
        IntPoly dir = directional_derivative(inst.leading_forms()[0], yb);
        ReducedPoly dir_q(dir * BigInt(p), q);
        if (dir_q.is_zero()) continue;  // law degenerates
        DiffSystem ds = difference_system(inst, p, y, q);
        REQUIRE(ds.leading_mod_q.size() == 1);
        ReducedPoly lhs(ds.leading_mod_q[0], q);
        CHECK(lhs.lift() == dir_q.lift());
    }
}

TEST_CASE("deviation values") {
    Instance inst(2, {diagonal_form(2, 3)});
    std::int64_t b = 4;
    std::uint64_t p = 3, q = 11;

    // support: (2B+1)/p = 3, so |y| >= 3 vanishes
    CHECK(delta(inst, b, p, q, {3, 0}) == 0);
    CHECK(delta(inst, b, p, q, {0, -3}) == 0);
    CHECK(delta(inst, b, p, q, {5, 5}) == 0);

    // y = 0: (1 - q^{-r}) (2B+1)^n
    BigRat d0 = delta(inst, b, p, q, {0, 0});
    CHECK(d0 == (BigRat(1) - BigRat(1, 11)) * BigRat(81));

    // brute-force cross-check at a generic shift
    std::vector<std::int64_t> y{1, 0};
    IntPoly fy = difference_poly(inst.polys()[0], BigInt(p), {BigInt(1), BigInt(0)});
    BigInt on = 0, tot = 0;
    for (std::int64_t x1 = -4; x1 <= 1; ++x1)
        for (std::int64_t x2 = -4; x2 <= 4; ++x2) {
            ++tot;
            std::vector<BigInt> pt{BigInt(x1), BigInt(x2)};
            BigInt v = fy.eval(pt) % 11;
            if (v < 0) v += 11;
            if (v == 0) ++on;
        }
    CHECK(delta(inst, b, p, q, y) == BigRat(on) - BigRat(tot, 11));
}

TEST_CASE("audit on the worked toy example") {
    // n=2, f = x1^3+x2^3, p=3, q=11, B=4 (2B+1 = 9)
    Instance inst(2, {diagonal_form(2, 3)});
    AuditReport rep = audit(inst, 4, 3, 11);

    CHECK(rep.k_value == BigRat(81, 99));  // = 9/11
    CHECK(rep.x_fp_count == 3);            // x1 + x2 = 0 in F_3 (cubing is identity)
    CHECK(rep.flags.box_partition_exact);
    CHECK(rep.flags.z_decomposition_exact);
    CHECK(rep.flags.delta_support);
    CHECK(rep.flags.sigma_bounded_by_delta);
    CHECK(rep.flags.cauchy_inequality);
    CHECK(rep.flags.all());

    // the enlarged bracket equals the deviation sum exactly
    CHECK(rep.sigma_enlarged == rep.delta_sum);
    // census covers every shift: |y| <= 2 in each axis
    std::uint64_t census_total = 0;
    for (const auto& [sig, cnt] : rep.census_sigma) census_total += cnt;
    CHECK(census_total == 25);

    // error terms are positive and the ratio is finite
    CHECK(rep.error_terms.total > 0);
    CHECK(std::isfinite(rep.residual_over_error));
}

TEST_CASE("audit contract violations") {
    Instance inst(2, {diagonal_form(2, 3)});
    CHECK_THROWS_AS(audit(inst, 4, 3, 3), ContractError);   // p == q
    CHECK_THROWS_AS(audit(inst, 5, 3, 11), ContractError);  // 3 does not divide 11
    CHECK_THROWS_AS(audit(inst, 1, 3, 11), ContractError);  // p < 2B+1 fails
    CHECK_THROWS_AS(audit(inst, 13, 3, 11), ContractError); // 2B+1 < q fails
}

TEST_CASE("audit identities hold on randomized small instances") {
    Rng rng(987654);
    int done = 0;
    for (int iter = 0; iter < 12 && done < 8; ++iter) {
        unsigned n = 2 + static_cast<unsigned>(rng.below(2));
        unsigned r = 1 + static_cast<unsigned>(rng.below(n - 1));
        std::vector<IntPoly> polys;
        for (unsigned i = 0; i < r; ++i) {
            IntPoly f(n);
            for (int t = 0; t < 4; ++t) {
                Exponents e(n);
                for (auto& v : e) v = static_cast<std::uint32_t>(rng.below(3));
                f.add_term(e, rng.range(-8, 8));
            }
            Exponents top(n, 0);
            top[i % n] = 3;
            f.add_term(top, 1 + rng.below(5));
            polys.push_back(f);
        }
        std::uint64_t p = (rng.below(2) == 0) ? 3 : 5;
        std::uint64_t q = (rng.below(2) == 0) ? 11 : 13;
        std::int64_t b = (p == 3) ? 4 : 7;
        Instance inst(n, polys);
        AuditOptions opt;
        opt.with_delta_table = false;
        AuditReport rep = audit(inst, b, p, q, opt);
        CHECK(rep.flags.all());
        CHECK(rep.sigma_enlarged == rep.delta_sum);
        ++done;
    }
    CHECK(done >= 8);
}

TEST_CASE("strata census ratios and totals") {
    Instance inst(3, {diagonal_form(3, 3) + var(3, 0)});
    StrataCensus census = strata_census(inst, 7, 3, 13);
    // #B = (2*(15/3) - 1)^3 = 9^3
    CHECK(census.total_y == 729);
    std::uint64_t total = 0;
    for (const auto& [sig, cnt] : census.sigma_hist) total += cnt;
    CHECK(total == census.total_y);
    // y = 0 contributes the sigma = 0 stratum
    CHECK(census.sigma_hist.at(0) >= 1);
    // most shifts land in the top stratum
    CHECK(census.sigma_hist.at(1) > census.total_y / 2);
    for (const auto& [s, ratio] : census.s_ratio) CHECK(std::isfinite(ratio));
}

TEST_CASE("bracketed audit for general B") {
    Instance inst(2, {diagonal_form(2, 3)});
    AuditOptions opt;
    opt.with_census = false;
    opt.with_delta_table = false;
    BracketedAudit br = audit_bracketed(inst, 5, 3, 13, opt);
    CHECK(br.lower.b == 4);
    CHECK(br.upper.b == 7);
    CHECK(br.lower.flags.all());
    CHECK(br.upper.flags.all());
}

TEST_CASE("error term budget is the sum of six named terms") {
    ErrorTerms e = error_term_budget(3, 1, 7, 3, 19);
    CHECK(e.total ==
          doctest::Approx(e.t1 + e.t2 + e.t3 + e.t4 + e.t5 + e.t6).epsilon(1e-12));
    for (double t : {e.t1, e.t2, e.t3, e.t4, e.t5, e.t6}) CHECK(t > 0);
}

#include "doctest.h"

#include "vdclab/variety.hpp"

using namespace vdclab;

namespace {

IntPoly var(unsigned n, unsigned i, unsigned e = 1) { return IntPoly::monomial(n, i, e, 1); }

// sum of x_i^d over the first m variables
IntPoly diagonal_form(unsigned n, unsigned d) {
    IntPoly f(n);
    for (unsigned i = 0; i < n; ++i) f = f + var(n, i, d);
    return f;
}

}  // namespace

TEST_CASE("count_points matches hand counts") {
    // smooth quadric x0 x1 - x2 x3 in P^3(F_3): (q+1)^2 = 16
    IntPoly quadric = var(4, 0) * var(4, 1) - var(4, 2) * var(4, 3);
    FieldCtx F3(3, 1);
    CHECK(count_points({quadric}, F3, CountMode::Projective) == 16);

    // empty system counts the full space
    FieldCtx F5(5, 1);
    CHECK(count_points(std::vector<IntPoly>{IntPoly(3)}, F5, CountMode::Projective) == 31);
    CHECK(count_points(std::vector<IntPoly>{IntPoly(2)}, F3, CountMode::Affine) == 9);

    // x1^3 + x2^3 in A^2(F_7): 19 points
    FieldCtx F7(7, 1);
    CHECK(count_points({diagonal_form(2, 3)}, F7, CountMode::Affine) == 19);

    // parallel count agrees with sequential
    EnumOptions par;
    par.threads = 2;
    CHECK(count_points({diagonal_form(2, 3)}, F7, CountMode::Affine, par) == 19);

    // affine Fermat cubic cone in A^4(F_7): 595 = 343 + 6*7*6
    CHECK(count_points({diagonal_form(4, 3)}, F7, CountMode::Affine) == 595);
}

TEST_CASE("dimension estimator") {
    DimOptions opt;

    // smooth quadric surface in P^3
    IntPoly quadric = var(4, 0) * var(4, 1) - var(4, 2) * var(4, 3);
    CHECK(projective_dimension({quadric}, 7, 4, opt) == 2);

    // inconsistent system 1 = 0
    CHECK(projective_dimension({IntPoly::constant(3, 1)}, 7, 3, opt) == -1);

    // single nonzero form is a hypersurface: dim n-2
    CHECK(projective_dimension({diagonal_form(3, 3)}, 7, 3, opt) == 1);
    CHECK(projective_dimension({diagonal_form(4, 3)}, 7, 4, opt) == 2);
    CHECK(projective_dimension({diagonal_form(4, 3)}, 11, 4, opt) == 2);

    // no forms at all: the whole space
    CHECK(projective_dimension({}, 7, 4, opt) == 3);

    // zero-dimensional: two conics in P^2 meeting in <= 4 points
    IntPoly c1 = var(3, 0, 2) - var(3, 1) * var(3, 2);
    IntPoly c2 = var(3, 1, 2) - var(3, 0) * var(3, 2);
    CHECK(projective_dimension({c1, c2}, 11, 3, opt) == 0);
}

TEST_CASE("singular locus via the Jacobian rank test") {
    EnumOptions opt;

    // Fermat cubic surface is nonsingular away from char 3
    FieldCtx F7(7, 1);
    auto res = singular_points({diagonal_form(4, 3)}, F7, opt);
    CHECK(res.points.empty());
    CHECK(res.variety_count == 99);  // q^2+q+1 + 6q at q=7

    // char 3 kills every derivative: the whole variety is rank-deficient
    FieldCtx F3(3, 1);
    auto res3 = singular_points({diagonal_form(4, 3)}, F3, opt);
    CHECK(res3.points.size() == res3.variety_count);
    CHECK(res3.variety_count > 0);

    // nodal plane cubic x1^3 - x0 x2^2 in P^2(F_5): exactly (1:0:0)
    IntPoly nodal = var(3, 1, 3) - var(3, 0) * var(3, 2, 2);
    FieldCtx F5(5, 1);
    auto resn = singular_points({nodal}, F5, opt);
    REQUIRE(resn.points.size() == 1);
    CHECK(resn.points[0].coords[0] == F5.one());
    CHECK(F5.is_zero(resn.points[0].coords[1]));
    CHECK(F5.is_zero(resn.points[0].coords[2]));
}

TEST_CASE("singular dimension and reports") {
    DimOptions opt;

    // smooth cases have dim Sing = -1
    CHECK(singular_dimension({diagonal_form(4, 3)}, 7, 4, opt) == -1);

    // nodal plane cubic: a single singular point
    IntPoly nodal = var(3, 1, 3) - var(3, 0) * var(3, 2, 2);
    CHECK(singular_dimension({nodal}, 5, 3, opt) == 0);

    // char | degree: everything singular, dim Sing = dim Z
    SingReport rep3 = analyze_forms({diagonal_form(4, 3)}, 3, 4, 1, opt);
    CHECK(rep3.dim_Z == 2);
    CHECK(rep3.dim_sing == 2);

    SingReport rep7 = analyze_forms({diagonal_form(4, 3)}, 7, 4, 1, opt);
    CHECK(rep7.is_complete_intersection_codim);
    CHECK(rep7.dim_Z == 2);
    CHECK(rep7.dim_sing == -1);
    CHECK(rep7.point_counts.at(1) == 99);
    CHECK(rep7.dim_sing <= rep7.dim_Z);
}

TEST_CASE("strata of the diagonal cubic in P^3") {
    for (std::uint64_t q : {7ull, 11ull}) {
        auto res = strata_sets({diagonal_form(4, 3)}, q);
        // #S = sum over disjoint-support pairs
        std::uint64_t expect = 0;
        auto binom = [](std::uint64_t n, std::uint64_t k) {
            std::uint64_t r = 1;
            for (std::uint64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
            return r;
        };
        for (unsigned asz = 1; asz <= 3; ++asz) {
            std::uint64_t ys = binom(4, asz);
            std::uint64_t unit = 1;
            for (unsigned i = 1; i < asz; ++i) unit *= (q - 1);
            std::uint64_t xcount = 1;
            for (unsigned i = 0; i < 4u - asz; ++i) xcount *= q;
            xcount = (xcount - 1) / (q - 1);
            expect += ys * unit * xcount;
        }
        CHECK(res.s_count == expect);

        // T_2 is exactly the 4 coordinate points
        const auto& t2 = res.t_sets.at(2);
        REQUIRE(t2.size() == 4);
        FieldCtx F(q, 1);
        for (auto yi : t2) {
            const auto& y = res.fibers[yi].y;
            unsigned nonzero = 0;
            for (const auto& c : y.coords)
                if (!F.is_zero(c)) ++nonzero;
            CHECK(nonzero == 1);
            CHECK(res.fibers[yi].fiber_dim == 2);
            CHECK(res.fibers[yi].fiber_size == q * q + q + 1);
        }

        // T_3 is empty and T_s is decreasing
        CHECK(res.t_sets.at(3).empty());
        for (int s = -1; s < 3; ++s)
            CHECK(res.t_sets.at(s).size() >= res.t_sets.at(s + 1).size());

        // T_1 = the 6 coordinate lines: 6(q+1) - 2*4 + 4 points... counted
        // directly: y with support of size <= 2
        CHECK(res.t_sets.at(1).size() == 4 + 6 * (q - 1));
    }
}

TEST_CASE("strata for y = (1:1:1:1) on the diagonal cubic is empty") {
    auto res = strata_sets({diagonal_form(4, 3)}, 7);
    FieldCtx F(7, 1);
    for (const auto& fib : res.fibers) {
        bool all_one = true;
        for (const auto& c : fib.y.coords)
            if (!(c == F.one())) all_one = false;
        if (all_one) {
            CHECK(fib.fiber_size == 0);
            CHECK(fib.fiber_dim == -1);
        }
    }
}

TEST_CASE("strata hypothesis violations are named") {
    CHECK_THROWS_AS(strata_sets({diagonal_form(4, 3)}, 3), HypothesisError);  // q | d
    // singular Z: cone over nodal cubic
    IntPoly nodal4 = var(4, 1, 3) - var(4, 0) * var(4, 2, 2);
    CHECK_THROWS_AS(strata_sets({nodal4}, 7), HypothesisError);
}

TEST_CASE("duplicated forms give rank-deficiency everywhere (codim < r)") {
    // G1 = G2: codim 1 < r = 2; every variety point is rank-deficient
    IntPoly g = diagonal_form(4, 3);
    FieldCtx F7(7, 1);
    auto res = singular_points({g, g}, F7);
    CHECK(res.variety_count == 99);
    CHECK(res.points.size() == res.variety_count);
}

TEST_CASE("good prime search") {
    Instance fermat(4, {diagonal_form(4, 3)});
    CHECK(find_good_prime(fermat, 5, 2.0) == 5);
    // 3 divides the degree, so 3 is rejected and 5 is the next good prime
    CHECK(find_good_prime(fermat, 3, 2.0) == 5);

    GoodPrimeOptions strict;
    strict.require_odd = true;
    CHECK(find_good_prime(fermat, 2, 3.0, strict) == 5);

    CHECK_THROWS_AS(find_good_prime(fermat, 3, 1.1), SearchExhausted);
}

TEST_CASE("good hyperplane search reduces the singular dimension") {
    DimOptions opt;

    // nonsingular input is a contract error
    CHECK_THROWS_AS(find_good_hyperplane({diagonal_form(4, 3)}, 7, 3, opt), ContractError);

    // cone in P^3 over the nodal plane cubic: Sing is the line x1 = x2 = 0
    IntPoly cone = var(4, 1, 3) - var(4, 0) * var(4, 2, 2);
    SingReport rep = analyze_forms({cone}, 5, 4, 1, opt);
    CHECK(rep.dim_Z == 2);
    REQUIRE(rep.dim_sing == 1);

    auto L1 = find_good_hyperplane({cone}, 5, 3, opt);
    std::vector<IntPoly> sliced = {cone};
    IntPoly l1(4);
    for (unsigned j = 0; j < 4; ++j) {
        Exponents e(4, 0);
        e[j] = 1;
        l1.add_term(e, L1[j]);
    }
    sliced.push_back(l1);
    CHECK(projective_dimension(sliced, 5, 4, opt) == 1);
    CHECK(singular_dimension(sliced, 5, 4, opt) == 0);

    // iterating drops the singular dimension to -1 (nonsingular chain)
    auto L2 = find_good_hyperplane(sliced, 5, 3, opt);
    IntPoly l2(4);
    for (unsigned j = 0; j < 4; ++j) {
        Exponents e(4, 0);
        e[j] = 1;
        l2.add_term(e, L2[j]);
    }
    sliced.push_back(l2);
    CHECK(projective_dimension(sliced, 5, 4, opt) == 0);
    CHECK(singular_dimension(sliced, 5, 4, opt) == -1);
}

TEST_CASE("hyperplane section singular dimension") {
    // sections of the Fermat cubic surface: delta in {-1, 0}
    IntPoly f = diagonal_form(4, 3);
    auto d1 = hyperplane_section_sing_dim({f}, {1, 0, 0, 0}, 7);
    CHECK(d1.delta >= -1);
    CHECK(d1.delta <= 0);
    // a = (1,1,1,1): the section x1+x2+x3+x4 = 0 of the Fermat cubic
    auto d2 = hyperplane_section_sing_dim({f}, {1, 1, 1, 1}, 7);
    CHECK(d2.delta >= -1);
    CHECK(d2.delta <= 0);
    CHECK_THROWS_AS(hyperplane_section_sing_dim({f}, {0, 0, 0, 0}, 7), ContractError);
}

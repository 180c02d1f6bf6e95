#include "doctest.h"

#include "vdclab/intpoly.hpp"
#include "vdclab/rng.hpp"

using namespace vdclab;

namespace {

IntPoly var(unsigned n, unsigned i, unsigned e = 1) { return IntPoly::monomial(n, i, e, 1); }

IntPoly random_homogeneous(Rng& rng, unsigned n, unsigned d, int height) {
    IntPoly p(n);
    for (int t = 0; t < 8; ++t) {
        Exponents e(n, 0);
        for (unsigned j = 0; j < d; ++j) e[rng.below(n)] += 1;
        p.add_term(e, rng.range(-height, height));
    }
    if (p.is_zero() || p.degree() != static_cast<int>(d)) p = var(n, 0, d) + p.homogeneous_part(d);
    return p;
}

}  // namespace

TEST_CASE("degree and zero polynomial") {
    IntPoly z(2);
    CHECK(z.is_zero());
    CHECK(z.degree() == kZeroPolyDegree);
    IntPoly c = IntPoly::constant(2, 5);
    CHECK(c.degree() == 0);
    CHECK_THROWS_AS(leading_form(z), ContractError);
}

TEST_CASE("leading form picks the top-degree part") {
    // x1^3 + x1 x2 + 1 -> x1^3
    IntPoly p = var(2, 0, 3) + var(2, 0) * var(2, 1) + IntPoly::constant(2, 1);
    CHECK(leading_form(p) == var(2, 0, 3));

    // x1^3 + x2^3 + 5 x2 -> x1^3 + x2^3
    IntPoly q = var(2, 0, 3) + var(2, 1, 3) + var(2, 1) * BigInt(5);
    CHECK(leading_form(q) == var(2, 0, 3) + var(2, 1, 3));

    // homogeneous -> identity
    IntPoly h = var(2, 0, 2) * BigInt(3) - var(2, 1, 2) * BigInt(7);
    CHECK(leading_form(h) == h);
    CHECK(leading_form(h).is_homogeneous());
}

TEST_CASE("translate_scale binomial expansion") {
    // x^3 shifted by 2*1: (x+2)^3 = x^3 + 6x^2 + 12x + 8
    IntPoly p = var(1, 0, 3);
    IntPoly shifted = translate_scale(p, {BigInt(1)}, BigInt(2));
    IntPoly expect = var(1, 0, 3) + var(1, 0, 2) * BigInt(6) + var(1, 0) * BigInt(12) + IntPoly::constant(1, 8);
    CHECK(shifted == expect);

    // scale = 0 is the identity
    CHECK(translate_scale(p, {BigInt(7)}, BigInt(0)) == p);

    // x1 + x2 with shift (1,-1), scale 3: constants cancel
    IntPoly lin = var(2, 0) + var(2, 1);
    CHECK(translate_scale(lin, {BigInt(1), BigInt(-1)}, BigInt(3)) == lin);

    CHECK_THROWS_AS(translate_scale(p, {BigInt(1), BigInt(2)}, BigInt(1)), ContractError);
}

TEST_CASE("translate_scale round trip") {
    Rng rng(42);
    for (int iter = 0; iter < 25; ++iter) {
        unsigned n = 1 + static_cast<unsigned>(rng.below(3));
        IntPoly p(n);
        for (int t = 0; t < 6; ++t) {
            Exponents e(n);
            for (auto& v : e) v = static_cast<std::uint32_t>(rng.below(4));
            p.add_term(e, rng.range(-9, 9));
        }
        std::vector<BigInt> y(n);
        for (auto& v : y) v = rng.range(-5, 5);
        BigInt s = rng.range(1, 4);
        std::vector<BigInt> neg_y(n);
        for (unsigned i = 0; i < n; ++i) neg_y[i] = -y[i];
        CHECK(translate_scale(translate_scale(p, y, s), neg_y, s) == p);
    }
}

TEST_CASE("difference polynomial") {
    // f = x^3, p = 2, y = (1): 6x^2 + 12x + 8
    IntPoly f = var(1, 0, 3);
    IntPoly d = difference_poly(f, 2, {BigInt(1)});
    CHECK(d == var(1, 0, 2) * BigInt(6) + var(1, 0) * BigInt(12) + IntPoly::constant(1, 8));
    CHECK(d.degree() == f.degree() - 1);

    // independent of the shifted variable -> zero polynomial
    IntPoly g = var(2, 0, 3);
    CHECK(difference_poly(g, 2, {BigInt(0), BigInt(1)}).is_zero());

    // linear f -> constant
    IntPoly lin = var(2, 0) * BigInt(3) + var(2, 1) * BigInt(-2);
    IntPoly dl = difference_poly(lin, 5, {BigInt(1), BigInt(1)});
    CHECK(dl.degree() <= 0);
    CHECK(dl == IntPoly::constant(2, 5));
}

TEST_CASE("gradient and hessian") {
    IntPoly p = var(2, 0, 3) + var(2, 1, 3);
    auto g = gradient(p);
    CHECK(g[0] == var(2, 0, 2) * BigInt(3));
    CHECK(g[1] == var(2, 1, 2) * BigInt(3));

    auto h = hessian(p);
    CHECK(h[0][0] == var(2, 0) * BigInt(6));
    CHECK(h[1][1] == var(2, 1) * BigInt(6));
    CHECK(h[0][1].is_zero());
    CHECK(h[1][0].is_zero());

    auto gc = gradient(IntPoly::constant(2, 11));
    CHECK(gc[0].is_zero());
    CHECK(gc[1].is_zero());
}

TEST_CASE("hessian symmetry on random polynomials") {
    Rng rng(7);
    for (int iter = 0; iter < 10; ++iter) {
        unsigned n = 2 + static_cast<unsigned>(rng.below(2));
        IntPoly p(n);
        for (int t = 0; t < 8; ++t) {
            Exponents e(n);
            for (auto& v : e) v = static_cast<std::uint32_t>(rng.below(4));
            p.add_term(e, rng.range(-20, 20));
        }
        auto h = hessian(p);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) CHECK(h[i][j] == h[j][i]);
    }
}

TEST_CASE("Euler identity for homogeneous forms") {
    Rng rng(20240601);
    for (int iter = 0; iter < 20; ++iter) {
        unsigned n = 2 + static_cast<unsigned>(rng.below(3));
        unsigned d = 2 + static_cast<unsigned>(rng.below(3));
        IntPoly f = random_homogeneous(rng, n, d, 10);
        auto g = gradient(f);
        IntPoly xdot(n);
        for (unsigned i = 0; i < n; ++i) xdot = xdot + var(n, i) * g[i];
        CHECK(xdot == f * BigInt(d));
    }
}

TEST_CASE("leading form of a difference of a homogeneous form") {
    // degree-(d-1) part of F(x+py) - F(x) equals p * (y . grad F) exactly
    Rng rng(99);
    for (int iter = 0; iter < 30; ++iter) {
        unsigned n = 2 + static_cast<unsigned>(rng.below(3));
        unsigned d = 3 + static_cast<unsigned>(rng.below(2));
        IntPoly f = random_homogeneous(rng, n, d, 8);
        BigInt p = rng.below(2) ? 3 : 5;
        std::vector<BigInt> y(n);
        for (auto& v : y) v = rng.range(-4, 4);
        IntPoly diff = difference_poly(f, p, y);
        IntPoly top = diff.homogeneous_part(static_cast<int>(d) - 1);
        CHECK(top == directional_derivative(f, y) * p);
    }
}

TEST_CASE("evaluation") {
    IntPoly p = var(2, 0, 3) + var(2, 1, 3);
    CHECK(p.eval({BigInt(1), BigInt(2)}) == 9);
    CHECK(IntPoly(2).eval({BigInt(5), BigInt(9)}) == 0);
    CHECK(p.eval_mod({1, 2}, 7) == 2);
}

TEST_CASE("homogenize") {
    // f = x1^3 + x2 + 4 in 2 vars -> x0 first: X1^3 + X2 X0^2 + 4 X0^3
    IntPoly f = var(2, 0, 3) + var(2, 1) + IntPoly::constant(2, 4);
    IntPoly g = homogenize(f);
    CHECK(g.n_vars() == 3);
    CHECK(g.is_homogeneous());
    CHECK(g.degree() == 3);
    // setting x0 = 1 recovers f
    IntPoly back(2);
    for (const auto& [e, c] : g.terms()) back.add_term(Exponents(e.begin() + 1, e.end()), c);
    CHECK(back == f);
}

TEST_CASE("PolySystem caches leading forms") {
    IntPoly f1 = var(2, 0, 3) + var(2, 1);
    IntPoly f2 = var(2, 1, 2) + IntPoly::constant(2, -1);
    PolySystem sys(2, {f1, f2});
    CHECK(sys.size() == 2);
    CHECK(sys.leading_form_of(0) == var(2, 0, 3));
    CHECK(sys.leading_form_of(1) == var(2, 1, 2));
    CHECK(sys.max_degree() == 3);
    for (const auto& lf : sys.leading_forms()) CHECK(lf.is_homogeneous());
    CHECK_THROWS_AS(PolySystem(2, {IntPoly(2)}), ContractError);
}

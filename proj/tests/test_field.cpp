#include "doctest.h"

#include <complex>
#include <set>

#include "vdclab/field.hpp"
#include "vdclab/rng.hpp"

using namespace vdclab;

TEST_CASE("primality") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(31));
    CHECK(is_prime_u64(1000003));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(91));
    CHECK(next_prime(14) == 17);
    CHECK(next_prime(17) == 17);
}

TEST_CASE("canonical irreducible moduli") {
    CHECK(find_irreducible(2, 2) == std::vector<std::uint32_t>{1, 1, 1});  // t^2+t+1
    CHECK(find_irreducible(3, 1) == std::vector<std::uint32_t>{0, 1});    // placeholder t
    CHECK(find_irreducible(5, 2) == std::vector<std::uint32_t>{2, 0, 1}); // t^2+2
}

TEST_CASE("field axioms by sampling") {
    for (auto [q, k] : {std::pair<std::uint64_t, unsigned>{7, 1}, {5, 2}, {3, 3}, {2, 4}}) {
        FieldCtx F(q, k);
        Rng rng(1234 + q + k);
        for (int iter = 0; iter < 200; ++iter) {
            FieldElem a = F.elem_at(rng.below(F.order()));
            FieldElem b = F.elem_at(rng.below(F.order()));
            FieldElem c = F.elem_at(rng.below(F.order()));
            CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
            CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
            CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            if (!F.is_zero(a)) CHECK(F.mul(a, F.inv(a)) == F.one());
            // Frobenius is additive
            CHECK(F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b)));
        }
    }
}

TEST_CASE("affine and projective enumeration counts") {
    FieldCtx F3(3, 1);
    std::uint64_t count = 0;
    for_each_affine(F3, 2, 1000, [&](const FieldElem*) { ++count; });
    CHECK(count == 9);

    FieldCtx F5(5, 1);
    CHECK(projective_point_count(F5, 3, 1000) == 31);
    count = 0;
    for_each_projective(F5, 3, 1000, [&](const FieldElem*) { ++count; });
    CHECK(count == 31);

    // P^0 has a single point
    count = 0;
    for_each_projective(F5, 1, 10, [&](const FieldElem*) { ++count; });
    CHECK(count == 1);

    CHECK_THROWS_AS(affine_point_count(F5, 9, 100), BudgetError);
}

TEST_CASE("projective stream has no duplicate normalized points") {
    FieldCtx F(3, 2);
    auto pts = collect_projective(F, 3, 100000);
    CHECK(pts.size() == (9 * 9 * 9 - 1) / (9 - 1));
    std::set<std::vector<std::uint64_t>> seen;
    for (const auto& p : pts) {
        auto norm = normalize_projective(F, p.coords);
        CHECK(norm == p);  // stream is already normalized
        std::vector<std::uint64_t> key;
        for (const auto& c : norm.coords) key.push_back(F.index_of(c));
        CHECK(seen.insert(key).second);
    }
}

TEST_CASE("normalization is idempotent and scaling-invariant") {
    FieldCtx F(7, 1);
    Rng rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<FieldElem> v(3);
        bool nonzero = false;
        for (auto& c : v) {
            c = F.elem_at(rng.below(7));
            nonzero |= !F.is_zero(c);
        }
        if (!nonzero) v[0] = F.one();
        auto n1 = normalize_projective(F, v);
        auto n2 = normalize_projective(F, n1.coords);
        CHECK(n1 == n2);
        FieldElem s = F.elem_at(1 + rng.below(6));
        std::vector<FieldElem> w(v);
        for (auto& c : w) c = F.mul(c, s);
        CHECK(normalize_projective(F, w) == n1);
    }
}

TEST_CASE("additive characters") {
    FieldCtx F7(7, 1);
    CHECK(std::abs(additive_character(F7, 0) - std::complex<double>(1, 0)) < 1e-12);
    auto e1 = additive_character(F7, 1);
    CHECK(std::abs(e1 - std::polar(1.0, 2 * 3.14159265358979323846 / 7)) < 1e-9);

    // orthogonality: sum over a of e_q(a*c) = q if c == 0 else 0
    for (std::int64_t c : {0, 1, 3}) {
        KahanComplex acc;
        for (std::int64_t a = 0; a < 7; ++a) acc.add(additive_character(F7, a * c));
        double expect = (c % 7 == 0) ? 7.0 : 0.0;
        CHECK(std::abs(acc.value() - std::complex<double>(expect, 0)) < 1e-9 * 7);
    }

    // additivity
    FieldCtx F13(13, 1);
    for (std::int64_t a = 0; a < 13; ++a)
        for (std::int64_t b = 0; b < 13; ++b)
            CHECK(std::abs(additive_character(F13, a + b) -
                           additive_character(F13, a) * additive_character(F13, b)) < 1e-12);

    FieldCtx F9(3, 2);
    CHECK_THROWS_AS(additive_character(F9, 1), ContractError);
}

TEST_CASE("reduced polynomial evaluation commutes with reduction") {
    Rng rng(31337);
    for (int iter = 0; iter < 40; ++iter) {
        unsigned n = 1 + static_cast<unsigned>(rng.below(3));
        IntPoly p(n);
        for (int t = 0; t < 7; ++t) {
            Exponents e(n);
            for (auto& v : e) v = static_cast<std::uint32_t>(rng.below(4));
            p.add_term(e, rng.range(-50, 50));
        }
        std::uint64_t q = (iter % 2) ? 7 : 11;
        std::vector<BigInt> zpt(n);
        std::vector<std::int64_t> ipt(n);
        for (unsigned i = 0; i < n; ++i) {
            std::int64_t v = rng.range(-30, 30);
            ipt[i] = v;
            zpt[i] = v;
        }
        BigInt exact = p.eval(zpt);
        BigInt qr = exact % BigInt(q);
        if (qr < 0) qr += q;
        CHECK(eval_reduced(p, ipt, q) == qr.convert_to<std::uint32_t>());
    }

    // 7x^2 + 3 mod 7 is the constant 3
    IntPoly p = IntPoly::monomial(1, 0, 2, 7) + IntPoly::constant(1, 3);
    ReducedPoly rp(p, 7);
    CHECK(rp.term_count() == 1);
    CHECK(rp.degree() == 0);
    std::uint32_t x = 4;
    CHECK(rp.eval_prime(&x, 7) == 3);

    // zero polynomial evaluates to 0
    ReducedPoly z(IntPoly(2), 5);
    std::vector<std::uint32_t> pt{3, 4};
    CHECK(z.eval_prime(pt.data(), 5) == 0);
}

TEST_CASE("extension-field evaluation matches prime-field on lifted points") {
    IntPoly p = IntPoly::monomial(2, 0, 3, 1) + IntPoly::monomial(2, 1, 3, 1);
    FieldCtx F(7, 2);
    ReducedPoly rp(p, 7);
    FieldElem pt[2] = {F.from_residue(1), F.from_residue(2)};
    FieldElem v = rp.eval(F, pt);
    CHECK(v == F.from_residue(2));  // 1 + 8 = 9 = 2 mod 7
}

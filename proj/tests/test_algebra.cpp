// Exact-arithmetic kernels: Laurent polynomials, the Baumslag ring canonical
// form, Heisenberg coordinates, n-adic rationals, and the expression parser.

#include <catch2/catch_amalgamated.hpp>

#include "growthlab/baumslag_ring.hpp"
#include "growthlab/heis.hpp"
#include "growthlab/laurent.hpp"
#include "growthlab/nadic.hpp"
#include "growthlab/ring_text.hpp"
#include "support/naive.hpp"

using namespace growthlab;

namespace {

LaurentPoly random_laurent(Rng& rng, RingTag tag, int max_terms = 4) {
    LaurentPoly p = LaurentPoly::zero(tag);
    int terms = static_cast<int>(rng.range(0, max_terms));
    for (int t = 0; t < terms; ++t) {
        LaurentPoly::Exps e(tag.vars);
        for (int i = 0; i < tag.vars; ++i) e[i] = rng.range(-4, 4);
        p.add_term(std::move(e), BigInt(rng.range(-9, 9)));
    }
    return p;
}

RingExpr random_ring_expr(Rng& rng, uint32_t p, int d, int max_terms = 3, int max_exp = 3) {
    RingExpr expr;
    int terms = static_cast<int>(rng.range(1, max_terms));
    for (int t = 0; t < terms; ++t) {
        RingMonomial m = RingMonomial::ones(d);
        for (int i = 0; i < d; ++i) m.mk[i] = {rng.range(-max_exp, max_exp), rng.range(-max_exp, max_exp)};
        expr.emplace_back(rng.range(1, p - 1), m);
    }
    return expr;
}

RingExpr expr_product(const RingExpr& a, const RingExpr& b, uint32_t p) {
    RingExpr out;
    for (const auto& [ca, ma] : a)
        for (const auto& [cb, mb] : b) {
            RingMonomial m = ma;
            for (size_t i = 0; i < m.mk.size(); ++i) {
                m.mk[i].first += mb.mk[i].first;
                m.mk[i].second += mb.mk[i].second;
            }
            out.emplace_back(static_cast<int64_t>(fp_mul(fp_reduce(ca, p), fp_reduce(cb, p), p)), m);
        }
    return out;
}

}  // namespace

TEST_CASE("laurent examples") {
    RingTag z1 = RingTag::integers(1);
    LaurentPoly t1 = LaurentPoly::monomial(z1, {1}, 1);

    SECTION("additive inverse gives the zero polynomial") {
        REQUIRE((t1 + (-t1)).is_zero());
    }
    SECTION("(1+T)^2 over F2 is 1 + T^2") {
        RingTag f2 = RingTag::fp(2, 1);
        LaurentPoly p = LaurentPoly::constant(f2, 1) + LaurentPoly::monomial(f2, {1}, 1);
        LaurentPoly sq = p * p;
        LaurentPoly expect = LaurentPoly::constant(f2, 1) + LaurentPoly::monomial(f2, {2}, 1);
        REQUIRE(sq == expect);
    }
    SECTION("multiplicative identity") {
        Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            LaurentPoly p = random_laurent(rng, z1);
            REQUIRE(p * LaurentPoly::constant(z1, 1) == p);
        }
    }
    SECTION("domain mismatch is rejected") {
        RingTag f2 = RingTag::fp(2, 1);
        RingTag z2 = RingTag::integers(2);
        REQUIRE_THROWS_AS(LaurentPoly::zero(z1) + LaurentPoly::zero(f2), DomainMismatch);
        REQUIRE_THROWS_AS(LaurentPoly::zero(z1) * LaurentPoly::zero(z2), DomainMismatch);
    }
}

TEST_CASE("laurent ring axioms on random triples") {
    Rng rng(1);
    for (RingTag tag : {RingTag::integers(1), RingTag::fp(3, 1), RingTag::integers(2), RingTag::fp(2, 2)}) {
        for (int i = 0; i < 150; ++i) {
            LaurentPoly a = random_laurent(rng, tag);
            LaurentPoly b = random_laurent(rng, tag);
            LaurentPoly c = random_laurent(rng, tag);
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE(a + b == b + a);
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * b == b * a);
            REQUIRE(a * (b + c) == a * b + a * c);
        }
    }
}

TEST_CASE("baumslag normalization examples") {
    SECTION("T^-1 (1+T)^-1 over F2 becomes T^-1 + (1+T)^-1") {
        RingExpr e = {{1, RingMonomial{{{-1, -1}}}}};
        BaumslagElem n = baumslag_normalize(e, 2, 1);
        BaumslagElem expect(2, 1);
        expect.add_term({BFactor::laurent(-1)}, 1);
        expect.add_term({BFactor::pole(1)}, 1);
        REQUIRE(n == expect);
    }
    SECTION("T (1+T)^-1 over F2 becomes 1 + (1+T)^-1") {
        RingExpr e = {{1, RingMonomial{{{1, -1}}}}};
        BaumslagElem n = baumslag_normalize(e, 2, 1);
        BaumslagElem expect(2, 1);
        expect.add_term({BFactor::laurent(0)}, 1);
        expect.add_term({BFactor::pole(1)}, 1);
        REQUIRE(n == expect);
    }
    SECTION("basis monomials are fixed points") {
        RingExpr e = {{1, RingMonomial{{{2, 0}}}}};
        BaumslagElem n = baumslag_normalize(e, 2, 1);
        BaumslagElem expect(2, 1);
        expect.add_term({BFactor::laurent(2)}, 1);
        REQUIRE(n == expect);
    }
    SECTION("non-prime p is rejected") {
        RingExpr e = {{1, RingMonomial::ones(1)}};
        REQUIRE_THROWS_AS(baumslag_normalize(e, 4, 1), SpecError);
    }
}

TEST_CASE("baumslag normalization is idempotent and multiplicative") {
    Rng rng(2);
    for (uint32_t p : {2u, 3u, 5u}) {
        for (int d : {1, 2}) {
            for (int i = 0; i < 60; ++i) {
                RingExpr e1 = random_ring_expr(rng, p, d);
                RingExpr e2 = random_ring_expr(rng, p, d);
                BaumslagElem n1 = baumslag_normalize(e1, p, d);
                BaumslagElem n2 = baumslag_normalize(e2, p, d);
                // multiplicative: normalizing the product expression equals
                // multiplying the canonical forms
                BaumslagElem prod_expr = baumslag_normalize(expr_product(e1, e2, p), p, d);
                REQUIRE(prod_expr == mul(n1, n2));
                // idempotent: canonical forms parse/normalize to themselves
                REQUIRE(parse_baumslag(n1.render(), p, d) == n1);
            }
        }
    }
}

TEST_CASE("denominator-clearing oracle validates canonical forms") {
    // normalize(x) and x itself must agree after clearing all denominators
    // inside the Laurent ring (an independent arithmetic route).
    Rng rng(3);
    for (uint32_t p : {2u, 3u}) {
        for (int d : {1, 2}) {
            for (int i = 0; i < 40; ++i) {
                RingExpr expr = random_ring_expr(rng, p, d);
                BaumslagElem canon = baumslag_normalize(expr, p, d);
                const int64_t M = 8, K = 8;  // dominates every exponent used here
                LaurentPoly cleared_canon = baumslag_clear(canon, M, K);
                // clear the raw expression directly: each monomial becomes
                // T^{m+M} (1+T)^{k+K}, expanded by Laurent multiplication
                RingTag tag = RingTag::fp(p, d);
                LaurentPoly cleared_raw = LaurentPoly::zero(tag);
                for (const auto& [coeff, mono] : expr) {
                    LaurentPoly term = LaurentPoly::constant(tag, coeff);
                    for (int v = 0; v < d; ++v) {
                        auto [m, k] = mono.mk[v];
                        REQUIRE(k + K >= 0);
                        LaurentPoly f = LaurentPoly::zero(tag);
                        for (int64_t j = 0; j <= k + K; ++j) {
                            LaurentPoly::Exps ev(d, 0);
                            ev[v] = m + M + j;
                            f.add_term(std::move(ev), binom_mod_p(static_cast<uint64_t>(k + K),
                                                                  static_cast<uint64_t>(j), p));
                        }
                        term = term * f;
                    }
                    cleared_raw = cleared_raw + term;
                }
                REQUIRE(cleared_canon == cleared_raw);
            }
        }
    }
}

TEST_CASE("coeff_a0 examples and closed form") {
    SECTION("unit has a0 = 1") {
        REQUIRE(coeff_a0(BaumslagElem::one(2, 1)) == 1);
        REQUIRE(coeff_a0(BaumslagElem::one(3, 2)) == 1);
    }
    SECTION("T^-1 is a Laurent basis term with vanishing a0") {
        BaumslagElem e(2, 1);
        e.add_term({BFactor::laurent(-1)}, 1);
        REQUIRE(coeff_a0(e) == 0);
    }
    SECTION("a0 of normalize(T^-1 (1+T)) is 1") {
        RingExpr expr = {{1, RingMonomial{{{-1, 1}}}}};
        REQUIRE(coeff_a0(baumslag_normalize(expr, 2, 1)) == 1);
    }
    SECTION("a0_of_monomial agrees with full normalization") {
        for (uint32_t p : {2u, 3u, 5u})
            for (int64_t m = -6; m <= 6; ++m)
                for (int64_t k = -6; k <= 6; ++k) {
                    RingExpr expr = {{1, RingMonomial{{{m, k}}}}};
                    uint32_t via_normalize = coeff_a0(baumslag_normalize(expr, p, 1));
                    REQUIRE(a0_of_monomial(m, k, p) == via_normalize);
                }
    }
    SECTION("a0 is linear") {
        Rng rng(4);
        for (int i = 0; i < 60; ++i) {
            RingExpr e1 = random_ring_expr(rng, 5, 1);
            RingExpr e2 = random_ring_expr(rng, 5, 1);
            BaumslagElem n1 = baumslag_normalize(e1, 5, 1);
            BaumslagElem n2 = baumslag_normalize(e2, 5, 1);
            REQUIRE(coeff_a0(n1 + n2) == fp_add(coeff_a0(n1), coeff_a0(n2), 5));
        }
    }
}

TEST_CASE("heisenberg multiplication law") {
    HeisCoord a{1, 0, 0}, b{0, 1, 0}, c{0, 0, 1}, id{};

    SECTION("identity") {
        Rng rng(5);
        for (int i = 0; i < 40; ++i) {
            HeisCoord g{rng.range(-9, 9), rng.range(-9, 9), rng.range(-20, 20)};
            REQUIRE(heis_mul(g, id) == g);
            REQUIRE(heis_mul(id, g) == g);
            REQUIRE(heis_mul(g, heis_inv(g)) == id);
        }
    }
    SECTION("commutator of the generators is c") {
        REQUIRE(heis_commutator(a, b) == c);
    }
    SECTION("central relations") {
        REQUIRE(heis_commutator(a, c) == id);
        REQUIRE(heis_commutator(b, c) == id);
    }
    SECTION("a^2 b^3 against the matrix oracle") {
        HeisCoord lhs = heis_mul(HeisCoord{2, 0, 0}, HeisCoord{0, 3, 0});
        oracle::Mat3 m = oracle::mat_identity();
        for (int i = 0; i < 2; ++i) m = oracle::mat_mul(m, oracle::heis_matrix(1, 0, 0));
        for (int i = 0; i < 3; ++i) m = oracle::mat_mul(m, oracle::heis_matrix(0, 1, 0));
        oracle::Coords want = oracle::mat_coords(m);
        REQUIRE(lhs == HeisCoord{want.x, want.y, want.z});
    }
    SECTION("all words of length <= 6 agree with the matrix model") {
        // letters: a, a^-1, b, b^-1
        const HeisCoord gens[4] = {a, heis_inv(a), b, heis_inv(b)};
        const oracle::Mat3 mats[4] = {oracle::heis_matrix(1, 0, 0), oracle::heis_matrix(-1, 0, 0),
                                      oracle::heis_matrix(0, 1, 0), oracle::heis_matrix(0, -1, 0)};
        int64_t checked = 0;
        for (int len = 0; len <= 6; ++len) {
            std::vector<int> word(len, 0);
            while (true) {
                HeisCoord g = id;
                oracle::Mat3 m = oracle::mat_identity();
                for (int l : word) {
                    g = heis_mul(g, gens[l]);
                    m = oracle::mat_mul(m, mats[l]);
                }
                oracle::Coords want = oracle::mat_coords(m);
                REQUIRE(g == HeisCoord{want.x, want.y, want.z});
                ++checked;
                int i = 0;
                while (i < len && word[i] == 3) word[i++] = 0;
                if (i == len) break;
                ++word[i];
            }
        }
        REQUIRE(checked == 1 + 4 + 16 + 64 + 256 + 1024 + 4096);
    }
}

TEST_CASE("n-adic rationals") {
    SECTION("reduction: 1/2 + 1/2 = 1") {
        NAdic half{1, 1};
        NAdic one = nadic_add(half, half, 2);
        REQUIRE(one == NAdic{1, 0});
    }
    SECTION("integer scaling: 1 * 2^3 = 8") {
        REQUIRE(nadic_scale(NAdic{1, 0}, 3, 2) == NAdic{8, 0});
    }
    SECTION("3/4 * 2^-1 = 3/8") {
        REQUIRE(nadic_scale(NAdic{3, 2}, -1, 2) == NAdic{3, 3});
    }
    SECTION("base mismatch semantics: base must be valid") {
        REQUIRE_THROWS_AS(nadic_add(NAdic{1, 0}, NAdic{1, 0}, 1), SpecError);
    }
    SECTION("reduced form is unique: agreement with exact rationals") {
        Rng rng(6);
        const int64_t base = 3;
        for (int i = 0; i < 300; ++i) {
            NAdic x{rng.range(-50, 50), rng.range(0, 5)};
            NAdic y{rng.range(-50, 50), rng.range(0, 5)};
            x = nadic_reduce(x, base);
            y = nadic_reduce(y, base);
            NAdic s = nadic_add(x, y, base);
            // invariant: reduced
            REQUIRE((s.exp == 0 || s.num % base != 0));
            // oracle: exact rational arithmetic
            auto to_rat = [&](const NAdic& v) {
                oracle::Rat r;
                r.num = v.num;
                r.den = 1;
                for (int64_t e = 0; e < v.exp; ++e) r.den *= base;
                r.reduce();
                return r;
            };
            REQUIRE(to_rat(s) == to_rat(x) + to_rat(y));
            // abelian group axioms
            REQUIRE(nadic_add(x, y, base) == nadic_add(y, x, base));
            REQUIRE(nadic_add(x, nadic_neg(x), base) == NAdic{0, 0});
            // scaling is an automorphism
            REQUIRE(nadic_scale(nadic_add(x, y, base), 2, base) ==
                    nadic_add(nadic_scale(x, 2, base), nadic_scale(y, 2, base), base));
            REQUIRE(nadic_scale(nadic_scale(x, 4, base), -4, base) == x);
        }
    }
}

TEST_CASE("ring expression parser") {
    SECTION("documented example parses and normalizes") {
        BaumslagElem e = parse_baumslag("2*T1^-3*(1+T1)^-2 + 1", 3, 1);
        REQUIRE(!e.is_zero());
        REQUIRE(parse_baumslag(e.render(), 3, 1) == e);
    }
    SECTION("laurent rendering round-trips") {
        Rng rng(8);
        for (RingTag tag : {RingTag::integers(1), RingTag::integers(2), RingTag::fp(5, 1)}) {
            for (int i = 0; i < 60; ++i) {
                LaurentPoly p = random_laurent(rng, tag);
                LaurentPoly back = parse_laurent(p.render(), tag);
                REQUIRE(back == p);
            }
        }
    }
    SECTION("canonical ring forms round-trip") {
        Rng rng(9);
        for (uint32_t p : {2u, 5u}) {
            for (int d : {1, 2}) {
                for (int i = 0; i < 60; ++i) {
                    BaumslagElem e = baumslag_normalize(random_ring_expr(rng, p, d), p, d);
                    REQUIRE(parse_baumslag(e.render(), p, d) == e);
                }
            }
        }
    }
    SECTION("parse errors carry the offending token") {
        REQUIRE_THROWS_AS(parse_ring_expr("T1 + @", 1), SpecError);
        REQUIRE_THROWS_AS(parse_ring_expr("T9", 2), SpecError);
        REQUIRE_THROWS_AS(parse_laurent("(1+T1)^-1", RingTag::integers(1)), SpecError);
    }
}

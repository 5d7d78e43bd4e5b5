// Marked group families: construction, exact actions, coset labelings, and
// the combinators (union, product, induced, sub-marked-group).

#include <catch2/catch_amalgamated.hpp>

#include "growthlab/explorer.hpp"
#include "growthlab/families.hpp"
#include "support/line.hpp"
#include "support/naive.hpp"

using namespace growthlab;

namespace {

Bytes wreath_point(const MarkedAction& a, std::vector<int64_t> b, int64_t lamp) {
    auto space = std::dynamic_pointer_cast<const StdWreathSpace>(a.space);
    REQUIRE(space);
    return space->encode_point(b, lamp);
}

}  // namespace

TEST_CASE("make_family specs and generator counts") {
    SECTION("wreath:C2,Z^1:standard has 3 symmetric generators") {
        MarkedAction a = make_family("wreath:C2,Z^1:standard");
        REQUIRE(a.generator_count() == 3);  // u self-inverse, t, t^-1
        REQUIRE(a.group.inverse_index[0] == 0);
    }
    SECTION("heisenberg:cayley has 4 generators") {
        MarkedAction a = make_family("heisenberg:cayley");
        REQUIRE(a.generator_count() == 4);
        REQUIRE(a.space->is_cayley());
    }
    SECTION("baumslag:p=2,d=1:cosetH has generators u, t^{+-1}, s^{+-1}") {
        MarkedAction a = make_family("baumslag:p=2,d=1:cosetH");
        REQUIRE(a.generator_count() == 5);
    }
    SECTION("invalid parameters are rejected with the offending token") {
        REQUIRE_THROWS_AS(make_family("wreath:C4,Z^1:standard"), SpecError);   // p not prime
        REQUIRE_THROWS_AS(make_family("wreath:C2,Z^0:standard"), SpecError);   // d < 1
        REQUIRE_THROWS_AS(make_family("zwrz:cosets-dk:alpha=1"), SpecError);   // alpha <= 1
        REQUIRE_THROWS_AS(make_family("baumslag:p=6,d=1:cosetH"), SpecError);  // p not prime
        REQUIRE_THROWS_AS(make_family("nosuch:family"), SpecError);
        REQUIRE_THROWS_AS(make_family("bs:2,3:cayley"), SpecError);
    }
}

TEST_CASE("wreath standard action formula") {
    MarkedAction a = make_family("wreath:C2,Z^1:standard");
    Bytes u = word_element(a, "u"), t = word_element(a, "t");

    SECTION("u toggles the lamp exactly at the junction") {
        REQUIRE(a.apply(u, wreath_point(a, {0}, 0)) == wreath_point(a, {0}, 1));
        REQUIRE(a.apply(u, wreath_point(a, {3}, 0)) == wreath_point(a, {3}, 0));
    }
    SECTION("t shifts the base coordinate") {
        REQUIRE(a.apply(t, wreath_point(a, {5}, 1)) == wreath_point(a, {6}, 1));
    }
}

TEST_CASE("every builtin family satisfies the action axioms") {
    for (const std::string spec :
         {"wreath:C2,Z^1:standard", "wreath:Z,Z^1:standard", "wreath:C2,Z^2:standard",
          "wreath:C3,Z^1:cayley", "heisenberg:cayley", "heisenberg:cosets-a",
          "baumslag:p=2,d=1:cosetH", "baumslag:p=3,d=1:cayley-orbit", "baumslag:p=2,d=2:cosetH",
          "bs:1,2:cayley", "bs:1,3:cayley", "fm:d=1:magnus-standard", "fm:d=2:magnus-standard",
          "zwrz:cosets-dk:alpha=2", "zwrz:cosets-dk:alpha=5/2",
          "product:heisenberg:cayley;bs:1,2:cayley"}) {
        INFO(spec);
        MarkedAction a = make_family(spec);
        REQUIRE_NOTHROW(validate_action(a, 3));
    }
}

TEST_CASE("inverse generators undo on a radius-5 ball") {
    for (const std::string spec : {"wreath:Z,Z^1:standard", "heisenberg:cosets-a",
                                   "baumslag:p=2,d=1:cosetH", "zwrz:cosets-dk:alpha=2"}) {
        MarkedAction a = make_family(spec);
        auto spheres = small_ball(a, a.basepoints[0], 5);
        for (const auto& sphere : spheres)
            for (const Bytes& x : sphere)
                for (int i = 0; i < a.generator_count(); ++i)
                    REQUIRE(a.apply_gen(a.group.inverse_index[i], a.apply_gen(i, x)) == x);
    }
}

TEST_CASE("word_to_elem and the composition convention") {
    SECTION("empty word is the identity") {
        MarkedAction a = make_family("heisenberg:cayley");
        REQUIRE(a.word_to_elem({}) == a.identity_elem());
    }
    SECTION("heisenberg commutator word gives c") {
        MarkedAction a = make_family("heisenberg:cayley");
        // a^-1 b^-1 a b with leftmost letter applied last
        Bytes w = word_element(a, "a^-1 b^-1 a b");
        Bytes c = word_element(a, "c");
        REQUIRE(w == c);
    }
    SECTION("acting by a product equals acting twice (wreath, 100 random points)") {
        MarkedAction a = make_family("wreath:Z,Z^1:standard");
        Rng rng(11);
        auto spheres = small_ball(a, a.basepoints[0], 4);
        std::vector<Bytes> pool;
        for (auto& s : spheres) pool.insert(pool.end(), s.begin(), s.end());
        for (int i = 0; i < 100; ++i) {
            std::vector<int> w1, w2;
            for (int j = 0; j < 4; ++j) {
                w1.push_back(static_cast<int>(rng.range(0, a.generator_count() - 1)));
                w2.push_back(static_cast<int>(rng.range(0, a.generator_count() - 1)));
            }
            Bytes g1 = a.word_to_elem(w1), g2 = a.word_to_elem(w2);
            const Bytes& x = pool[static_cast<size_t>(rng.range(0, static_cast<int64_t>(pool.size()) - 1))];
            REQUIRE(a.apply(a.mul_elem(g1, g2), x) == a.apply(g1, a.apply(g2, x)));
        }
    }
}

TEST_CASE("lambda coset labels") {
    MarkedAction a = make_family("baumslag:p=2,d=1:cosetH");
    auto arith = std::dynamic_pointer_cast<const BaumslagArith>(a.group.arith);
    auto space = std::dynamic_pointer_cast<const LambdaCosetSpace>(a.space);

    SECTION("u toggles the label at the origin since a0(1) = 1") {
        Bytes u = word_element(a, "u");
        REQUIRE(a.apply(u, a.basepoints[0]) == space->encode_point({0, 0}, 1));
    }
    SECTION("t and s leave the label untouched") {
        Bytes x = a.apply(word_element(a, "u"), a.basepoints[0]);  // c = 1
        REQUIRE(a.apply(word_element(a, "t"), x) == space->encode_point({1, 0}, 1));
        REQUIRE(a.apply(word_element(a, "s"), x) == space->encode_point({0, 1}, 1));
    }
    SECTION("label is independent of the coset representative (100 random cases)") {
        Rng rng(12);
        for (int i = 0; i < 100; ++i) {
            RingExpr re;
            for (int t = 0; t < 3; ++t) {
                RingMonomial m = RingMonomial::ones(1);
                m.mk[0] = {rng.range(-3, 3), rng.range(-3, 3)};
                re.emplace_back(1, m);
            }
            BaumslagElem r = baumslag_normalize(re, 2, 1);
            BaumslagElem h = r;
            {
                RingExpr kill = {{fp_neg(coeff_a0(h), 2), RingMonomial::ones(1)}};
                h = h + baumslag_normalize(kill, 2, 1);
            }
            REQUIRE(coeff_a0(h) == 0);  // h in H
            std::vector<int64_t> q = {rng.range(-3, 3), rng.range(-3, 3)};
            Bytes g1 = arith->encode(r, q);
            Bytes g2 = a.mul_elem(g1, arith->encode(h, {0, 0}));
            REQUIRE(a.apply(g1, a.basepoints[0]) == a.apply(g2, a.basepoints[0]));
        }
    }
}

TEST_CASE("lamplighter coset labels") {
    MarkedAction a = make_family("zwrz:cosets-dk:alpha=2");
    auto arith = std::dynamic_pointer_cast<const WreathArith>(a.group.arith);
    auto space = std::dynamic_pointer_cast<const ZwrzCosetSpace>(a.space);

    SECTION("constraint positions for alpha=2 are ceil(2^(2k^2))") {
        REQUIRE(space->constraints() ==
                std::vector<int64_t>{4, 256, 262144, 4294967296LL, 1125899906842624LL});
    }
    SECTION("s at a non-constrained position fixes the basepoint") {
        REQUIRE(a.apply(word_element(a, "s"), a.basepoints[0]) == a.basepoints[0]);
    }
    SECTION("s applied at a constrained position changes the residue") {
        // walk to m = -4 = -d_1, pulse s: residue r_1 flips
        Bytes x = a.basepoints[0];
        Bytes g = word_element(a, "s t^-4");
        REQUIRE(a.apply(g, x) != a.apply(word_element(a, "t^-4"), x));
    }
    SECTION("adding 2^k-multiples at constrained positions fixes the coset") {
        Rng rng(13);
        const auto& dks = space->constraints();
        for (int i = 0; i < 100; ++i) {
            std::vector<int> w;
            for (int j = 0; j < 6; ++j) w.push_back(static_cast<int>(rng.range(0, 3)));
            Bytes g = a.word_to_elem(w);
            WreathEl h;
            h.b = {0};
            for (size_t k = 1; k <= 3; ++k)
                if (rng.chance(0.6)) {
                    int64_t v = (1LL << k) * rng.range(-2, 2);
                    if (v) h.lamps.push_back({{dks[k - 1]}, v});
                }
            Bytes g2 = a.mul_elem(g, arith->encode(h));
            REQUIRE(a.apply(g, a.basepoints[0]) == a.apply(g2, a.basepoints[0]));
        }
    }
}

TEST_CASE("heisenberg coset labels") {
    MarkedAction a = make_family("heisenberg:cosets-a");

    SECTION("<a> stabilizes its own coset") {
        for (int m = -5; m <= 5; ++m) {
            Bytes am = HeisArith::encode({m, 0, 0});
            REQUIRE(a.apply(am, a.basepoints[0]) == a.basepoints[0]);
        }
    }
    SECTION("the labeling ignores the a-coordinate of the representative") {
        Rng rng(14);
        for (int i = 0; i < 100; ++i) {
            HeisCoord g{rng.range(-6, 6), rng.range(-6, 6), rng.range(-12, 12)};
            HeisCoord ga = heis_mul(g, HeisCoord{rng.range(-6, 6), 0, 0});
            REQUIRE(a.apply(HeisArith::encode(g), a.basepoints[0]) ==
                    a.apply(HeisArith::encode(ga), a.basepoints[0]));
        }
    }
}

TEST_CASE("bs(1,n) conjugation relation t a t^-1 = a^n") {
    for (int64_t n : {2, 3, 5}) {
        MarkedAction a = make_family("bs:1," + std::to_string(n) + ":cayley");
        Bytes lhs = word_element(a, "t a t^-1");
        Bytes rhs = power(a, word_element(a, "a"), n);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("disjoint union") {
    SECTION("union of an action with itself leaves ball sizes unchanged") {
        MarkedAction comb = make_family("wreath:Z,Z^1:standard");
        MarkedAction uni = disjoint_union({comb, comb});
        GrowthTable t1 = ball_sizes(comb, comb.basepoints[0], 6);
        GrowthTable t2 = ball_sizes(uni, uni.basepoints[0], 6);
        REQUIRE(t1.sizes == t2.sizes);
    }
    SECTION("Z^2 on Z u Z has linear growth (product lemma)") {
        MarkedAction prod = product_action({oracle::line_action(), oracle::line_action()});
        REQUIRE_NOTHROW(validate_action(prod, 4));
        GrowthTable t = max_growth(prod, 16, BasepointSampler::designated());
        for (int n = 0; n <= 16; ++n) REQUIRE(t.sizes[n] == 2 * n + 1);
    }
    SECTION("union growth is the pointwise max over components") {
        MarkedAction cay = make_family("heisenberg:cayley");
        MarkedAction cos = make_family("heisenberg:cosets-a");
        MarkedAction uni = disjoint_union({cay, cos});
        GrowthTable tc = ball_sizes(cay, cay.basepoints[0], 6);
        GrowthTable ts = ball_sizes(cos, cos.basepoints[0], 6);
        GrowthTable tu = max_growth(uni, 6, BasepointSampler::designated());
        for (int n = 0; n <= 6; ++n) REQUIRE(tu.sizes[n] == std::max(tc.sizes[n], ts.sizes[n]));
        // the Cayley component dominates
        for (int n = 0; n <= 6; ++n) REQUIRE(tu.sizes[n] == tc.sizes[n]);
    }
    SECTION("mismatched marked groups are rejected") {
        REQUIRE_THROWS_AS(
            disjoint_union({make_family("heisenberg:cayley"), make_family("bs:1,2:cayley")}),
            SpecError);
    }
}

TEST_CASE("induced actions") {
    MarkedAction h2 = oracle::line_action(2);  // H = 2Z acting on Z

    SECTION("index-1 transversal reproduces the input") {
        MarkedAction h1 = oracle::line_action(1);
        TransversalDecomposition dec;
        dec.table = {{{0, {0}}}, {{0, {1}}}};  // g -> h, g^-1 -> h^-1
        MarkedAction ind = induce(h1, {"g", "g^-1"}, {1, 0}, dec, 1);
        GrowthTable t1 = ball_sizes(h1, h1.basepoints[0], 10);
        GrowthTable t2 = ball_sizes(ind, ind.basepoints[0], 10);
        REQUIRE(t1.sizes == t2.sizes);
    }
    SECTION("G=Z from H=2Z with transversal {0,1} gives the two-sheet line") {
        TransversalDecomposition dec;
        // g.t0 = t1, g.t1 = t0.h ; g^-1.t0 = t1.h^-1, g^-1.t1 = t0
        dec.table = {
            {{1, {}}, {0, {0}}},
            {{1, {1}}, {0, {}}},
        };
        MarkedAction ind = induce(h2, {"g", "g^-1"}, {1, 0}, dec, 2);
        REQUIRE_NOTHROW(validate_action(ind, 4));
        GrowthTable t = ball_sizes(ind, ind.basepoints[0], 16);
        for (int n = 0; n <= 16; ++n) REQUIRE(t.sizes[n] == 2 * n + 1);
        // vol_{G,Y}(n) <= vol_{H,X}(Cn) and conversely, with measured C = 1
        GrowthTable th = ball_sizes(h2, h2.basepoints[0], 16);
        for (int n = 0; n <= 16; ++n) {
            REQUIRE(t.sizes[n] <= th.sizes[n]);
            REQUIRE(th.sizes[n] <= t.sizes[n]);
        }
    }
    SECTION("inconsistent decompositions are rejected, naming the pair") {
        TransversalDecomposition bad;
        bad.table = {
            {{1, {}}, {0, {0}}},
            {{1, {1}}, {1, {}}},  // g^-1 . t1 must return to t0
        };
        REQUIRE_THROWS_WITH(induce(h2, {"g", "g^-1"}, {1, 0}, bad, 2),
                            Catch::Matchers::ContainsSubstring("g,t0"));
    }
}

TEST_CASE("sub-marked-groups restrict the action") {
    MarkedAction full = make_family("wreath:Z,Z^1:standard");
    MarkedAction sub = sub_marked_group(full, {word_element(full, "t")}, {"t"});
    REQUIRE(sub.generator_count() == 2);
    GrowthTable tsub = ball_sizes(sub, full.basepoints[0], 12);
    GrowthTable tfull = ball_sizes(full, full.basepoints[0], 12);
    for (int n = 0; n <= 12; ++n) {
        REQUIRE(tsub.sizes[n] == 2 * n + 1);  // <t> sweeps the tooth line
        REQUIRE(tsub.sizes[n] <= tfull.sizes[n]);
    }
}

TEST_CASE("explorer matches a naive BFS on small balls") {
    for (const std::string spec :
         {"wreath:C2,Z^1:standard", "wreath:Z,Z^2:standard", "heisenberg:cayley",
          "heisenberg:cosets-a", "baumslag:p=2,d=1:cosetH", "bs:1,2:cayley",
          "fm:d=2:magnus-standard", "zwrz:cosets-dk:alpha=2"}) {
        INFO(spec);
        MarkedAction a = make_family(spec);
        GrowthTable t = ball_sizes(a, a.basepoints[0], 5);
        auto naive = oracle::naive_ball_sizes(a, a.basepoints[0], 5);
        REQUIRE(t.sizes == naive);
    }
}

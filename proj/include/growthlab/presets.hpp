#pragma once

// Preset experiments reproducing the desk-scale growth results on the builtin
// families, each checked against thresholds pinned in code, plus the
// randomized property suites. The acceptance suite is the `acceptance-all`
// bundle.

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "growthlab/certificates.hpp"
#include "growthlab/explorer.hpp"
#include "growthlab/families.hpp"
#include "growthlab/fitting.hpp"
#include "growthlab/ring_text.hpp"

namespace growthlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string measured;
    std::string expected;
};

struct PresetReport {
    std::string name;
    std::vector<CheckResult> checks;
    double elapsed_s = 0;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    std::string human() const {
        std::ostringstream os;
        for (const auto& c : checks)
            os << (c.pass ? "[PASS] " : "[FAIL] ") << name << ": " << c.name << " — measured "
               << c.measured << ", expected " << c.expected << "\n";
        return os.str();
    }
};

namespace detail {

inline void check_range(PresetReport& rep, const std::string& name, double measured, double lo,
                        double hi) {
    CheckResult c;
    c.name = name;
    c.pass = measured >= lo && measured <= hi;
    std::ostringstream m, e;
    m.precision(4);
    e.precision(4);
    m << std::fixed << measured;
    e << std::fixed << "[" << lo << ", " << hi << "]";
    c.measured = m.str();
    c.expected = e.str();
    rep.checks.push_back(c);
}

inline void check_flag(PresetReport& rep, const std::string& name, bool ok,
                       const std::string& measured, const std::string& expected) {
    rep.checks.push_back({name, ok, measured, expected});
}

inline double fitted(const std::string& family, int R, int w1, int w2) {
    MarkedAction a = make_family(family);
    GrowthTable t = ball_sizes(a, a.basepoints.at(0), R);
    return fit_exponent(t, std::make_pair(w1, w2)).estimate;
}

}  // namespace detail

// --- criterion 1 -----------------------------------------------------------
inline PresetReport preset_comb_exact() {
    PresetReport rep{"comb-exact"};
    MarkedAction a = make_family("wreath:Z,Z^1:standard");
    GrowthTable t = ball_sizes(a, a.basepoints.at(0), 64);
    bool ok = true;
    int64_t bad_n = -1;
    for (int n = 0; n <= 64; ++n) {
        int64_t expect = 2LL * n * n + 2 * n + 1;
        if (t.sizes[n] != expect) {
            ok = false;
            bad_n = n;
            break;
        }
    }
    detail::check_flag(rep, "comb pointed sizes equal 2n^2+2n+1 for n<=64", ok,
                       ok ? "exact match" : "mismatch at n=" + std::to_string(bad_n), "exact");
    return rep;
}

// --- criterion 2 -----------------------------------------------------------
inline PresetReport preset_sharp_wreath_all() {
    PresetReport rep{"sharp-wreath-all"};
    struct Row {
        const char* family;
        int R;
        double expect;
    };
    const Row rows[] = {
        {"wreath:C2,Z^1:standard", 128, 1.0},
        {"wreath:C2,Z^2:standard", 128, 2.0},
        {"wreath:Z,Z^1:standard", 256, 2.0},
        {"wreath:Z,Z^2:standard", 64, 3.0},
    };
    for (const Row& r : rows) {
        double est = detail::fitted(r.family, r.R, r.R / 4, r.R);
        detail::check_range(rep, std::string(r.family) + " exponent", est, r.expect - 0.15,
                            r.expect + 0.15);
    }
    return rep;
}

inline PresetReport preset_sharp_wreath_d1() {
    PresetReport rep{"sharp-wreath-d1"};
    double est = detail::fitted("wreath:Z,Z^1:standard", 256, 64, 256);
    detail::check_range(rep, "comb exponent", est, 1.85, 2.15);
    return rep;
}

// --- criteria 3 & 4 --------------------------------------------------------
inline PresetReport preset_heis_pointed_vs_max() {
    PresetReport rep{"heis-pointed-vs-max"};
    double cayley = detail::fitted("heisenberg:cayley", 24, 6, 24);
    double coset = detail::fitted("heisenberg:cosets-a", 64, 16, 64);
    detail::check_range(rep, "cayley exponent", cayley, 3.75, 4.25);
    detail::check_range(rep, "cosets-a pointed exponent", coset, 2.8, 3.2);
    detail::check_range(rep, "fit separation", cayley - coset, 0.6, 10.0);
    return rep;
}

inline PresetReport preset_bass_guivarch_heis() {
    PresetReport rep{"bass-guivarch-heis"};
    int64_t alpha = bass_guivarch({2, 1});
    detail::check_flag(rep, "bass_guivarch((2,1)) == 4", alpha == 4, std::to_string(alpha), "4");
    double cayley = detail::fitted("heisenberg:cayley", 24, 6, 24);
    long rounded = std::lround(cayley);
    detail::check_flag(rep, "rounded Cayley fit equals alpha", rounded == alpha,
                       std::to_string(rounded), std::to_string(alpha));
    return rep;
}

// --- criterion 5 -----------------------------------------------------------
inline PresetReport preset_baumslag_quadratic() {
    PresetReport rep{"baumslag-quadratic"};
    double d1 = detail::fitted("baumslag:p=2,d=1:cosetH", 128, 32, 128);
    detail::check_range(rep, "Lambda_2 cosetH exponent (d=1)", d1, 1.85, 2.15);
    double d2 = detail::fitted("baumslag:p=2,d=2:cosetH", 48, 12, 48);
    detail::check_range(rep, "Lambda_{2,2} cosetH exponent (d=2)", d2, 3.7, 4.3);
    return rep;
}

// --- criterion 6 -----------------------------------------------------------
inline PresetReport preset_fm_sharp_d2() {
    PresetReport rep{"fm-sharp-d2"};
    double est = detail::fitted("fm:d=2:magnus-standard", 48, 12, 48);
    detail::check_range(rep, "free metabelian d=2 exponent", est, 2.8, 3.2);
    return rep;
}

// --- criterion 7 -----------------------------------------------------------
inline PresetReport preset_lamplighter_subquadratic(int64_t alpha_num = 2, int64_t alpha_den = 1) {
    PresetReport rep{"lamplighter-subquadratic"};
    std::string spec = "zwrz:cosets-dk:alpha=" + std::to_string(alpha_num) +
                       (alpha_den == 1 ? "" : "/" + std::to_string(alpha_den));
    MarkedAction a = make_family(spec);
    const int R = 200;
    GrowthTable t = ball_sizes(a, a.basepoints.at(0), R);
    double est = fit_exponent(t, std::make_pair(32, 200)).estimate;
    detail::check_range(rep, "pointed fit over [32,200]", est, 0.0, 1.8);

    // v(n) <= C * n * 2^{k(n)^2}; C is measured and reported, not asserted.
    auto space = std::dynamic_pointer_cast<const ZwrzCosetSpace>(a.space);
    const auto& dks = space->constraints();
    double C = 0;
    for (int n = 1; n <= R; ++n) {
        int64_t k = 0;
        while (k < static_cast<int64_t>(dks.size()) && dks[k] <= n) ++k;
        double bound = static_cast<double>(n) * std::pow(2.0, static_cast<double>(k * k));
        C = std::max(C, static_cast<double>(t.sizes[n]) / bound);
    }
    detail::check_flag(rep, "v(n) <= C*n*2^{k(n)^2} with measured C", C > 0,
                       "C = " + double_to_string(C), "finite measured constant");

    // Non-folded pair (lamp, shift) at grid n = 8 within search radius 64.
    // The lamp is taken at the first constrained position whose modulus
    // resolves the grid (2^j >= 2n+1): near the basepoint the coset labels
    // only see lamps at constrained positions.
    const int n = 8;
    int j = 1;
    while ((1LL << j) < 2 * n + 1) ++j;
    std::string lamp = "s@d" + std::to_string(j);
    Certificate w = nonfold_witness(a, {lamp, "t"}, n, 64);
    bool found = w.type == Certificate::Type::NonfoldWitness;
    detail::check_flag(rep, "nonfold witness for (" + lamp + ", t) at grid 8 within radius 64", found,
                       found ? "witness at radius " + std::to_string(w.found_at_radius) : "none found",
                       "witness within radius 64");
    bool replayed = found && replay_certificate(a, w);
    int64_t expect_images = (2LL * n + 1) * (2 * n + 1);
    detail::check_flag(rep, "witness certifies (2*8+1)^2 ball points", replayed && w.image_count == expect_images,
                       std::to_string(w.image_count), std::to_string(expect_images) + " distinct images, replayed");
    return rep;
}

// --- criterion 8 -----------------------------------------------------------
inline PresetReport preset_bs12_folding() {
    PresetReport rep{"bs12-folding"};
    MarkedAction a = make_family("bs:1,2:cayley");
    Certificate col = grid_injectivity(a, {"a", "t", "a"}, 2);
    bool is_col = col.type == Certificate::Type::GridCollision;
    detail::check_flag(rep, "(a,t,a) collides at grid n<=2", is_col,
                       is_col ? "collision " + col.element_render : "no collision", "collision");
    detail::check_flag(rep, "collision certificate replays", is_col && replay_certificate(a, col),
                       "replayed", "replay equals");
    Certificate inj = grid_injectivity(a, {"a", "t"}, 10);
    bool is_inj = inj.type == Certificate::Type::GridInjective;
    detail::check_flag(rep, "(a,t) injective to n=10", is_inj, certificate_type_name(inj.type),
                       "grid-injective");
    detail::check_flag(rep, "injectivity certificate replays", is_inj && replay_certificate(a, inj),
                       "replayed", "replay equals");
    return rep;
}

// --- criterion 9 -----------------------------------------------------------
inline PresetReport preset_confine_lamplighter() {
    PresetReport rep{"confine-lamplighter"};
    MarkedAction a = make_family("wreath:C2,Z^1:standard");
    Certificate r1 = confining_check(a, {"u"}, 0);
    bool refuted = r1.type == Certificate::Type::ConfineRefutation && r1.found_at_radius == 0;
    detail::check_flag(rep, "P={u} refuted at radius 0", refuted,
                       std::string(certificate_type_name(r1.type)) + " at " + std::to_string(r1.found_at_radius),
                       "refutation at radius 0");
    detail::check_flag(rep, "refutation replays", refuted && replay_certificate(a, r1), "replayed",
                       "replay equals");
    Certificate r2 = confining_check(a, {"u", "t u t^-1"}, 32);
    bool holds = r2.type == Certificate::Type::ConfineHolds;
    detail::check_flag(rep, "P={u, tut^-1} holds to radius 32", holds, certificate_type_name(r2.type),
                       "confine-holds-to-radius");
    return rep;
}

// --- criterion 10 ----------------------------------------------------------
inline PresetReport preset_exp_detect() {
    PresetReport rep{"exp-detect"};
    struct Row {
        const char* family;
        int R;
        GrowthClass expect;
    };
    const Row rows[] = {
        {"wreath:C2,Z^1:cayley", 15, GrowthClass::Exponential},
        {"bs:1,2:cayley", 15, GrowthClass::Exponential},
        {"heisenberg:cayley", 24, GrowthClass::Polynomial},
    };
    for (const Row& r : rows) {
        MarkedAction a = make_family(r.family);
        GrowthTable t = ball_sizes(a, a.basepoints.at(0), r.R);
        ExpDetect d = detect_exponential(t);
        detail::check_flag(rep, std::string(r.family) + " classification", d.cls == r.expect,
                           growth_class_name(d.cls), growth_class_name(r.expect));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Randomized property suites (criterion 11). Deterministic at a given seed.

struct SuiteResult {
    std::string name;
    int64_t cases = 0;
    int64_t failures = 0;
    std::string first_failure;
};

namespace detail {

inline const std::vector<std::string>& suite_family_pool() {
    static const std::vector<std::string> pool = {
        "wreath:C2,Z^1:standard", "wreath:Z,Z^1:standard",   "wreath:C3,Z^2:standard",
        "heisenberg:cayley",      "heisenberg:cosets-a",     "baumslag:p=2,d=1:cosetH",
        "bs:1,2:cayley",          "fm:d=2:magnus-standard",  "zwrz:cosets-dk:alpha=2",
    };
    return pool;
}

inline std::vector<MarkedAction>& suite_actions() {
    static std::vector<MarkedAction> acts = [] {
        std::vector<MarkedAction> v;
        for (const auto& s : suite_family_pool()) v.push_back(make_family(s));
        return v;
    }();
    return acts;
}

inline Bytes random_word_elem(Rng& rng, const MarkedAction& a, int max_len) {
    int len = static_cast<int>(rng.range(0, max_len));
    std::vector<int> letters;
    for (int i = 0; i < len; ++i) letters.push_back(static_cast<int>(rng.range(0, a.generator_count() - 1)));
    return a.word_to_elem(letters);
}

inline Bytes random_ball_point(Rng& rng, const MarkedAction& a, int radius) {
    auto spheres = small_ball(a, a.basepoints.at(0), radius);
    int s = static_cast<int>(rng.range(0, static_cast<int64_t>(spheres.size()) - 1));
    const auto& sphere = spheres[s];
    return sphere[static_cast<size_t>(rng.range(0, static_cast<int64_t>(sphere.size()) - 1))];
}

template <class Body>
SuiteResult run_suite(const std::string& name, int64_t cases, Rng& rng, Body&& body) {
    SuiteResult r;
    r.name = name;
    r.cases = cases;
    for (int64_t i = 0; i < cases; ++i) {
        std::string why = body(rng);
        if (!why.empty()) {
            ++r.failures;
            if (r.first_failure.empty()) r.first_failure = why;
        }
    }
    return r;
}

}  // namespace detail

inline std::vector<SuiteResult> property_suites(uint64_t seed, int64_t cases_per_suite = 1000) {
    std::vector<SuiteResult> out;
    auto& acts = detail::suite_actions();

    {
        Rng rng(seed ^ 0x11);
        out.push_back(detail::run_suite("group-axiom", cases_per_suite, rng, [&](Rng& r) -> std::string {
            const MarkedAction& a = acts[static_cast<size_t>(r.range(0, acts.size() - 1))];
            Bytes u = detail::random_word_elem(r, a, 5);
            Bytes v = detail::random_word_elem(r, a, 5);
            Bytes w = detail::random_word_elem(r, a, 5);
            if (a.mul_elem(a.mul_elem(u, v), w) != a.mul_elem(u, a.mul_elem(v, w)))
                return "associativity fails on " + a.spec;
            if (a.mul_elem(u, a.inv_elem(u)) != a.identity_elem()) return "inverse fails on " + a.spec;
            if (a.mul_elem(a.identity_elem(), v) != v) return "identity fails on " + a.spec;
            return "";
        }));
    }
    {
        Rng rng(seed ^ 0x22);
        out.push_back(detail::run_suite("action-axiom", cases_per_suite, rng, [&](Rng& r) -> std::string {
            const MarkedAction& a = acts[static_cast<size_t>(r.range(0, acts.size() - 1))];
            Bytes g = detail::random_word_elem(r, a, 4);
            Bytes h = detail::random_word_elem(r, a, 4);
            Bytes x = detail::random_ball_point(r, a, 3);
            if (a.apply(a.identity_elem(), x) != x) return "identity moves a point of " + a.spec;
            if (a.apply(a.mul_elem(g, h), x) != a.apply(g, a.apply(h, x)))
                return "composition fails on " + a.spec;
            if (a.apply(a.inv_elem(g), a.apply(g, x)) != x) return "inverse action fails on " + a.spec;
            return "";
        }));
    }
    {
        Rng rng(seed ^ 0x33);
        MarkedAction lam = make_family("baumslag:p=2,d=1:cosetH");
        MarkedAction lam3 = make_family("baumslag:p=3,d=1:cosetH");
        MarkedAction zz = make_family("zwrz:cosets-dk:alpha=2");
        MarkedAction hc = make_family("heisenberg:cosets-a");
        out.push_back(detail::run_suite("label-well-definedness", cases_per_suite, rng,
                                        [&](Rng& r) -> std::string {
            int which = static_cast<int>(r.range(0, 2));
            if (which == 0) {
                const MarkedAction& a = r.chance(0.5) ? lam : lam3;
                auto arith = std::dynamic_pointer_cast<const BaumslagArith>(a.group.arith);
                uint32_t p = arith->p();
                // random (rr, q) and random h in H (a0(h) = 0)
                RingExpr re;
                int terms = static_cast<int>(r.range(1, 3));
                for (int i = 0; i < terms; ++i) {
                    RingMonomial m = RingMonomial::ones(1);
                    m.mk[0] = {r.range(-3, 3), r.range(-3, 3)};
                    re.emplace_back(r.range(1, p - 1), m);
                }
                BaumslagElem rr = baumslag_normalize(re, p, 1);
                BaumslagElem h = rr;  // start from a random element, then kill a0
                {
                    RingExpr re2;
                    RingMonomial m = RingMonomial::ones(1);
                    re2.emplace_back(fp_neg(coeff_a0(h), p), m);
                    h = h + baumslag_normalize(re2, p, 1);
                }
                if (coeff_a0(h) != 0) return "oracle bug: a0(h) != 0";
                std::vector<int64_t> q = {r.range(-3, 3), r.range(-3, 3)};
                Bytes g1 = arith->encode(rr, q);
                Bytes hh = arith->encode(h, {0, 0});
                Bytes g2 = a.mul_elem(g1, hh);
                if (a.apply(g1, a.basepoints[0]) != a.apply(g2, a.basepoints[0]))
                    return "Lambda coset label depends on the representative";
                return "";
            }
            if (which == 1) {
                auto arith = std::dynamic_pointer_cast<const WreathArith>(zz.group.arith);
                auto space = std::dynamic_pointer_cast<const ZwrzCosetSpace>(zz.space);
                Bytes g = detail::random_word_elem(r, zz, 6);
                WreathEl h;
                h.b = {0};
                const auto& dks = space->constraints();
                for (size_t k = 1; k <= dks.size() && k <= 3; ++k)
                    if (r.chance(0.5))
                        h.lamps.push_back({{dks[k - 1]}, (1LL << k) * r.range(-2, 2)});
                std::erase_if(h.lamps, [](const auto& l) { return l.second == 0; });
                Bytes g2 = zz.mul_elem(g, arith->encode(h));
                if (zz.apply(g, zz.basepoints[0]) != zz.apply(g2, zz.basepoints[0]))
                    return "lamplighter coset label depends on the representative";
                return "";
            }
            Bytes g = detail::random_word_elem(r, hc, 6);
            Bytes am = HeisArith::encode({r.range(-5, 5), 0, 0});
            Bytes g2 = hc.mul_elem(g, am);
            if (hc.apply(g, hc.basepoints[0]) != hc.apply(g2, hc.basepoints[0]))
                return "Heisenberg coset label depends on x";
            return "";
        }));
    }
    {
        Rng rng(seed ^ 0x44);
        out.push_back(detail::run_suite("growth-table-invariants", cases_per_suite, rng,
                                        [&](Rng& r) -> std::string {
            const MarkedAction& a = acts[static_cast<size_t>(r.range(0, acts.size() - 1))];
            Bytes x = detail::random_ball_point(r, a, 2);
            int R = static_cast<int>(r.range(3, 6));
            try {
                GrowthTable t = ball_sizes(a, x, R);
                check_table_invariants(t, a.generator_count());
            } catch (const std::exception& e) {
                return std::string("table invariant violated: ") + e.what();
            }
            return "";
        }));
    }
    {
        Rng rng(seed ^ 0x55);
        out.push_back(detail::run_suite("monotonicity", cases_per_suite, rng, [&](Rng& r) -> std::string {
            const MarkedAction& a = acts[static_cast<size_t>(r.range(0, acts.size() - 1))];
            const int c = 2;  // sub-generators are words of length <= 2
            int count = static_cast<int>(r.range(1, 3));
            std::vector<Bytes> subgens;
            std::vector<std::string> names;
            for (int i = 0; i < count; ++i) {
                Bytes e = detail::random_word_elem(r, a, c);
                subgens.push_back(e);
                names.push_back("w" + std::to_string(i));
            }
            MarkedAction sub = sub_marked_group(a, subgens, names);
            int R = static_cast<int>(r.range(2, 4));
            GrowthTable tsub = ball_sizes(sub, a.basepoints[0], R);
            GrowthTable tfull = ball_sizes(a, a.basepoints[0], c * R);
            for (int n = 0; n <= R; ++n)
                if (tsub.sizes[n] > tfull.sizes[c * n])
                    return "vol_sub(" + std::to_string(n) + ") > vol_full(" + std::to_string(c * n) +
                           ") on " + a.spec;
            return "";
        }));
    }
    return out;
}

inline PresetReport preset_property_suites(uint64_t seed = 0, int64_t cases = 1000) {
    PresetReport rep{"property-suites"};
    for (const SuiteResult& s : property_suites(seed, cases)) {
        detail::check_flag(rep, s.name + " (" + std::to_string(s.cases) + " cases)", s.failures == 0,
                           s.failures == 0 ? "all passed" : std::to_string(s.failures) + " failed: " + s.first_failure,
                           "0 failures");
    }
    return rep;
}

// ---------------------------------------------------------------------------

inline std::vector<std::string> preset_names() {
    return {"comb-exact",
            "sharp-wreath-d1",
            "sharp-wreath-all",
            "heis-pointed-vs-max",
            "bass-guivarch-heis",
            "baumslag-quadratic",
            "fm-sharp-d2",
            "lamplighter-subquadratic:alpha=2",
            "bs12-folding",
            "confine-lamplighter",
            "exp-detect",
            "property-suites",
            "acceptance-all"};
}

inline std::vector<PresetReport> run_preset(const std::string& name);

namespace detail {

inline PresetReport timed(PresetReport (*fn)()) {
    auto t0 = std::chrono::steady_clock::now();
    PresetReport r = fn();
    r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace detail

inline std::vector<PresetReport> run_preset(const std::string& name) {
    auto base = name.substr(0, name.find(':'));
    if (base == "comb-exact") return {detail::timed(preset_comb_exact)};
    if (base == "sharp-wreath-d1") return {detail::timed(preset_sharp_wreath_d1)};
    if (base == "sharp-wreath-all") return {detail::timed(preset_sharp_wreath_all)};
    if (base == "heis-pointed-vs-max") return {detail::timed(preset_heis_pointed_vs_max)};
    if (base == "bass-guivarch-heis") return {detail::timed(preset_bass_guivarch_heis)};
    if (base == "baumslag-quadratic") return {detail::timed(preset_baumslag_quadratic)};
    if (base == "fm-sharp-d2") return {detail::timed(preset_fm_sharp_d2)};
    if (base == "lamplighter-subquadratic") {
        int64_t num = 2, den = 1;
        auto colon = name.find(":alpha=");
        if (colon != std::string::npos) {
            std::string v = name.substr(colon + 7);
            auto slash = v.find('/');
            num = std::stoll(v.substr(0, slash == std::string::npos ? v.size() : slash));
            if (slash != std::string::npos) den = std::stoll(v.substr(slash + 1));
        }
        auto t0 = std::chrono::steady_clock::now();
        PresetReport r = preset_lamplighter_subquadratic(num, den);
        r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return {r};
    }
    if (base == "bs12-folding") return {detail::timed(preset_bs12_folding)};
    if (base == "confine-lamplighter") return {detail::timed(preset_confine_lamplighter)};
    if (base == "exp-detect") return {detail::timed(preset_exp_detect)};
    if (base == "property-suites") {
        auto t0 = std::chrono::steady_clock::now();
        PresetReport r = preset_property_suites();
        r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return {r};
    }
    if (base == "acceptance-all") {
        std::vector<PresetReport> all;
        for (const std::string& n :
             {"comb-exact", "sharp-wreath-all", "heis-pointed-vs-max", "bass-guivarch-heis",
              "baumslag-quadratic", "fm-sharp-d2", "lamplighter-subquadratic:alpha=2", "bs12-folding",
              "confine-lamplighter", "exp-detect", "property-suites"}) {
            auto sub = run_preset(n);
            all.insert(all.end(), sub.begin(), sub.end());
        }
        return all;
    }
    throw SpecError("unknown preset", name);
}

}  // namespace growthlab

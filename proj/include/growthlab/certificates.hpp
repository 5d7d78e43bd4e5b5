#pragma once

// Finite-radius certificate searches: grid injectivity of tuple maps into the
// group, non-folded-tuple witness points, and confining-set checks. Every
// certificate carries enough data to be replayed from raw element and point
// arithmetic.

#include <set>
#include <unordered_map>
#include <vector>

#include "growthlab/action.hpp"
#include "growthlab/common.hpp"
#include "growthlab/explorer.hpp"

namespace growthlab {

struct Certificate {
    enum class Type {
        GridCollision,       // two exponent tuples with equal products
        GridInjective,       // injective on [-n, n]^k
        NonfoldWitness,      // point with injective grid orbit map
        NonfoldNone,         // no witness within the search radius (inconclusive)
        ConfineRefutation,   // a ball point fixed by no p in P
        ConfineHolds         // every ball point fixed by some p in P
    };

    Type type;
    std::string family_spec;
    std::vector<std::string> words;  // tuple words / confining-set words
    int grid_n = 0;
    int search_radius = -1;

    std::vector<int64_t> lhs, rhs;   // colliding exponent tuples
    std::string element_render;      // the shared product, human-readable

    Bytes point;                     // witness / refutation point (encoded)
    std::string point_render;
    int found_at_radius = -1;
    int64_t image_count = 0;

    bool group_level_collision = false;  // NonfoldNone because the element map folds
};

inline const char* certificate_type_name(Certificate::Type t) {
    switch (t) {
        case Certificate::Type::GridCollision: return "grid-collision";
        case Certificate::Type::GridInjective: return "grid-injective";
        case Certificate::Type::NonfoldWitness: return "nonfold-witness";
        case Certificate::Type::NonfoldNone: return "nonfold-none-found";
        case Certificate::Type::ConfineRefutation: return "confine-refutation";
        case Certificate::Type::ConfineHolds: return "confine-holds-to-radius";
    }
    return "?";
}

namespace detail {

// Odometer over [-n, n]^k, first coordinate fastest; with cached suffix
// products the map (n_1..n_k) -> g_k^{n_k} ... g_1^{n_1} costs O(1) muls per
// step. visit(exps, product) -> bool (false stops the walk).
template <class Visit>
void walk_grid_products(const MarkedAction& a, const std::vector<Bytes>& tuple, int n, Visit&& visit) {
    int k = static_cast<int>(tuple.size());
    std::vector<std::vector<Bytes>> pow(k);  // pow[i][e+n] = g_{i+1}^e
    for (int i = 0; i < k; ++i) {
        pow[i].resize(2 * n + 1);
        for (int e = -n; e <= n; ++e) pow[i][e + n] = power(a, tuple[i], e);
    }
    std::vector<int64_t> exps(k, -n);
    // suffix[i] = g_k^{e_k} * ... * g_{i+1}^{e_{i+1}}  (suffix[k-1] = identity)
    std::vector<Bytes> suffix(k);
    auto refresh = [&](int from) {
        for (int i = from; i >= 0; --i) {
            Bytes higher = (i == k - 1) ? a.identity_elem() : suffix[i + 1];
            suffix[i] = (i == k - 1) ? higher : a.mul_elem(higher, pow[i + 1][exps[i + 1] + n]);
        }
    };
    refresh(k - 1);
    while (true) {
        Bytes prod = a.mul_elem(suffix[0], pow[0][exps[0] + n]);
        if (!visit(exps, prod)) return;
        int i = 0;
        while (i < k && exps[i] == n) {
            exps[i] = -n;
            ++i;
        }
        if (i == k) return;
        ++exps[i];
        refresh(i - 1);
    }
}

}  // namespace detail

// Either a collision certificate (two distinct exponent tuples whose products
// agree) or injectivity of (n_1..n_k) -> g_k^{n_k}...g_1^{n_1} on [-n, n]^k.
inline Certificate grid_injectivity(const MarkedAction& a, const std::vector<std::string>& words,
                                    int n, int64_t cap = 10'000'000) {
    if (words.empty() || n < 1) throw SpecError("grid injectivity needs k >= 1 and n >= 1");
    if (!a.group.arith->canonical_equality())
        throw SpecError("element equality is not decidable for this action", a.spec);
    int k = static_cast<int>(words.size());
    double total = 1;
    for (int i = 0; i < k; ++i) total *= (2.0 * n + 1);
    if (total > static_cast<double>(cap)) throw BudgetError("grid size exceeds the configured cap");

    std::vector<Bytes> tuple;
    for (const auto& w : words) tuple.push_back(word_element(a, w));

    Certificate cert;
    cert.family_spec = a.spec;
    cert.words = words;
    cert.grid_n = n;
    cert.type = Certificate::Type::GridInjective;

    std::unordered_map<Bytes, std::vector<int64_t>> seen;
    seen.reserve(std::min(static_cast<size_t>(total), size_t{1} << 20));
    detail::walk_grid_products(a, tuple, n, [&](const std::vector<int64_t>& exps, const Bytes& prod) {
        auto [it, fresh] = seen.emplace(prod, exps);
        if (!fresh) {
            cert.type = Certificate::Type::GridCollision;
            cert.lhs = it->second;
            cert.rhs = exps;
            cert.element_render = a.group.arith->render(prod);
            return false;
        }
        return true;
    });
    return cert;
}

// Searches the radius-R ball (BFS discovery order from the designated
// basepoint) for a point whose grid orbit map is injective; first witness
// wins. A group-level collision of the tuple map means no witness can exist
// at any point, which is certified without searching.
inline Certificate nonfold_witness(const MarkedAction& a, const std::vector<std::string>& words,
                                   int n, int R, ExploreOptions opt = {}, int64_t cap = 1'000'000) {
    if (words.empty() || n < 1) throw SpecError("nonfold witness needs k >= 1 and n >= 1");
    int k = static_cast<int>(words.size());
    double total = 1;
    for (int i = 0; i < k; ++i) total *= (2.0 * n + 1);
    if (total > static_cast<double>(cap)) throw BudgetError("grid size exceeds the configured cap");
    int64_t grid_points = static_cast<int64_t>(total);

    Certificate cert;
    cert.family_spec = a.spec;
    cert.words = words;
    cert.grid_n = n;
    cert.search_radius = R;

    if (a.group.arith->canonical_equality()) {
        Certificate g = grid_injectivity(a, words, n, cap);
        if (g.type == Certificate::Type::GridCollision) {
            cert.type = Certificate::Type::NonfoldNone;
            cert.group_level_collision = true;
            cert.lhs = g.lhs;
            cert.rhs = g.rhs;
            cert.element_render = g.element_render;
            return cert;
        }
    }

    std::vector<Bytes> tuple;
    for (const auto& w : words) tuple.push_back(word_element(a, w));
    std::vector<std::vector<Bytes>> pow(k);
    for (int i = 0; i < k; ++i) {
        pow[i].resize(2 * n + 1);
        for (int e = -n; e <= n; ++e) pow[i][e + n] = power(a, tuple[i], e);
    }

    auto injective_at = [&](const Bytes& x) {
        std::set<Bytes> images;
        std::vector<int64_t> exps(k, -n);
        while (true) {
            Bytes y = x;
            for (int i = 0; i < k; ++i) y = a.apply(pow[i][exps[i] + n], y);
            if (!images.insert(y).second) return false;
            int i = 0;
            while (i < k && exps[i] == n) {
                exps[i] = -n;
                ++i;
            }
            if (i == k) break;
            ++exps[i];
        }
        return static_cast<int64_t>(images.size()) == grid_points;
    };

    ExplorationSession session(a, a.basepoints.at(0), opt);
    while (true) {
        for (const Bytes& x : session.sphere()) {
            if (injective_at(x)) {
                cert.type = Certificate::Type::NonfoldWitness;
                cert.point = x;
                cert.point_render = a.space->render_point(x);
                cert.found_at_radius = session.radius();
                cert.image_count = grid_points;
                return cert;
            }
        }
        if (session.radius() >= R || !session.advance()) break;
    }
    cert.type = Certificate::Type::NonfoldNone;
    return cert;
}

// Refutation point (fixed by no p in P) within radius R, or holds-up-to-R.
// P must consist of non-identity elements.
inline Certificate confining_check(const MarkedAction& a, const std::vector<std::string>& pset_words,
                                   int R, ExploreOptions opt = {}) {
    if (pset_words.empty()) throw SpecError("confining set must be nonempty");
    if (R < 0) throw SpecError("radius must be >= 0", std::to_string(R));
    std::vector<Bytes> pset;
    for (const auto& w : pset_words) {
        Bytes e = word_element(a, w);
        if (a.group.arith->canonical_equality() && e == a.identity_elem())
            throw SpecError("confining set contains the identity", w);
        pset.push_back(e);
    }

    Certificate cert;
    cert.family_spec = a.spec;
    cert.words = pset_words;
    cert.search_radius = R;
    cert.type = Certificate::Type::ConfineHolds;

    ExplorationSession session(a, a.basepoints.at(0), opt);
    while (true) {
        for (const Bytes& x : session.sphere()) {
            bool fixed = false;
            for (const Bytes& p : pset)
                if (a.apply(p, x) == x) {
                    fixed = true;
                    break;
                }
            if (!fixed) {
                cert.type = Certificate::Type::ConfineRefutation;
                cert.point = x;
                cert.point_render = a.space->render_point(x);
                cert.found_at_radius = session.radius();
                return cert;
            }
        }
        if (session.radius() >= R || !session.advance()) break;
    }
    return cert;
}

// Re-verifies a certificate from raw element/point arithmetic.
inline bool replay_certificate(const MarkedAction& a, const Certificate& cert) {
    using T = Certificate::Type;
    switch (cert.type) {
        case T::GridCollision: {
            if (cert.lhs == cert.rhs) return false;
            std::vector<Bytes> tuple;
            for (const auto& w : cert.words) tuple.push_back(word_element(a, w));
            auto product = [&](const std::vector<int64_t>& exps) {
                Bytes g = a.identity_elem();
                for (int i = static_cast<int>(tuple.size()) - 1; i >= 0; --i)
                    g = a.mul_elem(g, power(a, tuple[i], exps[i]));
                return g;
            };
            return product(cert.lhs) == product(cert.rhs);
        }
        case T::GridInjective: {
            Certificate again = grid_injectivity(a, cert.words, cert.grid_n);
            return again.type == T::GridInjective;
        }
        case T::NonfoldWitness: {
            std::vector<Bytes> tuple;
            for (const auto& w : cert.words) tuple.push_back(word_element(a, w));
            int n = cert.grid_n, k = static_cast<int>(tuple.size());
            std::set<Bytes> images;
            std::vector<int64_t> exps(k, -n);
            while (true) {
                Bytes y = cert.point;
                for (int i = 0; i < k; ++i) y = a.apply(power(a, tuple[i], exps[i]), y);
                images.insert(y);
                int i = 0;
                while (i < k && exps[i] == n) {
                    exps[i] = -n;
                    ++i;
                }
                if (i == k) break;
                ++exps[i];
            }
            return static_cast<int64_t>(images.size()) == cert.image_count;
        }
        case T::NonfoldNone: {
            Certificate again = nonfold_witness(a, cert.words, cert.grid_n, cert.search_radius);
            return again.type == T::NonfoldNone;
        }
        case T::ConfineRefutation: {
            for (const auto& w : cert.words)
                if (a.apply(word_element(a, w), cert.point) == cert.point) return false;
            return true;
        }
        case T::ConfineHolds: {
            Certificate again = confining_check(a, cert.words, cert.search_radius);
            return again.type == T::ConfineHolds;
        }
    }
    return false;
}

}  // namespace growthlab

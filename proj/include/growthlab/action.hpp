#pragma once

// Marked actions: a group with a fixed symmetric generator list acting on a
// point space. Elements and points are carried as canonical byte strings, so
// equality is byte equality and deduplication hashes bytes; each family
// supplies the codecs and the arithmetic behind them.
//
// Composition convention (global): a word s1 s2 ... sk denotes the element
// s1*s2*...*sk and acts as s1 o s2 o ... o sk, i.e. the leftmost letter is
// applied last.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "growthlab/common.hpp"

namespace growthlab {

class GroupArith {
public:
    virtual ~GroupArith() = default;

    virtual std::string signature() const = 0;
    virtual Bytes identity() const = 0;
    virtual Bytes mul(const Bytes& g, const Bytes& h) const = 0;
    virtual Bytes inverse(const Bytes& g) const = 0;
    virtual std::string render(const Bytes& g) const = 0;

    // False when byte equality underapproximates group equality (free words).
    virtual bool canonical_equality() const { return true; }

    // Named subsets for relative growth.
    virtual bool has_subset(const std::string& name) const { return name == "whole"; }
    virtual bool subset_member(const std::string& name, const Bytes&) const {
        if (name == "whole") return true;
        throw SpecError("unknown subset", name);
    }
};

struct MarkedGroup {
    std::shared_ptr<const GroupArith> arith;
    std::vector<Bytes> gens;
    std::vector<std::string> gen_names;
    std::vector<int> inverse_index;       // inverse_index[i] = j with gens[j] == gens[i]^-1
    std::map<std::string, Bytes> atoms;   // extra named elements usable in words

    int generator_count() const { return static_cast<int>(gens.size()); }

    Bytes element_of_name(const std::string& base) const {
        for (size_t i = 0; i < gen_names.size(); ++i)
            if (gen_names[i] == base) return gens[i];
        auto it = atoms.find(base);
        if (it != atoms.end()) return it->second;
        throw SpecError("unknown generator or atom", base);
    }
};

class PointSpace {
public:
    virtual ~PointSpace() = default;

    virtual Bytes apply_gen(int i, const Bytes& x) const = 0;
    virtual Bytes apply_elem(const Bytes& g, const Bytes& x) const = 0;
    virtual std::string render_point(const Bytes& x) const = 0;
    virtual bool is_cayley() const { return false; }
};

struct MarkedAction {
    std::string spec;
    MarkedGroup group;
    std::shared_ptr<const PointSpace> space;
    std::vector<Bytes> basepoints;

    int generator_count() const { return group.generator_count(); }

    Bytes apply_gen(int i, const Bytes& x) const { return space->apply_gen(i, x); }
    Bytes apply(const Bytes& g, const Bytes& x) const { return space->apply_elem(g, x); }

    Bytes word_to_elem(const std::vector<int>& letters) const {
        Bytes g = group.arith->identity();
        for (int i : letters) {
            if (i < 0 || i >= generator_count()) throw SpecError("generator index out of range", std::to_string(i));
            g = group.arith->mul(g, group.gens[i]);
        }
        return g;
    }

    Bytes mul_elem(const Bytes& g, const Bytes& h) const { return group.arith->mul(g, h); }
    Bytes inv_elem(const Bytes& g) const { return group.arith->inverse(g); }
    Bytes identity_elem() const { return group.arith->identity(); }
    Fingerprint point_fingerprint(const Bytes& x) const { return fingerprint128(x); }
};

// ---------------------------------------------------------------------------
// Words: whitespace-separated tokens, each "name" or "name^exp", resolved
// against the marked generator list and the family's named atoms.

inline Bytes word_element(const MarkedAction& a, const std::string& word) {
    Bytes g = a.group.arith->identity();
    std::istringstream is(word);
    std::string tok;
    bool any = false;
    while (is >> tok) {
        any = true;
        std::string base = tok;
        int64_t exp = 1;
        if (auto caret = tok.rfind('^'); caret != std::string::npos) {
            base = tok.substr(0, caret);
            std::string es = tok.substr(caret + 1);
            // generator names may themselves end in "^-1"
            try {
                size_t used = 0;
                exp = std::stoll(es, &used);
                if (used != es.size()) throw std::invalid_argument(es);
            } catch (const std::exception&) {
                base = tok;
                exp = 1;
            }
        }
        Bytes e;
        try {
            e = a.group.element_of_name(base);
        } catch (const SpecError&) {
            // tolerate full-token names such as "t^-1"
            e = a.group.element_of_name(tok);
            exp = 1;
        }
        Bytes powered = a.group.arith->identity();
        Bytes step = exp >= 0 ? e : a.group.arith->inverse(e);
        for (int64_t i = 0; i < (exp >= 0 ? exp : -exp); ++i) powered = a.group.arith->mul(powered, step);
        g = a.group.arith->mul(g, powered);
    }
    if (!any) throw SpecError("empty word", word);
    return g;
}

inline Bytes power(const MarkedAction& a, const Bytes& g, int64_t n) {
    Bytes r = a.group.arith->identity();
    Bytes step = n >= 0 ? g : a.group.arith->inverse(g);
    for (int64_t i = 0; i < (n >= 0 ? n : -n); ++i) r = a.group.arith->mul(r, step);
    return r;
}

// ---------------------------------------------------------------------------
// Small unbudgeted BFS ball, used by validation and the property suites.
// Returns points grouped by radius, deterministic discovery order.

inline std::vector<std::vector<Bytes>> small_ball(const MarkedAction& a, const Bytes& start, int radius) {
    std::vector<std::vector<Bytes>> spheres;
    std::set<Bytes> seen;
    seen.insert(start);
    spheres.push_back({start});
    for (int r = 0; r < radius; ++r) {
        std::vector<Bytes> next;
        for (const Bytes& x : spheres.back())
            for (int i = 0; i < a.generator_count(); ++i) {
                Bytes y = a.apply_gen(i, x);
                if (seen.insert(y).second) next.push_back(y);
            }
        if (next.empty()) break;
        spheres.push_back(std::move(next));
    }
    return spheres;
}

// Action-axiom spot check: identity fixes, inverses undo, composition agrees,
// on every point of a small ball. Throws SpecError naming the offense.
inline void validate_action(const MarkedAction& a, int radius = 4) {
    Bytes e = a.identity_elem();
    auto spheres = small_ball(a, a.basepoints.at(0), radius);
    std::vector<Bytes> probe;                       // S and a few of S^2
    for (int i = 0; i < a.generator_count(); ++i) probe.push_back(a.group.gens[i]);
    for (int i = 0; i < a.generator_count() && i < 3; ++i)
        for (int j = 0; j < a.generator_count() && j < 3; ++j)
            probe.push_back(a.mul_elem(a.group.gens[i], a.group.gens[j]));

    for (const auto& sphere : spheres)
        for (const Bytes& x : sphere) {
            if (a.apply(e, x) != x) throw SpecError("identity moves a point", a.space->render_point(x));
            for (int i = 0; i < a.generator_count(); ++i) {
                Bytes y = a.apply_gen(i, x);
                if (a.apply_gen(a.group.inverse_index[i], y) != x)
                    throw SpecError("inverse generator does not undo", a.group.gen_names[i]);
                if (a.apply(a.group.gens[i], x) != y)
                    throw SpecError("generator element disagrees with fast path", a.group.gen_names[i]);
            }
            for (const Bytes& g : probe)
                for (int j = 0; j < a.generator_count(); ++j) {
                    Bytes gh = a.mul_elem(g, a.group.gens[j]);
                    if (a.apply(gh, x) != a.apply(g, a.apply_gen(j, x)))
                        throw SpecError("action does not respect composition", a.spec);
                }
        }
}

}  // namespace growthlab

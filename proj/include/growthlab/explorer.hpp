#pragma once

// Lazy breadth-first Schreier-graph exploration: pointed and max growth
// tables, relative growth, and a sphere stream for the certificate searches.
//
// Deduplication uses a stable 128-bit fingerprint of the canonical point
// encoding; equal fingerprints are confirmed by byte equality, with an exact
// fallback store for genuine collisions. Exploration is deterministic:
// frontier order is discovery order, generators are applied in list order.

#include <functional>
#include <optional>
#include <unordered_map>
#include <set>
#include <vector>

#include "growthlab/action.hpp"
#include "growthlab/common.hpp"

namespace growthlab {

struct GrowthTable {
    std::string spec;
    std::string mode = "pointed";  // pointed | max | relative | imported
    int generators = 0;
    std::vector<int64_t> sizes;             // index = radius
    std::vector<std::string> basepoints;    // human-readable labels
    std::vector<int> attained_by;           // per radius, index into basepoints (max mode)
    std::string subset;                     // relative mode
    bool budget_hit = false;

    int max_radius() const { return static_cast<int>(sizes.size()) - 1; }
};

// Throws if a produced table violates the structural invariants.
inline void check_table_invariants(const GrowthTable& t, int generator_count) {
    if (t.sizes.empty()) throw SpecError("empty growth table", t.spec);
    if ((t.mode == "pointed" || t.mode == "max") && t.sizes[0] != 1)
        throw SpecError("ball of radius 0 must have size 1", t.spec);
    for (size_t r = 1; r < t.sizes.size(); ++r) {
        if (t.sizes[r] < t.sizes[r - 1]) throw SpecError("growth table is not monotone", t.spec);
        if (t.mode != "relative" && t.sizes[r] > t.sizes[r - 1] * (1 + generator_count))
            throw SpecError("growth table violates the degree bound", t.spec);
    }
}

struct ExploreOptions {
    int64_t budget_bytes = 2LL * 1024 * 1024 * 1024;  // 2 GiB equivalent
};

namespace detail {

class VisitedSet {
public:
    // Returns true if x was new. Fingerprint first, byte-equality confirm,
    // exact side store on a true 128-bit collision.
    bool insert(const Bytes& x) {
        Fingerprint fp = fingerprint128(x);
        auto it = map_.find(fp);
        if (it == map_.end()) {
            bytes_used_ += static_cast<int64_t>(x.size()) + kEntryOverhead;
            map_.emplace(fp, x);
            return true;
        }
        if (it->second == x) return false;
        ++collisions_;
        bool fresh = overflow_.insert(x).second;
        if (fresh) bytes_used_ += static_cast<int64_t>(x.size()) + kEntryOverhead;
        return fresh;
    }

    int64_t bytes_used() const { return bytes_used_; }
    int64_t size() const { return static_cast<int64_t>(map_.size() + overflow_.size()); }
    int64_t fingerprint_collisions() const { return collisions_; }

private:
    static constexpr int64_t kEntryOverhead = 64;
    std::unordered_map<Fingerprint, Bytes, FingerprintHash> map_;
    std::set<Bytes> overflow_;
    int64_t bytes_used_ = 0;
    int64_t collisions_ = 0;
};

}  // namespace detail

// One exploration session: owns its frontier state exclusively. next_sphere()
// yields spheres in order; the ball sizes accumulate in table().
class ExplorationSession {
public:
    ExplorationSession(const MarkedAction& a, Bytes start, ExploreOptions opt = {})
        : action_(&a), opt_(opt) {
        visited_.insert(start);
        frontier_.push_back(std::move(start));
        sizes_.push_back(1);
    }

    // Points at the current radius, in discovery order.
    const std::vector<Bytes>& sphere() const { return frontier_; }
    int radius() const { return radius_; }
    int64_t ball_size() const { return sizes_.back(); }
    const std::vector<int64_t>& sizes() const { return sizes_; }
    bool budget_hit() const { return budget_hit_; }

    // Expands to the next radius. Returns false when the sphere is empty
    // (orbit exhausted) or the memory budget was hit; a partial sphere is
    // discarded, never reported.
    bool advance() {
        if (budget_hit_) return false;
        std::vector<Bytes> next;
        for (const Bytes& x : frontier_) {
            for (int i = 0; i < action_->generator_count(); ++i) {
                Bytes y = action_->apply_gen(i, x);
                if (visited_.insert(y)) {
                    next.push_back(std::move(y));
                    if (visited_.bytes_used() > opt_.budget_bytes) {
                        budget_hit_ = true;
                        return false;
                    }
                }
            }
        }
        if (next.empty()) return false;
        frontier_ = std::move(next);
        ++radius_;
        sizes_.push_back(sizes_.back() + static_cast<int64_t>(frontier_.size()));
        return true;
    }

private:
    const MarkedAction* action_;
    ExploreOptions opt_;
    detail::VisitedSet visited_;
    std::vector<Bytes> frontier_;
    std::vector<int64_t> sizes_;
    int radius_ = 0;
    bool budget_hit_ = false;
};

// Pointed ball sizes |S^n x| for n <= R. The optional callback receives every
// ball point exactly once as (radius, point), in nondecreasing radius and
// deterministic discovery order (this is the sphere_points stream).
inline GrowthTable ball_sizes(const MarkedAction& a, const Bytes& x, int R, ExploreOptions opt = {},
                              const std::function<void(int, const Bytes&)>& cb = nullptr) {
    if (R < 0) throw SpecError("radius must be >= 0", std::to_string(R));
    ExplorationSession s(a, x, opt);
    if (cb) cb(0, x);
    while (s.radius() < R && s.advance()) {
        if (cb)
            for (const Bytes& p : s.sphere()) cb(s.radius(), p);
    }
    GrowthTable t;
    t.spec = a.spec;
    t.mode = "pointed";
    t.generators = a.generator_count();
    t.sizes = s.sizes();
    t.budget_hit = s.budget_hit();
    if (!t.budget_hit) {
        // orbit may simply be finite; extend the table to R (ball is stable)
        while (static_cast<int>(t.sizes.size()) <= R) t.sizes.push_back(t.sizes.back());
    }
    t.basepoints = {a.space->render_point(x)};
    t.attained_by.assign(t.sizes.size(), 0);
    check_table_invariants(t, a.generator_count());
    return t;
}

// ---------------------------------------------------------------------------
// Basepoint samplers for max-mode tables. The default sampler takes the
// designated basepoints plus the points on the spheres of radius R/4 and R/2
// (BFS discovery order, capped); the resulting table is a certified lower
// bound for vol_{G,X}.

struct BasepointSampler {
    enum class Kind { Default, Designated, Explicit };
    Kind kind = Kind::Default;
    int cap = 64;                       // cap on sphere-sampled points
    std::vector<Bytes> explicit_points;

    static BasepointSampler designated() { return {Kind::Designated, 0, {}}; }
    static BasepointSampler explicit_list(std::vector<Bytes> pts) {
        return {Kind::Explicit, 0, std::move(pts)};
    }
};

inline std::vector<Bytes> resolve_basepoints(const MarkedAction& a, int R, const BasepointSampler& s,
                                             ExploreOptions opt = {}) {
    std::vector<Bytes> out = a.basepoints;
    if (s.kind == BasepointSampler::Kind::Explicit) return s.explicit_points;
    if (s.kind == BasepointSampler::Kind::Designated) return out;
    std::vector<Bytes> sampled;
    int r1 = R / 4, r2 = R / 2;
    ball_sizes(a, a.basepoints.at(0), r2, opt, [&](int r, const Bytes& p) {
        if ((r == r1 || r == r2) && static_cast<int>(sampled.size()) < s.cap) sampled.push_back(p);
    });
    for (Bytes& p : sampled) out.push_back(std::move(p));
    return out;
}

// Pointwise max of pointed tables over the sampled basepoints; records which
// basepoint attained each radius. A lower bound for the true sup over X.
inline GrowthTable max_growth(const MarkedAction& a, int R, BasepointSampler sampler = {},
                              ExploreOptions opt = {}) {
    std::vector<Bytes> pts = resolve_basepoints(a, R, sampler, opt);
    if (pts.empty()) throw SpecError("sampler yielded no basepoints", a.spec);
    GrowthTable out;
    out.spec = a.spec;
    out.mode = "max";
    out.generators = a.generator_count();
    bool first = true;
    for (size_t i = 0; i < pts.size(); ++i) {
        GrowthTable t = ball_sizes(a, pts[i], R, opt);
        out.basepoints.push_back(t.basepoints[0]);
        out.budget_hit = out.budget_hit || t.budget_hit;
        size_t len = first ? t.sizes.size() : std::min(out.sizes.size(), t.sizes.size());
        if (first) {
            out.sizes = t.sizes;
            out.attained_by.assign(t.sizes.size(), 0);
            first = false;
        } else {
            out.sizes.resize(len);
            out.attained_by.resize(len);
            for (size_t r = 0; r < len; ++r)
                if (t.sizes[r] > out.sizes[r]) {
                    out.sizes[r] = t.sizes[r];
                    out.attained_by[r] = static_cast<int>(i);
                }
        }
    }
    check_table_invariants(out, a.generator_count());
    return out;
}

// Relative growth: counts elements of a named subset inside the word-metric
// ball around the identity. Requires a left-regular (Cayley) action.
inline GrowthTable relative_growth(const MarkedAction& a, const std::string& subset, int R,
                                   ExploreOptions opt = {}) {
    if (!a.space->is_cayley())
        throw SpecError("relative growth requires a Cayley-mode action", a.spec);
    if (!a.group.arith->has_subset(subset)) throw SpecError("unknown subset", subset);
    GrowthTable t;
    t.spec = a.spec;
    t.mode = "relative";
    t.subset = subset;
    t.generators = a.generator_count();
    std::vector<int64_t> counts;
    GrowthTable inner = ball_sizes(a, a.identity_elem(), R, opt, [&](int r, const Bytes& p) {
        if (static_cast<int>(counts.size()) <= r) counts.push_back(counts.empty() ? 0 : counts.back());
        if (a.group.arith->subset_member(subset, p)) ++counts.back();
    });
    t.budget_hit = inner.budget_hit;
    if (!t.budget_hit)
        while (static_cast<int>(counts.size()) <= R) counts.push_back(counts.empty() ? 0 : counts.back());
    t.sizes = std::move(counts);
    t.basepoints = {"e"};
    t.attained_by.assign(t.sizes.size(), 0);
    check_table_invariants(t, a.generator_count());
    return t;
}

}  // namespace growthlab

#pragma once

// Builtin marked-group families and their canonical faithful actions, plus
// the combinators (disjoint union, product, induced action, sub-marked
// group). Family spec strings:
//
//   wreath:<A>,Z^<d>:<standard|cayley>      A in {C<p> (p prime), Z}
//   heisenberg:<cayley|cosets-a>
//   baumslag:p=<p>,d=<d>:<cosetH|cayley-orbit>
//   bs:1,<n>:cayley
//   fm:d=<d>:magnus-standard
//   zwrz:cosets-dk:alpha=<a|a/b>            alpha >= 2 rational
//   product:<spec>;<spec>

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <sstream>

#include "growthlab/action.hpp"
#include "growthlab/baumslag_ring.hpp"
#include "growthlab/common.hpp"
#include "growthlab/heis.hpp"
#include "growthlab/nadic.hpp"

namespace growthlab {

// ---------------------------------------------------------------------------
// big-integer byte codec (sign bit folded into the varint length)

inline void put_bigint(Bytes& b, const BigInt& v) {
    using boost::multiprecision::cpp_int;
    cpp_int mag = v < 0 ? cpp_int(-v) : v;
    std::vector<uint8_t> bytes;
    while (mag != 0) {
        bytes.push_back(static_cast<uint8_t>(mag & 0xff));
        mag >>= 8;
    }
    int64_t len_and_sign = (static_cast<int64_t>(bytes.size()) << 1) | (v < 0 ? 1 : 0);
    put_varint(b, len_and_sign);
    for (uint8_t c : bytes) b.push_back(static_cast<char>(c));
}

inline BigInt get_bigint(ByteReader& r) {
    int64_t len_and_sign = r.varint();
    bool neg = len_and_sign & 1;
    int64_t len = len_and_sign >> 1;
    BigInt v = 0;
    for (int64_t i = 0; i < len; ++i) v |= BigInt(r.u8()) << (8 * i);
    return neg ? BigInt(-v) : v;
}

// ---------------------------------------------------------------------------
// Wreath products A wr Z^d with A in {C_p, Z}. Elements are pairs
// (phi, b) with phi finitely supported; phi stores no identity values.

struct WreathEl {
    std::vector<int64_t> b;                                   // base Z^d
    std::vector<std::pair<std::vector<int64_t>, int64_t>> lamps;  // sorted by position
};

class WreathArith : public GroupArith {
public:
    WreathArith(int64_t lamp_mod, int d) : p_(lamp_mod), d_(d) {
        // lamp_mod == 0 means A = Z, otherwise A = C_p
        if (d < 1) throw SpecError("wreath base rank must be >= 1", std::to_string(d));
        if (p_ != 0 && !is_prime(static_cast<uint64_t>(p_)))
            throw SpecError("lamp group order must be prime", std::to_string(p_));
    }

    int64_t lamp_mod() const { return p_; }
    int dim() const { return d_; }

    Bytes encode(const WreathEl& e) const {
        Bytes out;
        for (int i = 0; i < d_; ++i) put_varint(out, e.b[i]);
        put_varint(out, static_cast<int64_t>(e.lamps.size()));
        for (const auto& [pos, val] : e.lamps) {
            for (int i = 0; i < d_; ++i) put_varint(out, pos[i]);
            put_varint(out, val);
        }
        return out;
    }

    WreathEl decode(const Bytes& b) const {
        ByteReader r(b);
        WreathEl e;
        e.b.resize(d_);
        for (int i = 0; i < d_; ++i) e.b[i] = r.varint();
        int64_t n = r.varint();
        e.lamps.resize(n);
        for (int64_t j = 0; j < n; ++j) {
            e.lamps[j].first.resize(d_);
            for (int i = 0; i < d_; ++i) e.lamps[j].first[i] = r.varint();
            e.lamps[j].second = r.varint();
        }
        return e;
    }

    int64_t norm_lamp(int64_t v) const {
        if (p_ == 0) return v;
        int64_t r = v % p_;
        return r < 0 ? r + p_ : r;
    }

    std::string signature() const override {
        return "wreath(A=" + (p_ ? "C" + std::to_string(p_) : std::string("Z")) + ",B=Z^" + std::to_string(d_) + ")";
    }

    Bytes identity() const override {
        WreathEl e;
        e.b.assign(d_, 0);
        return encode(e);
    }

    Bytes mul(const Bytes& ga, const Bytes& gb) const override {
        WreathEl a = decode(ga), b = decode(gb);
        WreathEl r;
        r.b.resize(d_);
        for (int i = 0; i < d_; ++i) r.b[i] = a.b[i] + b.b[i];
        std::map<std::vector<int64_t>, int64_t> acc;
        for (const auto& [pos, val] : a.lamps) acc[pos] += val;
        for (const auto& [pos, val] : b.lamps) {
            std::vector<int64_t> shifted(d_);
            for (int i = 0; i < d_; ++i) shifted[i] = pos[i] + a.b[i];
            acc[shifted] += val;
        }
        for (auto& [pos, val] : acc) {
            int64_t v = norm_lamp(val);
            if (v != 0) r.lamps.emplace_back(pos, v);
        }
        return encode(r);
    }

    Bytes inverse(const Bytes& g) const override {
        WreathEl a = decode(g);
        WreathEl r;
        r.b.resize(d_);
        for (int i = 0; i < d_; ++i) r.b[i] = -a.b[i];
        for (const auto& [pos, val] : a.lamps) {
            std::vector<int64_t> shifted(d_);
            for (int i = 0; i < d_; ++i) shifted[i] = pos[i] - a.b[i];
            int64_t v = norm_lamp(-val);
            if (v != 0) r.lamps.emplace_back(std::move(shifted), v);
        }
        std::sort(r.lamps.begin(), r.lamps.end());
        return encode(r);
    }

    std::string render(const Bytes& g) const override {
        WreathEl e = decode(g);
        std::ostringstream os;
        os << "lamps{";
        bool first = true;
        for (const auto& [pos, val] : e.lamps) {
            if (!first) os << ",";
            first = false;
            if (d_ == 1) {
                os << pos[0];
            } else {
                os << "(";
                for (int i = 0; i < d_; ++i) os << (i ? "," : "") << pos[i];
                os << ")";
            }
            os << ":" << val;
        }
        os << "} t^(";
        for (int i = 0; i < d_; ++i) os << (i ? "," : "") << e.b[i];
        os << ")";
        return os.str();
    }

    bool has_subset(const std::string& name) const override { return name == "whole" || name == "base"; }
    bool subset_member(const std::string& name, const Bytes& g) const override {
        if (name == "whole") return true;
        if (name == "base") return decode(g).lamps.empty();
        throw SpecError("unknown subset", name);
    }

private:
    int64_t p_;  // 0 for Z lamps
    int d_;
};

// The standard wreath action on B x A: (phi, b) . (b0, a0) = (b+b0, phi(b+b0)+a0).
class StdWreathSpace : public PointSpace {
public:
    StdWreathSpace(std::shared_ptr<const WreathArith> arith, std::vector<Bytes> gens)
        : arith_(std::move(arith)) {
        for (const Bytes& g : gens) gens_.push_back(arith_->decode(g));
    }

    Bytes encode_point(const std::vector<int64_t>& b, int64_t a) const {
        Bytes out;
        for (int64_t c : b) put_i16(out, c);
        put_i32(out, a);
        return out;
    }

    std::pair<std::vector<int64_t>, int64_t> decode_point(const Bytes& x) const {
        ByteReader r(x);
        std::vector<int64_t> b(arith_->dim());
        for (int i = 0; i < arith_->dim(); ++i) b[i] = r.i16();
        return {std::move(b), r.i32()};
    }

    Bytes apply_gen(int i, const Bytes& x) const override { return apply_decoded(gens_[i], x); }

    Bytes apply_elem(const Bytes& g, const Bytes& x) const override {
        return apply_decoded(arith_->decode(g), x);
    }

    std::string render_point(const Bytes& x) const override {
        auto [b, a] = decode_point(x);
        std::ostringstream os;
        os << "(";
        for (size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
        os << ";" << a << ")";
        return os.str();
    }

private:
    Bytes apply_decoded(const WreathEl& e, const Bytes& x) const {
        auto [b0, a0] = decode_point(x);
        std::vector<int64_t> nb(b0.size());
        for (size_t i = 0; i < b0.size(); ++i) nb[i] = e.b[i] + b0[i];
        int64_t na = a0;
        auto it = std::lower_bound(e.lamps.begin(), e.lamps.end(), nb,
                                   [](const auto& lamp, const std::vector<int64_t>& key) { return lamp.first < key; });
        if (it != e.lamps.end() && it->first == nb) na = a0 + it->second;
        if (arith_->lamp_mod() != 0) na = arith_->norm_lamp(na);
        return encode_point(nb, na);
    }

    std::shared_ptr<const WreathArith> arith_;
    std::vector<WreathEl> gens_;
};

// ---------------------------------------------------------------------------
// Left-regular (Cayley) action: points are elements.

class CayleySpace : public PointSpace {
public:
    CayleySpace(std::shared_ptr<const GroupArith> arith, std::vector<Bytes> gens)
        : arith_(std::move(arith)), gens_(std::move(gens)) {}

    Bytes apply_gen(int i, const Bytes& x) const override { return arith_->mul(gens_[i], x); }
    Bytes apply_elem(const Bytes& g, const Bytes& x) const override { return arith_->mul(g, x); }
    std::string render_point(const Bytes& x) const override { return arith_->render(x); }
    bool is_cayley() const override { return true; }

private:
    std::shared_ptr<const GroupArith> arith_;
    std::vector<Bytes> gens_;
};

// ---------------------------------------------------------------------------
// Heisenberg group H3(Z), generators a, b (c = [a,b] available as an atom).

class HeisArith : public GroupArith {
public:
    static Bytes encode(const HeisCoord& g) {
        Bytes out;
        put_varint(out, g.x);
        put_varint(out, g.y);
        put_varint(out, g.z);
        return out;
    }
    static HeisCoord decode(const Bytes& b) {
        ByteReader r(b);
        HeisCoord g;
        g.x = r.varint();
        g.y = r.varint();
        g.z = r.varint();
        return g;
    }

    std::string signature() const override { return "heisenberg"; }
    Bytes identity() const override { return encode({0, 0, 0}); }
    Bytes mul(const Bytes& g, const Bytes& h) const override { return encode(heis_mul(decode(g), decode(h))); }
    Bytes inverse(const Bytes& g) const override { return encode(heis_inv(decode(g))); }
    std::string render(const Bytes& g) const override { return heis_render(decode(g)); }

    bool has_subset(const std::string& name) const override { return name == "whole" || name == "center"; }
    bool subset_member(const std::string& name, const Bytes& g) const override {
        if (name == "whole") return true;
        if (name == "center") {
            HeisCoord h = decode(g);
            return h.x == 0 && h.y == 0;
        }
        throw SpecError("unknown subset", name);
    }
};

// Cosets of <a>: the coset (c^z b^y a^x)<a> is labeled (y, z); the label
// ignores x. Left multiplication: g.(y,z) = (g.y + y, g.z + z + g.x * y).
class HeisCosetSpace : public PointSpace {
public:
    explicit HeisCosetSpace(std::vector<Bytes> gens) {
        for (const Bytes& g : gens) gens_.push_back(HeisArith::decode(g));
    }

    static Bytes encode_point(int64_t y, int64_t z) {
        Bytes out;
        put_i16(out, y);
        put_i32(out, z);
        return out;
    }

    Bytes apply_gen(int i, const Bytes& x) const override { return apply_decoded(gens_[i], x); }
    Bytes apply_elem(const Bytes& g, const Bytes& x) const override {
        return apply_decoded(HeisArith::decode(g), x);
    }

    std::string render_point(const Bytes& x) const override {
        ByteReader r(x);
        int64_t y = r.i16(), z = r.i32();
        return "(y=" + std::to_string(y) + ",z=" + std::to_string(z) + ")";
    }

private:
    static Bytes apply_decoded(const HeisCoord& g, const Bytes& x) {
        ByteReader r(x);
        int64_t y = r.i16(), z = r.i32();
        return encode_point(g.y + y, g.z + z + g.x * y);
    }

    std::vector<HeisCoord> gens_;
};

// ---------------------------------------------------------------------------
// Baumslag groups Lambda_{p,d} = R_{p,d} x| Z^{2d}. Elements are pairs
// (r, q); q = (m_1..m_d, k_1..k_d) acts on the ring by prod T_i^{m_i}(1+T_i)^{k_i}.

class BaumslagArith : public GroupArith {
public:
    BaumslagArith(uint32_t p, int d) : p_(p), d_(d) {
        if (!is_prime(p)) throw SpecError("p must be prime", std::to_string(p));
        if (d < 1) throw SpecError("d must be >= 1", std::to_string(d));
    }

    uint32_t p() const { return p_; }
    int dim() const { return d_; }

    Bytes encode(const BaumslagElem& r, const std::vector<int64_t>& q) const {
        Bytes out;
        for (int i = 0; i < 2 * d_; ++i) put_varint(out, q[i]);
        put_varint(out, static_cast<int64_t>(r.terms().size()));
        for (const auto& [mono, c] : r.terms()) {
            for (const BFactor& f : mono) {
                put_u8(out, f.kind);
                put_varint(out, f.v);
            }
            put_varint(out, c);
        }
        return out;
    }

    std::pair<BaumslagElem, std::vector<int64_t>> decode(const Bytes& b) const {
        ByteReader rd(b);
        std::vector<int64_t> q(2 * d_);
        for (int i = 0; i < 2 * d_; ++i) q[i] = rd.varint();
        BaumslagElem r(p_, d_);
        int64_t n = rd.varint();
        for (int64_t t = 0; t < n; ++t) {
            BMonomial m(d_);
            for (int i = 0; i < d_; ++i) {
                m[i].kind = static_cast<BFactor::Kind>(rd.u8());
                m[i].v = rd.varint();
            }
            r.add_term(std::move(m), static_cast<uint32_t>(rd.varint()));
        }
        return {std::move(r), std::move(q)};
    }

    RingMonomial unit(const std::vector<int64_t>& q) const {
        RingMonomial u = RingMonomial::ones(d_);
        for (int i = 0; i < d_; ++i) u.mk[i] = {q[i], q[d_ + i]};
        return u;
    }

    std::string signature() const override {
        return "baumslag(p=" + std::to_string(p_) + ",d=" + std::to_string(d_) + ")";
    }

    Bytes identity() const override {
        return encode(BaumslagElem::zero(p_, d_), std::vector<int64_t>(2 * d_, 0));
    }

    Bytes mul(const Bytes& ga, const Bytes& gb) const override {
        auto [r1, q1] = decode(ga);
        auto [r2, q2] = decode(gb);
        BaumslagElem r = r1 + mul_by_unit(r2, unit(q1));
        std::vector<int64_t> q(2 * d_);
        for (int i = 0; i < 2 * d_; ++i) q[i] = q1[i] + q2[i];
        return encode(r, q);
    }

    Bytes inverse(const Bytes& g) const override {
        auto [r, q] = decode(g);
        std::vector<int64_t> nq(2 * d_);
        for (int i = 0; i < 2 * d_; ++i) nq[i] = -q[i];
        return encode(-mul_by_unit(r, unit(nq)), nq);
    }

    std::string render(const Bytes& g) const override {
        auto [r, q] = decode(g);
        std::ostringstream os;
        os << "(" << r.render() << "; q=(";
        for (int i = 0; i < 2 * d_; ++i) os << (i ? "," : "") << q[i];
        os << "))";
        return os.str();
    }

private:
    uint32_t p_;
    int d_;
};

// The coset space Lambda_{p,d}/H for H = {a_0 = 0} <= R. The coset of (r, q)
// is labeled (q, c) with c = a0(q^{-1} r); the update rule for a left factor
// (r0, q0) is c' = c + a0((q0 q)^{-1} r0), evaluated with the closed-form
// a0_of_monomial (no ring normalization in the hot path).
class LambdaCosetSpace : public PointSpace {
public:
    LambdaCosetSpace(std::shared_ptr<const BaumslagArith> arith, std::vector<Bytes> gens)
        : arith_(std::move(arith)) {
        for (const Bytes& g : gens) gens_.push_back(classify(g));
    }

    Bytes encode_point(const std::vector<int64_t>& q, uint32_t c) const {
        Bytes out;
        for (int i = 0; i < 2 * arith_->dim(); ++i) put_i16(out, q[i]);
        put_varint(out, c);
        return out;
    }

    Bytes apply_gen(int i, const Bytes& x) const override {
        const GenRep& g = gens_[i];
        auto [q, c] = decode_point(x);
        if (g.shift_coord >= 0) {
            q[g.shift_coord] += g.delta;
            return encode_point(q, c);
        }
        uint32_t t = unit_a0(q);
        uint32_t nc = g.delta > 0 ? fp_add(c, t, arith_->p()) : fp_add(c, fp_neg(t, arith_->p()), arith_->p());
        return encode_point(q, nc);
    }

    Bytes apply_elem(const Bytes& g, const Bytes& x) const override {
        auto [r0, q0] = arith_->decode(g);
        auto [q, c] = decode_point(x);
        std::vector<int64_t> nq(q.size());
        for (size_t i = 0; i < q.size(); ++i) nq[i] = q0[i] + q[i];
        // c' = c + a0(unit(-nq) * r0), term by term via the closed form
        uint32_t p = arith_->p();
        int d = arith_->dim();
        uint32_t delta = 0;
        for (const auto& [mono, coeff] : r0.terms()) {
            uint32_t prod = coeff;
            for (int i = 0; i < d && prod; ++i) {
                int64_t M, K;
                if (mono[i].kind == BFactor::Laurent) {
                    M = mono[i].v - nq[i];
                    K = -nq[d + i];
                } else {
                    M = -nq[i];
                    K = -nq[d + i] - mono[i].v;
                }
                prod = fp_mul(prod, a0_of_monomial(M, K, p), p);
            }
            delta = fp_add(delta, prod, p);
        }
        return encode_point(nq, fp_add(c, delta, p));
    }

    std::string render_point(const Bytes& x) const override {
        auto [q, c] = decode_point(x);
        std::ostringstream os;
        os << "(q=(";
        for (size_t i = 0; i < q.size(); ++i) os << (i ? "," : "") << q[i];
        os << "),c=" << c << ")";
        return os.str();
    }

private:
    struct GenRep {
        int shift_coord = -1;  // >= 0: translation generator on that q coordinate
        int delta = 0;         // +-1; for shift_coord == -1 this is the sign of u
    };

    GenRep classify(const Bytes& g) const {
        auto [r, q] = arith_->decode(g);
        GenRep rep;
        for (size_t i = 0; i < q.size(); ++i)
            if (q[i] != 0) {
                rep.shift_coord = static_cast<int>(i);
                rep.delta = static_cast<int>(q[i]);
                return rep;
            }
        // lamp generator u^{+-1}: r == +-1
        rep.shift_coord = -1;
        rep.delta = (coeff_a0(r) == 1) ? 1 : -1;
        return rep;
    }

    std::pair<std::vector<int64_t>, uint32_t> decode_point(const Bytes& x) const {
        ByteReader r(x);
        std::vector<int64_t> q(2 * arith_->dim());
        for (size_t i = 0; i < q.size(); ++i) q[i] = r.i16();
        return {std::move(q), static_cast<uint32_t>(r.varint())};
    }

    // a0(unit(-q)) = prod_i a0(T_i^{-m_i}(1+T_i)^{-k_i})
    uint32_t unit_a0(const std::vector<int64_t>& q) const {
        uint32_t p = arith_->p();
        int d = arith_->dim();
        uint32_t prod = 1;
        for (int i = 0; i < d && prod; ++i) prod = fp_mul(prod, a0_of_monomial(-q[i], -q[d + i], p), p);
        return prod;
    }

    std::shared_ptr<const BaumslagArith> arith_;
    std::vector<GenRep> gens_;
};

// ---------------------------------------------------------------------------
// BS(1,n) = Z[1/n] x| Z with (u, m)(v, k) = (u + n^m v, m + k).

class BsArith : public GroupArith {
public:
    explicit BsArith(int64_t base) : base_(base) { nadic_check_base(base); }

    int64_t base() const { return base_; }

    Bytes encode(const NAdic& u, int64_t m) const {
        Bytes out;
        put_varint(out, m);
        put_varint(out, u.exp);
        put_bigint(out, u.num);
        return out;
    }

    std::pair<NAdic, int64_t> decode(const Bytes& b) const {
        ByteReader r(b);
        int64_t m = r.varint();
        NAdic u;
        u.exp = r.varint();
        u.num = get_bigint(r);
        return {std::move(u), m};
    }

    std::string signature() const override { return "bs(1," + std::to_string(base_) + ")"; }
    Bytes identity() const override { return encode(NAdic{}, 0); }

    Bytes mul(const Bytes& ga, const Bytes& gb) const override {
        auto [u, m] = decode(ga);
        auto [v, k] = decode(gb);
        return encode(nadic_add(u, nadic_scale(v, m, base_), base_), m + k);
    }

    Bytes inverse(const Bytes& g) const override {
        auto [u, m] = decode(g);
        return encode(nadic_scale(nadic_neg(u), -m, base_), -m);
    }

    std::string render(const Bytes& g) const override {
        auto [u, m] = decode(g);
        return "(" + nadic_render(u, base_) + "; t^" + std::to_string(m) + ")";
    }

    bool has_subset(const std::string& name) const override { return name == "whole" || name == "base"; }
    bool subset_member(const std::string& name, const Bytes& g) const override {
        if (name == "whole") return true;
        if (name == "base") return decode(g).first.num == 0;
        throw SpecError("unknown subset", name);
    }

private:
    int64_t base_;
};

// ---------------------------------------------------------------------------
// The Z wr Z coset family of the pointed-growth example: H <= (+)Z consists of
// the configurations f with f(d_k) in 2^k Z, d_k = ceil(2^{alpha k^2}).
// The coset of (f, m) is labeled (m; r_k = f(d_k + m) mod 2^k, k >= 1); all
// positions off the constrained ones are quotiented away.

inline std::vector<int64_t> constraint_positions(int64_t alpha_num, int64_t alpha_den) {
    using boost::multiprecision::cpp_int;
    if (alpha_den < 1 || alpha_num < 2 * alpha_den)
        throw SpecError("alpha must be a rational >= 2",
                        std::to_string(alpha_num) + "/" + std::to_string(alpha_den));
    std::vector<int64_t> dks;
    for (int64_t k = 1;; ++k) {
        cpp_int e = cpp_int(alpha_num) * k * k;  // d_k = ceil(2^(e/alpha_den))
        cpp_int q = e / alpha_den;
        if (q > 62) break;
        cpp_int dk;
        if (e % alpha_den == 0) {
            dk = cpp_int(1) << static_cast<unsigned>(q);
        } else {
            // smallest m with m^den >= 2^e
            cpp_int lo = cpp_int(1) << static_cast<unsigned>(q), hi = lo * 2;
            cpp_int target = cpp_int(1) << static_cast<unsigned>(e);
            while (lo < hi) {
                cpp_int mid = (lo + hi) / 2;
                cpp_int powv = 1;
                for (int64_t i = 0; i < alpha_den; ++i) powv *= mid;
                if (powv >= target) hi = mid;
                else lo = mid + 1;
            }
            dk = lo;
        }
        if (dk > (cpp_int(1) << 62)) break;
        dks.push_back(static_cast<int64_t>(dk));
    }
    return dks;
}

class ZwrzCosetSpace : public PointSpace {
public:
    ZwrzCosetSpace(std::shared_ptr<const WreathArith> arith, std::vector<Bytes> gens,
                   std::vector<int64_t> dks)
        : arith_(std::move(arith)), dks_(std::move(dks)) {
        for (const Bytes& g : gens) gens_.push_back(arith_->decode(g));
    }

    const std::vector<int64_t>& constraints() const { return dks_; }

    struct Label {
        int64_t m = 0;
        std::vector<std::pair<int, uint64_t>> residues;  // (k, r) sorted by k, r in [1, 2^k)
    };

    Bytes encode_point(const Label& l) const {
        Bytes out;
        put_varint(out, l.m);
        put_varint(out, static_cast<int64_t>(l.residues.size()));
        for (const auto& [k, r] : l.residues) {
            put_u8(out, static_cast<uint8_t>(k));
            put_varint(out, static_cast<int64_t>(r));
        }
        return out;
    }

    Label decode_point(const Bytes& x) const {
        ByteReader rd(x);
        Label l;
        l.m = rd.varint();
        int64_t n = rd.varint();
        l.residues.resize(n);
        for (int64_t i = 0; i < n; ++i) {
            l.residues[i].first = rd.u8();
            l.residues[i].second = static_cast<uint64_t>(rd.varint());
        }
        return l;
    }

    Bytes apply_gen(int i, const Bytes& x) const override { return apply_decoded(gens_[i], x); }
    Bytes apply_elem(const Bytes& g, const Bytes& x) const override {
        return apply_decoded(arith_->decode(g), x);
    }

    std::string render_point(const Bytes& x) const override {
        Label l = decode_point(x);
        std::ostringstream os;
        os << "(m=" << l.m << ";r{";
        bool first = true;
        for (const auto& [k, r] : l.residues) {
            if (!first) os << ",";
            first = false;
            os << k << ":" << r;
        }
        os << "})";
        return os.str();
    }

private:
    Bytes apply_decoded(const WreathEl& e, const Bytes& x) const {
        Label l = decode_point(x);
        l.m += e.b[0];
        for (const auto& [pos, val] : e.lamps) {
            int64_t D = pos[0] - l.m;
            auto it = std::lower_bound(dks_.begin(), dks_.end(), D);
            if (it == dks_.end() || *it != D) continue;
            int k = static_cast<int>(it - dks_.begin()) + 1;
            add_residue(l, k, val);
        }
        return encode_point(l);
    }

    static void add_residue(Label& l, int k, int64_t val) {
        uint64_t mod = 1ull << k;
        uint64_t add = static_cast<uint64_t>(((val % static_cast<int64_t>(mod)) + static_cast<int64_t>(mod)) % static_cast<int64_t>(mod));
        auto it = std::lower_bound(l.residues.begin(), l.residues.end(), k,
                                   [](const auto& e, int key) { return e.first < key; });
        if (it != l.residues.end() && it->first == k) {
            it->second = (it->second + add) & (mod - 1);
            if (it->second == 0) l.residues.erase(it);
        } else if (add != 0) {
            l.residues.insert(it, {k, add});
        }
    }

    std::shared_ptr<const WreathArith> arith_;
    std::vector<WreathEl> gens_;
    std::vector<int64_t> dks_;
};

// ---------------------------------------------------------------------------
// Product group acting on the disjoint union of its factors' spaces
// (each factor acts through its projection).

class ProductArith : public GroupArith {
public:
    explicit ProductArith(std::vector<std::shared_ptr<const GroupArith>> children)
        : children_(std::move(children)) {}

    size_t arity() const { return children_.size(); }
    const GroupArith& child(size_t i) const { return *children_[i]; }

    std::vector<Bytes> split(const Bytes& g) const {
        ByteReader r(g);
        std::vector<Bytes> out;
        for (size_t i = 0; i < children_.size(); ++i) {
            int64_t len = r.varint();
            out.push_back(r.src->substr(r.pos, len));
            r.pos += len;
        }
        return out;
    }

    Bytes join(const std::vector<Bytes>& parts) const {
        Bytes out;
        for (const Bytes& p : parts) {
            put_varint(out, static_cast<int64_t>(p.size()));
            out += p;
        }
        return out;
    }

    std::string signature() const override {
        std::string s = "product(";
        for (size_t i = 0; i < children_.size(); ++i) s += (i ? ";" : "") + children_[i]->signature();
        return s + ")";
    }

    Bytes identity() const override {
        std::vector<Bytes> parts;
        for (const auto& c : children_) parts.push_back(c->identity());
        return join(parts);
    }

    Bytes mul(const Bytes& g, const Bytes& h) const override {
        auto a = split(g), b = split(h);
        std::vector<Bytes> parts;
        for (size_t i = 0; i < children_.size(); ++i) parts.push_back(children_[i]->mul(a[i], b[i]));
        return join(parts);
    }

    Bytes inverse(const Bytes& g) const override {
        auto a = split(g);
        std::vector<Bytes> parts;
        for (size_t i = 0; i < children_.size(); ++i) parts.push_back(children_[i]->inverse(a[i]));
        return join(parts);
    }

    std::string render(const Bytes& g) const override {
        auto a = split(g);
        std::string s = "(";
        for (size_t i = 0; i < children_.size(); ++i) s += (i ? " | " : "") + children_[i]->render(a[i]);
        return s + ")";
    }

    bool canonical_equality() const override {
        for (const auto& c : children_)
            if (!c->canonical_equality()) return false;
        return true;
    }

private:
    std::vector<std::shared_ptr<const GroupArith>> children_;
};

class ProductSpace : public PointSpace {
public:
    ProductSpace(std::shared_ptr<const ProductArith> arith, std::vector<MarkedAction> children,
                 std::vector<std::pair<int, int>> gen_map)
        : arith_(std::move(arith)), children_(std::move(children)), gen_map_(std::move(gen_map)) {}

    static Bytes tag_point(int i, const Bytes& inner) {
        Bytes out;
        put_u8(out, static_cast<uint8_t>(i));
        out += inner;
        return out;
    }

    Bytes apply_gen(int i, const Bytes& x) const override {
        auto [ci, cj] = gen_map_[i];
        int tag = static_cast<uint8_t>(x[0]);
        if (tag != ci) return x;
        return tag_point(tag, children_[tag].apply_gen(cj, x.substr(1)));
    }

    Bytes apply_elem(const Bytes& g, const Bytes& x) const override {
        int tag = static_cast<uint8_t>(x[0]);
        auto parts = arith_->split(g);
        return tag_point(tag, children_[tag].apply(parts[tag], x.substr(1)));
    }

    std::string render_point(const Bytes& x) const override {
        int tag = static_cast<uint8_t>(x[0]);
        return std::to_string(tag) + ":" + children_[tag].space->render_point(x.substr(1));
    }

private:
    std::shared_ptr<const ProductArith> arith_;
    std::vector<MarkedAction> children_;
    std::vector<std::pair<int, int>> gen_map_;
};

// Disjoint union of actions of the same marked group.
class UnionSpace : public PointSpace {
public:
    explicit UnionSpace(std::vector<MarkedAction> children) : children_(std::move(children)) {}

    Bytes apply_gen(int i, const Bytes& x) const override {
        int tag = static_cast<uint8_t>(x[0]);
        return ProductSpace::tag_point(tag, children_[tag].apply_gen(i, x.substr(1)));
    }
    Bytes apply_elem(const Bytes& g, const Bytes& x) const override {
        int tag = static_cast<uint8_t>(x[0]);
        return ProductSpace::tag_point(tag, children_[tag].apply(g, x.substr(1)));
    }
    std::string render_point(const Bytes& x) const override {
        int tag = static_cast<uint8_t>(x[0]);
        return std::to_string(tag) + ":" + children_[tag].space->render_point(x.substr(1));
    }

private:
    std::vector<MarkedAction> children_;
};

inline MarkedAction disjoint_union(const std::vector<MarkedAction>& actions) {
    if (actions.empty()) throw SpecError("disjoint union needs at least one action");
    const MarkedGroup& g0 = actions[0].group;
    for (const MarkedAction& a : actions) {
        if (a.group.arith->signature() != g0.arith->signature() || a.group.gens != g0.gens)
            throw SpecError("disjoint union requires identical marked groups", a.spec);
    }
    MarkedAction out;
    out.spec = "union(";
    for (size_t i = 0; i < actions.size(); ++i) out.spec += (i ? ";" : "") + actions[i].spec;
    out.spec += ")";
    out.group = g0;
    out.space = std::make_shared<UnionSpace>(actions);
    for (size_t i = 0; i < actions.size(); ++i)
        for (const Bytes& bp : actions[i].basepoints)
            out.basepoints.push_back(ProductSpace::tag_point(static_cast<int>(i), bp));
    return out;
}

// Routes generator application through apply_elem; used when the marked
// generator list is replaced under an existing space.
class ElemGenSpace : public PointSpace {
public:
    ElemGenSpace(std::shared_ptr<const PointSpace> inner, std::vector<Bytes> gens)
        : inner_(std::move(inner)), gens_(std::move(gens)) {}

    Bytes apply_gen(int i, const Bytes& x) const override { return inner_->apply_elem(gens_[i], x); }
    Bytes apply_elem(const Bytes& g, const Bytes& x) const override { return inner_->apply_elem(g, x); }
    std::string render_point(const Bytes& x) const override { return inner_->render_point(x); }
    bool is_cayley() const override { return inner_->is_cayley(); }

private:
    std::shared_ptr<const PointSpace> inner_;
    std::vector<Bytes> gens_;
};

// Sub-marked-group: same group arithmetic and point space, generator list
// replaced by the given elements closed under inverses.
inline MarkedAction sub_marked_group(const MarkedAction& a, const std::vector<Bytes>& elems,
                                     const std::vector<std::string>& names) {
    MarkedAction out = a;
    out.spec = a.spec + "|sub";
    out.group.gens.clear();
    out.group.gen_names.clear();
    out.group.inverse_index.clear();
    for (size_t i = 0; i < elems.size(); ++i) {
        Bytes inv = a.group.arith->inverse(elems[i]);
        out.group.gens.push_back(elems[i]);
        out.group.gen_names.push_back(names[i]);
        if (inv == elems[i]) {
            out.group.inverse_index.push_back(static_cast<int>(out.group.gens.size()) - 1);
        } else {
            out.group.gens.push_back(inv);
            out.group.gen_names.push_back(names[i] + "^-1");
            out.group.inverse_index.push_back(static_cast<int>(out.group.gens.size()) - 1);
            out.group.inverse_index.push_back(static_cast<int>(out.group.gens.size()) - 2);
        }
    }
    out.space = std::make_shared<ElemGenSpace>(a.space, out.group.gens);
    return out;
}

// ---------------------------------------------------------------------------
// Induced action Ind_H^G(X) = transversal x X. Elements of G are free words
// in the given generators (no canonical form; equality is unsupported).

class WordArith : public GroupArith {
public:
    WordArith(std::vector<std::string> names, std::vector<int> inv)
        : names_(std::move(names)), inv_(std::move(inv)) {}

    const std::vector<int>& inverse_table() const { return inv_; }

    Bytes encode(const std::vector<int>& letters) const {
        Bytes out;
        put_varint(out, static_cast<int64_t>(letters.size()));
        for (int l : letters) put_varint(out, l);
        return out;
    }

    std::vector<int> decode(const Bytes& b) const {
        ByteReader r(b);
        int64_t n = r.varint();
        std::vector<int> out(n);
        for (int64_t i = 0; i < n; ++i) out[i] = static_cast<int>(r.varint());
        return out;
    }

    std::string signature() const override { return "words(" + std::to_string(names_.size()) + ")"; }
    Bytes identity() const override { return encode({}); }

    Bytes mul(const Bytes& g, const Bytes& h) const override {
        std::vector<int> a = decode(g), b = decode(h);
        for (int l : b) {
            if (!a.empty() && inv_[a.back()] == l) a.pop_back();
            else a.push_back(l);
        }
        return encode(a);
    }

    Bytes inverse(const Bytes& g) const override {
        std::vector<int> a = decode(g), r;
        for (auto it = a.rbegin(); it != a.rend(); ++it) r.push_back(inv_[*it]);
        return encode(r);
    }

    std::string render(const Bytes& g) const override {
        std::vector<int> a = decode(g);
        if (a.empty()) return "e";
        std::string s;
        for (size_t i = 0; i < a.size(); ++i) s += (i ? " " : "") + names_[a[i]];
        return s;
    }

    bool canonical_equality() const override { return false; }

private:
    std::vector<std::string> names_;
    std::vector<int> inv_;
};

struct TransversalDecomposition {
    // table[g][t] = (t', word over the H-action's generators), meaning
    // g . t = t' . h in G.
    std::vector<std::vector<std::pair<int, std::vector<int>>>> table;
};

class InducedSpace : public PointSpace {
public:
    InducedSpace(MarkedAction h_action, std::shared_ptr<const WordArith> arith,
                 TransversalDecomposition dec)
        : h_(std::move(h_action)), arith_(std::move(arith)), dec_(std::move(dec)) {}

    Bytes apply_gen(int i, const Bytes& x) const override {
        int t = static_cast<uint8_t>(x[0]);
        const auto& [t2, hw] = dec_.table[i][t];
        Bytes inner = x.substr(1);
        for (auto it = hw.rbegin(); it != hw.rend(); ++it) inner = h_.apply_gen(*it, inner);
        return ProductSpace::tag_point(t2, inner);
    }

    Bytes apply_elem(const Bytes& g, const Bytes& x) const override {
        std::vector<int> w = arith_->decode(g);
        Bytes y = x;
        for (auto it = w.rbegin(); it != w.rend(); ++it) y = apply_gen(*it, y);
        return y;
    }

    std::string render_point(const Bytes& x) const override {
        int t = static_cast<uint8_t>(x[0]);
        return "t" + std::to_string(t) + ":" + h_.space->render_point(x.substr(1));
    }

private:
    MarkedAction h_;
    std::shared_ptr<const WordArith> arith_;
    TransversalDecomposition dec_;
};

inline MarkedAction induce(const MarkedAction& h_action, const std::vector<std::string>& g_names,
                           const std::vector<int>& g_inverse, const TransversalDecomposition& dec,
                           int transversal_size) {
    if (transversal_size < 1) throw SpecError("transversal must be nonempty");
    if (dec.table.size() != g_names.size()) throw SpecError("decomposition table size mismatch");
    // consistency: g^{-1} g t must return to t
    for (size_t g = 0; g < g_names.size(); ++g) {
        if (static_cast<int>(dec.table[g].size()) != transversal_size)
            throw SpecError("decomposition not total", g_names[g]);
        for (int t = 0; t < transversal_size; ++t) {
            int t1 = dec.table[g][t].first;
            int t2 = dec.table[g_inverse[g]][t1].first;
            if (t2 != t)
                throw SpecError("inconsistent transversal decomposition",
                                g_names[g] + ",t" + std::to_string(t));
        }
    }
    auto arith = std::make_shared<WordArith>(g_names, g_inverse);
    MarkedAction out;
    out.spec = "induced(" + h_action.spec + ")";
    out.group.arith = arith;
    for (size_t i = 0; i < g_names.size(); ++i) {
        out.group.gens.push_back(arith->encode({static_cast<int>(i)}));
        out.group.gen_names.push_back(g_names[i]);
    }
    out.group.inverse_index = g_inverse;
    out.space = std::make_shared<InducedSpace>(h_action, arith, dec);
    for (const Bytes& bp : h_action.basepoints)
        out.basepoints.push_back(ProductSpace::tag_point(0, bp));
    return out;
}

// ---------------------------------------------------------------------------
// Family construction

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline int64_t parse_int(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SpecError("expected an integer for " + what, s);
    }
}

// Appends the symmetric generator pair (or a single self-inverse generator).
inline void add_gen_pair(MarkedGroup& g, const Bytes& elem, const std::string& name) {
    Bytes inv = g.arith->inverse(elem);
    if (inv == elem) {
        g.gens.push_back(elem);
        g.gen_names.push_back(name);
        g.inverse_index.push_back(static_cast<int>(g.gens.size()) - 1);
    } else {
        g.gens.push_back(elem);
        g.gens.push_back(inv);
        g.gen_names.push_back(name);
        g.gen_names.push_back(name + "^-1");
        g.inverse_index.push_back(static_cast<int>(g.gens.size()) - 1);
        g.inverse_index.push_back(static_cast<int>(g.gens.size()) - 2);
    }
}

inline MarkedGroup wreath_group(std::shared_ptr<const WreathArith> arith, const std::string& lamp_name,
                                const std::string& base_name) {
    MarkedGroup g;
    g.arith = arith;
    int d = arith->dim();
    WreathEl lamp;
    lamp.b.assign(d, 0);
    lamp.lamps = {{std::vector<int64_t>(d, 0), 1}};
    add_gen_pair(g, arith->encode(lamp), lamp_name);
    for (int i = 0; i < d; ++i) {
        WreathEl t;
        t.b.assign(d, 0);
        t.b[i] = 1;
        std::string name = d == 1 ? base_name : base_name + std::to_string(i + 1);
        add_gen_pair(g, arith->encode(t), name);
    }
    return g;
}

}  // namespace detail

inline MarkedAction make_family(const std::string& spec);

namespace detail {

inline MarkedAction make_wreath(const std::string& spec, const std::string& params, const std::string& mode) {
    auto parts = split(params, ',');
    if (parts.size() != 2) throw SpecError("wreath spec needs <A>,Z^<d>", params);
    int64_t p = 0;
    if (parts[0] == "Z") p = 0;
    else if (parts[0].size() >= 2 && parts[0][0] == 'C') p = parse_int(parts[0].substr(1), "lamp order");
    else throw SpecError("wreath lamp group must be C<p> or Z", parts[0]);
    if (parts[1].rfind("Z^", 0) != 0) throw SpecError("wreath base must be Z^<d>", parts[1]);
    int d = static_cast<int>(parse_int(parts[1].substr(2), "base rank"));
    auto arith = std::make_shared<WreathArith>(p, d);
    MarkedGroup group = wreath_group(arith, "u", "t");

    MarkedAction out;
    out.spec = spec;
    out.group = group;
    if (mode == "standard") {
        auto space = std::make_shared<StdWreathSpace>(arith, group.gens);
        out.space = space;
        out.basepoints = {space->encode_point(std::vector<int64_t>(d, 0), 0)};
    } else if (mode == "cayley") {
        out.space = std::make_shared<CayleySpace>(arith, group.gens);
        out.basepoints = {arith->identity()};
    } else {
        throw SpecError("wreath mode must be standard or cayley", mode);
    }
    return out;
}

inline MarkedAction make_heisenberg(const std::string& spec, const std::string& mode) {
    auto arith = std::make_shared<HeisArith>();
    MarkedGroup group;
    group.arith = arith;
    add_gen_pair(group, HeisArith::encode({1, 0, 0}), "a");
    add_gen_pair(group, HeisArith::encode({0, 1, 0}), "b");
    group.atoms["c"] = HeisArith::encode({0, 0, 1});

    MarkedAction out;
    out.spec = spec;
    out.group = group;
    if (mode == "cayley") {
        out.space = std::make_shared<CayleySpace>(arith, group.gens);
        out.basepoints = {arith->identity()};
    } else if (mode == "cosets-a") {
        out.space = std::make_shared<HeisCosetSpace>(group.gens);
        out.basepoints = {HeisCosetSpace::encode_point(0, 0)};
    } else {
        throw SpecError("heisenberg mode must be cayley or cosets-a", mode);
    }
    return out;
}

inline MarkedAction make_baumslag(const std::string& spec, const std::string& params, const std::string& mode) {
    int64_t p = -1, d = -1;
    for (const auto& kv : split(params, ',')) {
        auto eq = split(kv, '=');
        if (eq.size() != 2) throw SpecError("baumslag spec needs p=<p>,d=<d>", kv);
        if (eq[0] == "p") p = parse_int(eq[1], "p");
        else if (eq[0] == "d") d = parse_int(eq[1], "d");
        else throw SpecError("unknown baumslag parameter", eq[0]);
    }
    if (p < 0 || d < 0) throw SpecError("baumslag spec needs p=<p>,d=<d>", params);
    auto arith = std::make_shared<BaumslagArith>(static_cast<uint32_t>(p), static_cast<int>(d));

    MarkedGroup group;
    group.arith = arith;
    std::vector<int64_t> q0(2 * d, 0);
    add_gen_pair(group, arith->encode(BaumslagElem::one(arith->p(), arith->dim()), q0), "u");
    for (int i = 0; i < d; ++i) {
        std::vector<int64_t> q(2 * d, 0);
        q[i] = 1;
        add_gen_pair(group, arith->encode(BaumslagElem::zero(arith->p(), arith->dim()), q),
                     d == 1 ? "t" : "t" + std::to_string(i + 1));
    }
    for (int i = 0; i < d; ++i) {
        std::vector<int64_t> q(2 * d, 0);
        q[d + i] = 1;
        add_gen_pair(group, arith->encode(BaumslagElem::zero(arith->p(), arith->dim()), q),
                     d == 1 ? "s" : "s" + std::to_string(i + 1));
    }

    MarkedAction out;
    out.spec = spec;
    out.group = group;
    if (mode == "cosetH") {
        auto space = std::make_shared<LambdaCosetSpace>(arith, group.gens);
        out.space = space;
        out.basepoints = {space->encode_point(std::vector<int64_t>(2 * d, 0), 0)};
    } else if (mode == "cayley-orbit") {
        out.space = std::make_shared<CayleySpace>(arith, group.gens);
        out.basepoints = {arith->identity()};
    } else {
        throw SpecError("baumslag mode must be cosetH or cayley-orbit", mode);
    }
    return out;
}

inline MarkedAction make_bs(const std::string& spec, const std::string& params, const std::string& mode) {
    auto parts = split(params, ',');
    if (parts.size() != 2 || parts[0] != "1") throw SpecError("bs spec must be bs:1,<n>:cayley", params);
    int64_t n = parse_int(parts[1], "n");
    if (mode != "cayley") throw SpecError("bs mode must be cayley", mode);
    auto arith = std::make_shared<BsArith>(n);
    MarkedGroup group;
    group.arith = arith;
    add_gen_pair(group, arith->encode(NAdic{1, 0}, 0), "a");
    add_gen_pair(group, arith->encode(NAdic{}, 1), "t");

    MarkedAction out;
    out.spec = spec;
    out.group = group;
    out.space = std::make_shared<CayleySpace>(arith, group.gens);
    out.basepoints = {arith->identity()};
    return out;
}

// Free metabelian group FM_d through the Magnus embedding. x_i maps to the
// wreath element with a single lamp; the action is the standard wreath action
// of Z wr Z^d on Z^d x Z, restricted to the image (the index-d regrouping of
// Z^d wr Z^d inside Z wr Z^d). Restricting the standard action of the ambient
// lamplighter keeps the sharp n^{d+1} growth.
inline MarkedAction make_fm(const std::string& spec, const std::string& params, const std::string& mode) {
    auto eq = split(params, '=');
    if (eq.size() != 2 || eq[0] != "d") throw SpecError("fm spec needs d=<d>", params);
    int d = static_cast<int>(parse_int(eq[1], "d"));
    if (mode != "magnus-standard") throw SpecError("fm mode must be magnus-standard", mode);
    if (d < 1) throw SpecError("fm rank must be >= 1", std::to_string(d));

    auto arith = std::make_shared<WreathArith>(0, d);
    MarkedGroup group;
    group.arith = arith;
    for (int i = 0; i < d; ++i) {
        WreathEl x;
        x.b.assign(d, 0);
        if (i == 0) x.b[0] = d;
        else x.b[i] = 1;
        std::vector<int64_t> pos(d, 0);
        pos[0] = i;  // lamp slot (i, 0, ..., 0)
        x.lamps = {{pos, 1}};
        add_gen_pair(group, arith->encode(x), "x" + std::to_string(i + 1));
    }

    MarkedAction out;
    out.spec = spec;
    out.group = group;
    auto space = std::make_shared<StdWreathSpace>(arith, group.gens);
    out.space = space;
    out.basepoints = {space->encode_point(std::vector<int64_t>(d, 0), 0)};
    return out;
}

inline MarkedAction make_zwrz(const std::string& spec, const std::string& mode, const std::string& params) {
    if (mode != "cosets-dk") throw SpecError("zwrz mode must be cosets-dk", mode);
    auto eq = split(params, '=');
    if (eq.size() != 2 || eq[0] != "alpha") throw SpecError("zwrz spec needs alpha=<a|a/b>", params);
    auto frac = split(eq[1], '/');
    int64_t num = parse_int(frac[0], "alpha");
    int64_t den = frac.size() > 1 ? parse_int(frac[1], "alpha denominator") : 1;
    std::vector<int64_t> dks = constraint_positions(num, den);

    auto arith = std::make_shared<WreathArith>(0, 1);
    MarkedGroup group = wreath_group(arith, "s", "t");
    // lamp atoms at arbitrary positions, e.g. s@d5 (position d_5) or s@12
    for (size_t k = 1; k <= dks.size(); ++k) {
        WreathEl e;
        e.b = {0};
        e.lamps = {{{dks[k - 1]}, 1}};
        group.atoms["s@d" + std::to_string(k)] = arith->encode(e);
    }

    MarkedAction out;
    out.spec = spec;
    out.group = group;
    auto space = std::make_shared<ZwrzCosetSpace>(arith, group.gens, dks);
    out.space = space;
    out.basepoints = {space->encode_point({})};
    return out;
}

inline MarkedAction make_product_of(const std::string& spec, std::vector<MarkedAction> children) {
    std::vector<std::shared_ptr<const GroupArith>> arith_children;
    for (const auto& c : children) arith_children.push_back(c.group.arith);
    auto arith = std::make_shared<ProductArith>(arith_children);

    MarkedGroup group;
    group.arith = arith;
    std::vector<std::pair<int, int>> gen_map;
    for (size_t i = 0; i < children.size(); ++i) {
        for (int j = 0; j < children[i].generator_count(); ++j) {
            std::vector<Bytes> parts;
            for (size_t k = 0; k < children.size(); ++k)
                parts.push_back(k == i ? children[i].group.gens[j] : children[k].group.arith->identity());
            group.gens.push_back(arith->join(parts));
            group.gen_names.push_back(children[i].group.gen_names[j] + "#" + std::to_string(i + 1));
            gen_map.emplace_back(static_cast<int>(i), j);
        }
    }
    // inverse indices: same child, child's inverse generator
    int offset = 0;
    for (size_t i = 0; i < children.size(); ++i) {
        for (int j = 0; j < children[i].generator_count(); ++j)
            group.inverse_index.push_back(offset + children[i].group.inverse_index[j]);
        offset += children[i].generator_count();
    }

    MarkedAction out;
    out.spec = spec;
    out.group = group;
    out.space = std::make_shared<ProductSpace>(arith, children, gen_map);
    for (size_t i = 0; i < children.size(); ++i)
        for (const Bytes& bp : children[i].basepoints)
            out.basepoints.push_back(ProductSpace::tag_point(static_cast<int>(i), bp));
    return out;
}

inline MarkedAction make_product(const std::string& spec, const std::string& inner) {
    std::vector<MarkedAction> children;
    for (const std::string& s : split(inner, ';')) children.push_back(make_family(s));
    if (children.size() < 2) throw SpecError("product needs at least two factors", inner);
    return make_product_of(spec, std::move(children));
}

}  // namespace detail

// Product group Q_1 x ... x Q_k acting on the disjoint union of the factors'
// spaces, each factor through its projection.
inline MarkedAction product_action(std::vector<MarkedAction> children, const std::string& spec = "") {
    if (children.size() < 2) throw SpecError("product needs at least two factors");
    std::string s = spec;
    if (s.empty()) {
        s = "product:";
        for (size_t i = 0; i < children.size(); ++i) s += (i ? ";" : "") + children[i].spec;
    }
    return detail::make_product_of(s, std::move(children));
}

inline MarkedAction make_family(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw SpecError("unknown family", spec);
    std::string head = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);

    if (head == "product") return detail::make_product(spec, rest);

    auto parts = detail::split(rest, ':');
    if (head == "wreath") {
        if (parts.size() != 2) throw SpecError("wreath spec is wreath:<A>,Z^<d>:<mode>", spec);
        return detail::make_wreath(spec, parts[0], parts[1]);
    }
    if (head == "heisenberg") {
        if (parts.size() != 1) throw SpecError("heisenberg spec is heisenberg:<mode>", spec);
        return detail::make_heisenberg(spec, parts[0]);
    }
    if (head == "baumslag") {
        if (parts.size() != 2) throw SpecError("baumslag spec is baumslag:p=<p>,d=<d>:<mode>", spec);
        return detail::make_baumslag(spec, parts[0], parts[1]);
    }
    if (head == "bs") {
        if (parts.size() != 2) throw SpecError("bs spec is bs:1,<n>:cayley", spec);
        return detail::make_bs(spec, parts[0], parts[1]);
    }
    if (head == "fm") {
        if (parts.size() != 2) throw SpecError("fm spec is fm:d=<d>:magnus-standard", spec);
        return detail::make_fm(spec, parts[0], parts[1]);
    }
    if (head == "zwrz") {
        if (parts.size() != 2) throw SpecError("zwrz spec is zwrz:cosets-dk:alpha=<a>", spec);
        return detail::make_zwrz(spec, parts[0], parts[1]);
    }
    throw SpecError("unknown family", head);
}

}  // namespace growthlab

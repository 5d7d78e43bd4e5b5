#pragma once

// Canonical forms in R_{p,d} = F_p[T_i^{+-1}, (1+T_i)^{-1}; i=1..d], the
// coefficient ring of the Baumslag groups. Elements are F_p-combinations of
// d-fold tensor monomials whose factors are the partial-fraction basis of the
// single-variable ring:
//
//     { T^n : n in Z }  u  { (1+T)^{-q} : q > 0 }.
//
// A mixed monomial T^m (1+T)^k is input syntax (RingMonomial); normalization
// rewrites it into the basis. The two reductions
//     T^{-1}(1+T)^{-1} -> T^{-1} - (1+T)^{-1}
//     T (1+T)^{-q}     -> (1+T)^{-(q-1)} - (1+T)^{-q}
// applied to termination land exactly on this basis; normalize() computes the
// same result in closed form with binomial coefficients.

#include <cstdint>
#include <map>
#include <sstream>
#include <vector>

#include "growthlab/common.hpp"
#include "growthlab/fp.hpp"
#include "growthlab/laurent.hpp"

namespace growthlab {

// One tensor slot of a canonical basis monomial.
struct BFactor {
    enum Kind : uint8_t { Laurent = 0, Pole = 1 };
    Kind kind = Laurent;
    int64_t v = 0;  // Laurent: exponent n; Pole: order q > 0

    static BFactor laurent(int64_t n) { return {Laurent, n}; }
    static BFactor pole(int64_t q) { return {Pole, q}; }

    friend bool operator==(const BFactor&, const BFactor&) = default;
    friend auto operator<=>(const BFactor& a, const BFactor& b) {
        if (a.kind != b.kind) return a.kind <=> b.kind;
        return a.v <=> b.v;
    }
};

using BMonomial = std::vector<BFactor>;  // length d

// Input syntax: per variable i a pair (m_i, k_i) standing for T_i^{m_i} (1+T_i)^{k_i}.
struct RingMonomial {
    std::vector<std::pair<int64_t, int64_t>> mk;

    static RingMonomial ones(int d) { return RingMonomial{std::vector<std::pair<int64_t, int64_t>>(d, {0, 0})}; }
};

// A formal F_p-combination of RingMonomials, before normalization.
using RingExpr = std::vector<std::pair<int64_t, RingMonomial>>;

class BaumslagElem {
public:
    BaumslagElem(uint32_t p, int d) : p_(p), d_(d) {
        if (!is_prime(p)) throw SpecError("p must be prime", std::to_string(p));
        if (d < 1) throw SpecError("d must be >= 1", std::to_string(d));
    }

    uint32_t p() const { return p_; }
    int vars() const { return d_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<BMonomial, uint32_t>& terms() const { return terms_; }

    static BaumslagElem zero(uint32_t p, int d) { return BaumslagElem(p, d); }

    static BaumslagElem one(uint32_t p, int d) {
        BaumslagElem e(p, d);
        e.add_term(BMonomial(d, BFactor::laurent(0)), 1);
        return e;
    }

    void add_term(BMonomial m, uint32_t c) {
        if (static_cast<int>(m.size()) != d_) throw DomainMismatch("tensor monomial length mismatch");
        c %= p_;
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(std::move(m), c);
        if (!inserted) {
            it->second = fp_add(it->second, c, p_);
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend BaumslagElem operator+(const BaumslagElem& a, const BaumslagElem& b) {
        check_same(a, b);
        BaumslagElem r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend BaumslagElem operator-(const BaumslagElem& a) {
        BaumslagElem r(a.p_, a.d_);
        for (const auto& [m, c] : a.terms_) r.add_term(m, fp_neg(c, a.p_));
        return r;
    }

    friend BaumslagElem operator-(const BaumslagElem& a, const BaumslagElem& b) { return a + (-b); }

    BaumslagElem scalar_mul(uint32_t s) const {
        BaumslagElem r(p_, d_);
        for (const auto& [m, c] : terms_) r.add_term(m, fp_mul(c, s % p_, p_));
        return r;
    }

    friend bool operator==(const BaumslagElem& a, const BaumslagElem& b) {
        return a.p_ == b.p_ && a.d_ == b.d_ && a.terms_ == b.terms_;
    }

    std::string render() const;

private:
    static void check_same(const BaumslagElem& a, const BaumslagElem& b) {
        if (a.p_ != b.p_ || a.d_ != b.d_) throw DomainMismatch("operands live in different rings");
    }

    uint32_t p_;
    int d_;
    std::map<BMonomial, uint32_t> terms_;
};

namespace detail {

// Canonical expansion of the single-variable monomial T^m (1+T)^k as basis
// factor/coefficient pairs. Term count is O(|m| + |k| + |m||k|); capped so a
// hostile expression fails loudly instead of exhausting memory.
inline std::vector<std::pair<BFactor, uint32_t>> expand_single(int64_t m, int64_t k, uint32_t p,
                                                               size_t cap = 1u << 20) {
    std::vector<std::pair<BFactor, uint32_t>> out;
    auto guard = [&] {
        if (out.size() > cap) throw BudgetError("ring expression expansion exceeds term cap");
    };
    auto signed_binom = [p](uint64_t n, uint64_t r, bool negative) -> uint32_t {
        uint32_t b = binom_mod_p(n, r, p);
        return negative ? fp_neg(b, p) : b;
    };

    if (k >= 0) {
        // binomial expansion of (1+T)^k
        for (int64_t i = 0; i <= k; ++i) {
            uint32_t c = binom_mod_p(static_cast<uint64_t>(k), static_cast<uint64_t>(i), p);
            if (c) out.emplace_back(BFactor::laurent(m + i), c);
            guard();
        }
        return out;
    }

    int64_t q = -k;
    if (m == 0) {
        out.emplace_back(BFactor::pole(q), 1);
        return out;
    }
    if (m > 0) {
        // T^m = ((1+T) - 1)^m, then split at the pole order
        for (int64_t j = 0; j <= m; ++j) {
            bool neg = ((m - j) % 2) != 0;
            uint32_t c = signed_binom(static_cast<uint64_t>(m), static_cast<uint64_t>(j), neg);
            if (!c) continue;
            if (j < q) {
                out.emplace_back(BFactor::pole(q - j), c);
            } else if (j == q) {
                out.emplace_back(BFactor::laurent(0), c);
            } else {
                for (int64_t i = 0; i <= j - q; ++i) {
                    uint32_t b = binom_mod_p(static_cast<uint64_t>(j - q), static_cast<uint64_t>(i), p);
                    if (b) out.emplace_back(BFactor::laurent(i), fp_mul(c, b, p));
                    guard();
                }
            }
            guard();
        }
        return out;
    }

    // m < 0: partial fractions of 1/(T^l (1+T)^q) with l = -m:
    //   sum_i (-1)^{l-i} C(q+l-i-1, l-i) T^{-i}  +  sum_j (-1)^l C(l+q-j-1, q-j) (1+T)^{-j}
    int64_t l = -m;
    for (int64_t i = 1; i <= l; ++i) {
        bool neg = ((l - i) % 2) != 0;
        uint32_t c = signed_binom(static_cast<uint64_t>(q + l - i - 1), static_cast<uint64_t>(l - i), neg);
        if (c) out.emplace_back(BFactor::laurent(-i), c);
        guard();
    }
    for (int64_t j = 1; j <= q; ++j) {
        bool neg = (l % 2) != 0;
        uint32_t c = signed_binom(static_cast<uint64_t>(l + q - j - 1), static_cast<uint64_t>(q - j), neg);
        if (c) out.emplace_back(BFactor::pole(j), c);
        guard();
    }
    return out;
}

// Product of two canonical single-variable factors, as basis combinations.
inline std::vector<std::pair<BFactor, uint32_t>> mul_factors(const BFactor& a, const BFactor& b,
                                                             uint32_t p) {
    if (a.kind == BFactor::Laurent && b.kind == BFactor::Laurent)
        return {{BFactor::laurent(a.v + b.v), 1}};
    if (a.kind == BFactor::Pole && b.kind == BFactor::Pole)
        return {{BFactor::pole(a.v + b.v), 1}};
    const BFactor& lau = a.kind == BFactor::Laurent ? a : b;
    const BFactor& pol = a.kind == BFactor::Pole ? a : b;
    return expand_single(lau.v, -pol.v, p);
}

}  // namespace detail

// The unique canonical form of a formal combination of mixed monomials.
// Normalization is F_p-linear and multiplicative.
inline BaumslagElem baumslag_normalize(const RingExpr& expr, uint32_t p, int d) {
    BaumslagElem out(p, d);
    for (const auto& [coeff, mono] : expr) {
        if (static_cast<int>(mono.mk.size()) != d)
            throw DomainMismatch("monomial variable count mismatch");
        uint32_t c0 = fp_reduce(coeff, p);
        if (c0 == 0) continue;
        // expand each tensor slot, then take the cartesian product
        std::vector<std::pair<BMonomial, uint32_t>> acc = {{BMonomial{}, c0}};
        for (int i = 0; i < d; ++i) {
            auto slot = detail::expand_single(mono.mk[i].first, mono.mk[i].second, p);
            std::vector<std::pair<BMonomial, uint32_t>> next;
            next.reserve(acc.size() * slot.size());
            for (const auto& [pref, cp] : acc)
                for (const auto& [f, cf] : slot) {
                    BMonomial ext = pref;
                    ext.push_back(f);
                    next.emplace_back(std::move(ext), fp_mul(cp, cf, p));
                }
            acc = std::move(next);
            if (acc.size() > (1u << 22)) throw BudgetError("ring expression expansion exceeds term cap");
        }
        for (auto& [m, c] : acc) out.add_term(std::move(m), c);
    }
    return out;
}

inline BaumslagElem mul(const BaumslagElem& a, const BaumslagElem& b) {
    if (a.p() != b.p() || a.vars() != b.vars()) throw DomainMismatch("operands live in different rings");
    uint32_t p = a.p();
    int d = a.vars();
    BaumslagElem out(p, d);
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            std::vector<std::pair<BMonomial, uint32_t>> acc = {{BMonomial{}, fp_mul(ca, cb, p)}};
            for (int i = 0; i < d; ++i) {
                auto slot = detail::mul_factors(ma[i], mb[i], p);
                std::vector<std::pair<BMonomial, uint32_t>> next;
                next.reserve(acc.size() * slot.size());
                for (const auto& [pref, cp] : acc)
                    for (const auto& [f, cf] : slot) {
                        BMonomial ext = pref;
                        ext.push_back(f);
                        next.emplace_back(std::move(ext), fp_mul(cp, cf, p));
                    }
                acc = std::move(next);
            }
            for (auto& [m, c] : acc) out.add_term(std::move(m), c);
        }
    return out;
}

// Multiply by the unit monomial prod_i T_i^{m_i} (1+T_i)^{k_i} (the Z^{2d}
// module action on the ring).
inline BaumslagElem mul_by_unit(const BaumslagElem& a, const RingMonomial& u) {
    RingExpr e = {{1, u}};
    return mul(a, baumslag_normalize(e, a.p(), a.vars()));
}

// Coefficient of the all-ones tensor monomial T_1^0 x ... x T_d^0.
inline uint32_t coeff_a0(const BaumslagElem& e) {
    BMonomial key(e.vars(), BFactor::laurent(0));
    auto it = e.terms().find(key);
    return it == e.terms().end() ? 0 : it->second;
}

// Closed form for a0 of a single mixed monomial T^M (1+T)^K (one variable):
//   K >= 0            : C(K, -M) when 0 <= -M <= K, else 0
//   K < 0 and M <= 0  : 0   (pure pole part)
//   K < 0 and M > 0   : (-1)^{M-q} C(M-1, q-1) with q = -K
// Tensor monomials multiply slotwise, so a0 of a product is the product of
// these values. Cross-validated against baumslag_normalize in the tests.
inline uint32_t a0_of_monomial(int64_t M, int64_t K, uint32_t p) {
    if (K >= 0) {
        if (M > 0 || -M > K) return 0;
        return binom_mod_p(static_cast<uint64_t>(K), static_cast<uint64_t>(-M), p);
    }
    if (M <= 0) return 0;
    int64_t q = -K;
    if (q > M) return 0;
    uint32_t b = binom_mod_p(static_cast<uint64_t>(M - 1), static_cast<uint64_t>(q - 1), p);
    return ((M - q) % 2) ? fp_neg(b, p) : b;
}

inline std::string BaumslagElem::render() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::ostringstream fs;
        bool any = false;
        for (int i = 0; i < d_; ++i) {
            const BFactor& f = m[i];
            if (f.kind == BFactor::Laurent) {
                if (f.v == 0) continue;
                if (any) fs << "*";
                any = true;
                fs << "T" << (i + 1);
                if (f.v != 1) fs << "^" << f.v;
            } else {
                if (any) fs << "*";
                any = true;
                fs << "(1+T" << (i + 1) << ")^-" << f.v;
            }
        }
        if (!any) {
            os << c;
        } else if (c == 1) {
            os << fs.str();
        } else {
            os << c << "*" << fs.str();
        }
    }
    return os.str();
}

// Clears all denominators of e by multiplying with prod_i T_i^M (1+T_i)^K and
// expanding inside the Laurent ring; used by the denominator-clearing oracle.
// M, K must dominate every pole and negative exponent in e.
inline LaurentPoly baumslag_clear(const BaumslagElem& e, int64_t M, int64_t K) {
    RingTag tag = RingTag::fp(e.p(), e.vars());
    LaurentPoly out = LaurentPoly::zero(tag);
    for (const auto& [mono, c] : e.terms()) {
        LaurentPoly term = LaurentPoly::constant(tag, c);
        for (int i = 0; i < e.vars(); ++i) {
            LaurentPoly factor = LaurentPoly::zero(tag);
            const BFactor& f = mono[i];
            // factor_i * T_i^M (1+T_i)^K, expanded
            int64_t texp = (f.kind == BFactor::Laurent) ? f.v + M : M;
            int64_t uexp = (f.kind == BFactor::Laurent) ? K : K - f.v;
            if (uexp < 0) throw SpecError("clearing exponent too small");
            for (int64_t j = 0; j <= uexp; ++j) {
                uint32_t b = binom_mod_p(static_cast<uint64_t>(uexp), static_cast<uint64_t>(j), e.p());
                if (!b) continue;
                LaurentPoly::Exps ev(e.vars(), 0);
                ev[i] = texp + j;
                factor.add_term(std::move(ev), b);
            }
            term = term * factor;
        }
        out = out + term;
    }
    return out;
}

}  // namespace growthlab

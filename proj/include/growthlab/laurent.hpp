#pragma once

// Sparse multivariate Laurent polynomials over Z or F_p. Canonical form: no
// zero coefficients are stored, F_p coefficients lie in [0, p). Exponent
// vectors have a fixed length d >= 1 per ring.

#include <map>
#include <sstream>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "growthlab/common.hpp"
#include "growthlab/fp.hpp"

namespace growthlab {

using BigInt = boost::multiprecision::cpp_int;

enum class Scalars : uint8_t { Integers, PrimeField };

struct RingTag {
    Scalars dom = Scalars::Integers;
    uint32_t p = 0;  // modulus when dom == PrimeField
    int vars = 1;

    friend bool operator==(const RingTag&, const RingTag&) = default;

    static RingTag integers(int d) { return {Scalars::Integers, 0, d}; }
    static RingTag fp(uint32_t p, int d) {
        if (!is_prime(p)) throw SpecError("modulus must be prime", std::to_string(p));
        if (p >= (1u << 31)) throw SpecError("modulus must be < 2^31", std::to_string(p));
        return {Scalars::PrimeField, p, d};
    }
};

class LaurentPoly {
public:
    using Exps = std::vector<int64_t>;

    explicit LaurentPoly(RingTag tag) : tag_(tag) {
        if (tag.vars < 1) throw SpecError("variable count must be >= 1", std::to_string(tag.vars));
    }

    static LaurentPoly zero(RingTag tag) { return LaurentPoly(tag); }

    static LaurentPoly constant(RingTag tag, const BigInt& c) {
        LaurentPoly r(tag);
        r.add_term(Exps(tag.vars, 0), c);
        return r;
    }

    static LaurentPoly monomial(RingTag tag, Exps e, const BigInt& c) {
        LaurentPoly r(tag);
        r.add_term(std::move(e), c);
        return r;
    }

    const RingTag& tag() const { return tag_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Exps, BigInt>& terms() const { return terms_; }

    BigInt coeff(const Exps& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    void add_term(Exps e, BigInt c) {
        if (static_cast<int>(e.size()) != tag_.vars)
            throw DomainMismatch("exponent vector length mismatch");
        reduce(c);
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(c));
        } else {
            it->second += c;
            reduce(it->second);
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
        check_same(a, b);
        LaurentPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& a) {
        LaurentPoly r(a.tag_);
        for (const auto& [e, c] : a.terms_) r.add_term(e, -c);
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        check_same(a, b);
        LaurentPoly r(a.tag_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exps e(a.tag_.vars);
                for (int i = 0; i < a.tag_.vars; ++i) e[i] = ea[i] + eb[i];
                r.add_term(std::move(e), ca * cb);
            }
        return r;
    }

    LaurentPoly scalar_mul(const BigInt& s) const {
        LaurentPoly r(tag_);
        for (const auto& [e, c] : terms_) r.add_term(e, c * s);
        return r;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.tag_ == b.tag_ && a.terms_ == b.terms_;
    }

    // Debug rendering, e.g. "2*T1^-3 + 1"; round-trips through the expression
    // parser in ring_text.hpp.
    std::string render() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            BigInt mag = c < 0 ? BigInt(-c) : c;
            if (first) {
                if (c < 0) os << "-";
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            bool any_var = false;
            std::ostringstream vars;
            for (int i = 0; i < tag_.vars; ++i) {
                if (e[i] == 0) continue;
                if (any_var) vars << "*";
                any_var = true;
                vars << "T" << (i + 1);
                if (e[i] != 1) vars << "^" << e[i];
            }
            if (!any_var) {
                os << mag;
            } else if (mag == 1) {
                os << vars.str();
            } else {
                os << mag << "*" << vars.str();
            }
        }
        return os.str();
    }

private:
    void reduce(BigInt& c) const {
        if (tag_.dom == Scalars::PrimeField) {
            c %= tag_.p;
            if (c < 0) c += tag_.p;
        }
    }

    static void check_same(const LaurentPoly& a, const LaurentPoly& b) {
        if (!(a.tag_ == b.tag_))
            throw DomainMismatch("operands live in different rings");
    }

    RingTag tag_;
    std::map<Exps, BigInt> terms_;
};

}  // namespace growthlab

#pragma once

// Textual expressions for ring elements, e.g. "2*T1^-3*(1+T1)^-2 + 1".
// The canonical renderings of LaurentPoly and BaumslagElem round-trip
// through parse_ring_expr.

#include <cctype>
#include <string>
#include <vector>

#include "growthlab/baumslag_ring.hpp"
#include "growthlab/laurent.hpp"

namespace growthlab {

struct ParsedTerm {
    BigInt coeff;
    RingMonomial mono;
};

using ParsedExpr = std::vector<ParsedTerm>;

namespace detail {

class RingParser {
public:
    RingParser(const std::string& s, int d) : s_(s), d_(d) {}

    ParsedExpr parse() {
        ParsedExpr out;
        skip_ws();
        bool neg = eat_sign();
        out.push_back(term(neg));
        skip_ws();
        while (!done()) {
            char c = peek();
            if (c != '+' && c != '-') fail("expected '+' or '-'");
            ++pos_;
            skip_ws();
            out.push_back(term(c == '-'));
            skip_ws();
        }
        return out;
    }

private:
    ParsedTerm term(bool negate) {
        ParsedTerm t{BigInt(1), RingMonomial::ones(d_)};
        bool first = true;
        while (true) {
            factor(t, first);
            first = false;
            skip_ws();
            if (!done() && peek() == '*') {
                ++pos_;
                skip_ws();
                continue;
            }
            break;
        }
        if (negate) t.coeff = -t.coeff;
        return t;
    }

    void factor(ParsedTerm& t, bool allow_coeff) {
        if (done()) fail("unexpected end of expression");
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            BigInt v = integer();
            if (!allow_coeff && v != 1) t.coeff *= v;  // tolerated anywhere
            else t.coeff *= v;
            return;
        }
        if (c == 'T') {
            ++pos_;
            int idx = var_index();
            int64_t e = opt_exponent();
            t.mono.mk[idx].first += e;
            return;
        }
        if (c == '(') {
            expect('(');
            skip_ws();
            expect('1');
            skip_ws();
            expect('+');
            skip_ws();
            expect('T');
            int idx = var_index();
            skip_ws();
            expect(')');
            int64_t e = opt_exponent();
            t.mono.mk[idx].second += e;
            return;
        }
        fail("unexpected character");
    }

    int var_index() {
        if (done() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index");
        int64_t idx = 0;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            idx = idx * 10 + (next() - '0');
            if (idx > 64) fail("variable index too large");
        }
        if (idx < 1 || idx > d_) fail("variable index out of range");
        return static_cast<int>(idx - 1);
    }

    int64_t opt_exponent() {
        if (done() || peek() != '^') return 1;
        ++pos_;
        bool neg = eat_sign();
        if (done() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
        int64_t v = 0;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (next() - '0');
            if (v > (1 << 24)) fail("exponent too large");
        }
        return neg ? -v : v;
    }

    BigInt integer() {
        BigInt v = 0;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + (next() - '0');
        return v;
    }

    bool eat_sign() {
        if (!done() && (peek() == '-' || peek() == '+')) {
            bool neg = peek() == '-';
            ++pos_;
            skip_ws();
            return neg;
        }
        return false;
    }

    void expect(char c) {
        if (done() || peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    bool done() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    char next() { return s_[pos_++]; }

    [[noreturn]] void fail(const std::string& why) {
        throw SpecError("ring expression parse error at offset " + std::to_string(pos_) + ": " + why,
                        s_.substr(pos_, 8));
    }

    const std::string& s_;
    int d_;
    size_t pos_ = 0;
};

}  // namespace detail

inline ParsedExpr parse_ring_expr(const std::string& s, int d) {
    return detail::RingParser(s, d).parse();
}

// Parse + normalize into the canonical Baumslag ring form.
inline BaumslagElem parse_baumslag(const std::string& s, uint32_t p, int d) {
    ParsedExpr pe = parse_ring_expr(s, d);
    RingExpr re;
    re.reserve(pe.size());
    for (const auto& t : pe) {
        BigInt c = t.coeff % p;
        if (c < 0) c += p;
        re.emplace_back(static_cast<int64_t>(c), t.mono);
    }
    return baumslag_normalize(re, p, d);
}

// Parse into a Laurent polynomial; (1+T_i)^k factors require k >= 0 and are
// expanded binomially.
inline LaurentPoly parse_laurent(const std::string& s, RingTag tag) {
    ParsedExpr pe = parse_ring_expr(s, tag.vars);
    LaurentPoly out = LaurentPoly::zero(tag);
    for (const auto& t : pe) {
        LaurentPoly term = LaurentPoly::constant(tag, t.coeff);
        for (int i = 0; i < tag.vars; ++i) {
            auto [m, k] = t.mono.mk[i];
            if (k < 0) throw SpecError("negative (1+T) exponent is not a Laurent polynomial", s);
            LaurentPoly f = LaurentPoly::zero(tag);
            for (int64_t j = 0; j <= k; ++j) {
                // integer binomials stay exact in BigInt
                BigInt b = 1;
                for (int64_t i2 = 0; i2 < j; ++i2) b = b * (k - i2) / (i2 + 1);
                LaurentPoly::Exps e(tag.vars, 0);
                e[i] = m + j;
                f.add_term(std::move(e), b);
            }
            term = term * f;
        }
        out = out + term;
    }
    return out;
}

}  // namespace growthlab

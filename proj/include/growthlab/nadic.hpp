#pragma once

// n-adic rationals: numerator / n^exponent in reduced form (exponent == 0 or
// n does not divide the numerator). The additive group Z[1/n] underlying
// BS(1,n) = Z[1/n] x| Z.

#include <cstdint>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "growthlab/common.hpp"

namespace growthlab {

struct NAdic {
    boost::multiprecision::cpp_int num = 0;
    int64_t exp = 0;  // value = num / base^exp, exp >= 0

    friend bool operator==(const NAdic&, const NAdic&) = default;
};

inline NAdic nadic_reduce(NAdic x, int64_t base) {
    if (x.num == 0) {
        x.exp = 0;
        return x;
    }
    while (x.exp > 0 && x.num % base == 0) {
        x.num /= base;
        --x.exp;
    }
    return x;
}

inline NAdic nadic_from_int(int64_t v) { return NAdic{v, 0}; }

inline void nadic_check_base(int64_t base) {
    if (base < 2) throw SpecError("n-adic base must be >= 2", std::to_string(base));
}

inline NAdic nadic_add(const NAdic& a, const NAdic& b, int64_t base) {
    nadic_check_base(base);
    using boost::multiprecision::cpp_int;
    int64_t e = std::max(a.exp, b.exp);
    cpp_int pa = 1, pb = 1;
    for (int64_t i = a.exp; i < e; ++i) pa *= base;
    for (int64_t i = b.exp; i < e; ++i) pb *= base;
    return nadic_reduce(NAdic{a.num * pa + b.num * pb, e}, base);
}

inline NAdic nadic_neg(const NAdic& a) { return NAdic{-a.num, a.exp}; }

// Multiplication by base^k (k may be negative); an automorphism of Z[1/n].
inline NAdic nadic_scale(const NAdic& a, int64_t k, int64_t base) {
    nadic_check_base(base);
    NAdic r = a;
    if (k >= 0) {
        if (r.exp >= k) {
            r.exp -= k;
        } else {
            int64_t up = k - r.exp;
            r.exp = 0;
            for (int64_t i = 0; i < up; ++i) r.num *= base;
        }
    } else {
        r.exp += -k;
    }
    return nadic_reduce(r, base);
}

inline std::string nadic_render(const NAdic& a, int64_t base) {
    std::ostringstream os;
    os << a.num;
    if (a.exp > 0) os << "/" << base << "^" << a.exp;
    return os.str();
}

}  // namespace growthlab

#pragma once

// Prime-field scalars with a runtime modulus p < 2^31, plus binomial
// coefficients mod p via Lucas' theorem.

#include <cstdint>

#include "growthlab/common.hpp"

namespace growthlab {

inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Value in [0, p). Operations take p explicitly; the containers that hold
// these scalars carry the modulus.
inline uint32_t fp_reduce(int64_t v, uint32_t p) {
    int64_t r = v % static_cast<int64_t>(p);
    if (r < 0) r += p;
    return static_cast<uint32_t>(r);
}

inline uint32_t fp_add(uint32_t a, uint32_t b, uint32_t p) {
    uint64_t s = static_cast<uint64_t>(a) + b;
    return static_cast<uint32_t>(s >= p ? s - p : s);
}

inline uint32_t fp_neg(uint32_t a, uint32_t p) { return a == 0 ? 0 : p - a; }

inline uint32_t fp_mul(uint32_t a, uint32_t b, uint32_t p) {
    return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
}

// C(n, k) mod p by Lucas' theorem. C(n, k) = prod C(n_i, k_i) over base-p
// digits; each digit binomial has n_i, k_i < p.
inline uint32_t binom_mod_p(uint64_t n, uint64_t k, uint32_t p) {
    if (k > n) return 0;
    auto small = [p](uint64_t a, uint64_t b) -> uint32_t {
        // a, b < p; plain product formula with modular inverses via Fermat
        if (b > a) return 0;
        if (b > a - b) b = a - b;
        uint64_t num = 1, den = 1;
        for (uint64_t i = 0; i < b; ++i) {
            num = (num * ((a - i) % p)) % p;
            den = (den * ((i + 1) % p)) % p;
        }
        // den^(p-2) mod p
        uint64_t inv = 1, base = den, e = p - 2;
        while (e) {
            if (e & 1) inv = (inv * base) % p;
            base = (base * base) % p;
            e >>= 1;
        }
        return static_cast<uint32_t>((num * inv) % p);
    };
    uint64_t result = 1;
    while (n || k) {
        uint64_t nd = n % p, kd = k % p;
        result = (result * small(nd, kd)) % p;
        if (result == 0) return 0;
        n /= p;
        k /= p;
    }
    return static_cast<uint32_t>(result);
}

}  // namespace growthlab

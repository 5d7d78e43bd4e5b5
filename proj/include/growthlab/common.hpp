#pragma once

// Shared plumbing: error types, canonical byte codecs, stable 128-bit
// fingerprints, and a tiny deterministic RNG used by the randomized suites.

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace growthlab {

using Bytes = std::string;

// ---------------------------------------------------------------------------
// Errors

// Bad user input: unknown family string, invalid parameter, malformed word,
// violated precondition. Carries the offending token for diagnostics.
class SpecError : public std::runtime_error {
public:
    SpecError(const std::string& msg, const std::string& token = "")
        : std::runtime_error(token.empty() ? msg : msg + " (token: " + token + ")"),
          token_(token) {}
    const std::string& token() const { return token_; }

private:
    std::string token_;
};

// Operands from different rings (variable count or scalar domain differs).
class DomainMismatch : public SpecError {
public:
    using SpecError::SpecError;
};

// A configured resource cap was exhausted (memory budget, grid cap).
// Callers that can produce a partial result flag it instead of throwing.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Canonical little-endian byte codecs. Fixed-width writes are used for point
// labels (compact, unique); zig-zag varints for element payloads whose
// magnitudes vary a lot.

inline void put_u8(Bytes& b, uint8_t v) { b.push_back(static_cast<char>(v)); }

inline void put_i16(Bytes& b, int64_t v) {
    if (v < INT16_MIN || v > INT16_MAX) throw BudgetError("coordinate exceeds point codec range");
    uint16_t u = static_cast<uint16_t>(static_cast<int16_t>(v));
    b.push_back(static_cast<char>(u & 0xff));
    b.push_back(static_cast<char>(u >> 8));
}

inline void put_i32(Bytes& b, int64_t v) {
    if (v < INT32_MIN || v > INT32_MAX) throw BudgetError("coordinate exceeds point codec range");
    uint32_t u = static_cast<uint32_t>(static_cast<int32_t>(v));
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

inline void put_varint(Bytes& b, int64_t v) {
    // zig-zag then LEB128; minimal length makes the encoding canonical
    uint64_t u = (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
    while (u >= 0x80) {
        b.push_back(static_cast<char>(u | 0x80));
        u >>= 7;
    }
    b.push_back(static_cast<char>(u));
}

struct ByteReader {
    const Bytes* src;
    size_t pos = 0;

    explicit ByteReader(const Bytes& s) : src(&s) {}

    uint8_t u8() {
        check(1);
        return static_cast<uint8_t>((*src)[pos++]);
    }
    int16_t i16() {
        check(2);
        uint16_t u = static_cast<uint8_t>((*src)[pos]) | (static_cast<uint16_t>(static_cast<uint8_t>((*src)[pos + 1])) << 8);
        pos += 2;
        return static_cast<int16_t>(u);
    }
    int32_t i32() {
        check(4);
        uint32_t u = 0;
        for (int i = 0; i < 4; ++i) u |= static_cast<uint32_t>(static_cast<uint8_t>((*src)[pos + i])) << (8 * i);
        pos += 4;
        return static_cast<int32_t>(u);
    }
    int64_t varint() {
        uint64_t u = 0;
        int shift = 0;
        while (true) {
            check(1);
            uint8_t c = static_cast<uint8_t>((*src)[pos++]);
            u |= static_cast<uint64_t>(c & 0x7f) << shift;
            if (!(c & 0x80)) break;
            shift += 7;
            if (shift > 63) throw std::runtime_error("corrupt varint");
        }
        return static_cast<int64_t>((u >> 1) ^ (~(u & 1) + 1));
    }
    bool done() const { return pos == src->size(); }

private:
    void check(size_t n) const {
        if (pos + n > src->size()) throw std::runtime_error("truncated encoding");
    }
};

// ---------------------------------------------------------------------------
// Stable 128-bit fingerprint (MurmurHash3 x64/128). Stable across runs and
// platforms; std::hash is neither.

struct Fingerprint {
    uint64_t hi = 0, lo = 0;
    friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
        return a.hi == b.hi && a.lo == b.lo;
    }
};

struct FingerprintHash {
    size_t operator()(const Fingerprint& f) const { return static_cast<size_t>(f.lo ^ (f.hi * 0x9e3779b97f4a7c15ULL)); }
};

inline uint64_t fmix64(uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ULL;
    k ^= k >> 33;
    return k;
}

inline Fingerprint fingerprint128(const void* key, size_t len, uint64_t seed = 0x5eed'c0de'0000'0001ULL) {
    const uint8_t* data = static_cast<const uint8_t*>(key);
    const size_t nblocks = len / 16;
    uint64_t h1 = seed, h2 = seed;
    const uint64_t c1 = 0x87c37b91114253d5ULL, c2 = 0x4cf5ad432745937fULL;

    auto load64 = [](const uint8_t* p) {
        uint64_t v;
        std::memcpy(&v, p, 8);
        return v;
    };

    for (size_t i = 0; i < nblocks; i++) {
        uint64_t k1 = load64(data + i * 16), k2 = load64(data + i * 16 + 8);
        k1 *= c1; k1 = (k1 << 31) | (k1 >> 33); k1 *= c2; h1 ^= k1;
        h1 = (h1 << 27) | (h1 >> 37); h1 += h2; h1 = h1 * 5 + 0x52dce729;
        k2 *= c2; k2 = (k2 << 33) | (k2 >> 31); k2 *= c1; h2 ^= k2;
        h2 = (h2 << 31) | (h2 >> 33); h2 += h1; h2 = h2 * 5 + 0x38495ab5;
    }

    const uint8_t* tail = data + nblocks * 16;
    uint64_t k1 = 0, k2 = 0;
    switch (len & 15) {
        case 15: k2 ^= static_cast<uint64_t>(tail[14]) << 48; [[fallthrough]];
        case 14: k2 ^= static_cast<uint64_t>(tail[13]) << 40; [[fallthrough]];
        case 13: k2 ^= static_cast<uint64_t>(tail[12]) << 32; [[fallthrough]];
        case 12: k2 ^= static_cast<uint64_t>(tail[11]) << 24; [[fallthrough]];
        case 11: k2 ^= static_cast<uint64_t>(tail[10]) << 16; [[fallthrough]];
        case 10: k2 ^= static_cast<uint64_t>(tail[9]) << 8; [[fallthrough]];
        case 9: k2 ^= static_cast<uint64_t>(tail[8]);
            k2 *= c2; k2 = (k2 << 33) | (k2 >> 31); k2 *= c1; h2 ^= k2;
            [[fallthrough]];
        case 8: k1 ^= static_cast<uint64_t>(tail[7]) << 56; [[fallthrough]];
        case 7: k1 ^= static_cast<uint64_t>(tail[6]) << 48; [[fallthrough]];
        case 6: k1 ^= static_cast<uint64_t>(tail[5]) << 40; [[fallthrough]];
        case 5: k1 ^= static_cast<uint64_t>(tail[4]) << 32; [[fallthrough]];
        case 4: k1 ^= static_cast<uint64_t>(tail[3]) << 24; [[fallthrough]];
        case 3: k1 ^= static_cast<uint64_t>(tail[2]) << 16; [[fallthrough]];
        case 2: k1 ^= static_cast<uint64_t>(tail[1]) << 8; [[fallthrough]];
        case 1: k1 ^= static_cast<uint64_t>(tail[0]);
            k1 *= c1; k1 = (k1 << 31) | (k1 >> 33); k1 *= c2; h1 ^= k1;
            break;
        case 0: break;
    }

    h1 ^= len; h2 ^= len;
    h1 += h2; h2 += h1;
    h1 = fmix64(h1); h2 = fmix64(h2);
    h1 += h2; h2 += h1;
    return Fingerprint{h1, h2};
}

inline Fingerprint fingerprint128(const Bytes& b) { return fingerprint128(b.data(), b.size()); }

// ---------------------------------------------------------------------------
// Deterministic RNG for the randomized property suites. splitmix64 keeps the
// sequences identical across standard libraries (std distributions are not).

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform-ish in [lo, hi]; modulo bias is irrelevant for test data
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(next() % static_cast<uint64_t>(hi - lo + 1));
    }
    bool chance(double p) { return static_cast<double>(next() >> 11) / 9007199254740992.0 < p; }

private:
    uint64_t state_;
};

}  // namespace growthlab

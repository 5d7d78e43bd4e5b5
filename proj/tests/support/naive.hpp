#pragma once

// Test-only oracles, deliberately independent of the library's
// implementation paths: a 3x3 unitriangular matrix model for the Heisenberg
// group, a naive set-based BFS, and exact rationals for n-adic checks.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "growthlab/action.hpp"

namespace oracle {

// --- Heisenberg as upper unitriangular integer matrices ---------------------
// M(x, y, z) = [[1, x, z], [0, 1, y], [0, 0, 1]]; a = M(1,0,0), b = M(0,1,0).

using Mat3 = std::array<std::array<int64_t, 3>, 3>;

inline Mat3 mat_identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int64_t s = 0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            r[i][j] = s;
        }
    return r;
}

inline Mat3 heis_matrix(int64_t x, int64_t y, int64_t z) {
    return {{{1, x, z}, {0, 1, y}, {0, 0, 1}}};
}

// coordinates (x, y, z) of a matrix: x = m[0][1], y = m[1][2], z = m[0][2]
struct Coords {
    int64_t x, y, z;
    friend bool operator==(const Coords&, const Coords&) = default;
};

inline Coords mat_coords(const Mat3& m) { return {m[0][1], m[1][2], m[0][2]}; }

// --- naive BFS ---------------------------------------------------------------
// Ball sizes via std::set over canonical point bytes; shares nothing with the
// explorer's fingerprint machinery.

inline std::vector<int64_t> naive_ball_sizes(const growthlab::MarkedAction& a,
                                             const growthlab::Bytes& start, int R) {
    std::set<growthlab::Bytes> seen{start};
    std::vector<growthlab::Bytes> frontier{start};
    std::vector<int64_t> sizes{1};
    for (int r = 0; r < R; ++r) {
        std::vector<growthlab::Bytes> next;
        for (const auto& x : frontier)
            for (int i = 0; i < a.generator_count(); ++i) {
                growthlab::Bytes y = a.apply_gen(i, x);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
        sizes.push_back(sizes.back() + static_cast<int64_t>(frontier.size()));
    }
    return sizes;
}

// --- exact rationals -----------------------------------------------------------

struct Rat {
    boost::multiprecision::cpp_int num = 0, den = 1;

    void reduce() {
        using boost::multiprecision::cpp_int;
        if (den < 0) {
            num = -num;
            den = -den;
        }
        cpp_int g = boost::multiprecision::gcd(num < 0 ? cpp_int(-num) : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    friend Rat operator+(Rat a, const Rat& b) {
        Rat r{a.num * b.den + b.num * a.den, a.den * b.den};
        r.reduce();
        return r;
    }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
};

}  // namespace oracle

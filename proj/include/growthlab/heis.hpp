#pragma once

// Integer Heisenberg group H3(Z) = <a, b, c : [a,b] = c, [a,c] = [b,c] = 1>
// in normal-form coordinates g = c^z b^y a^x.
//
// With the commutator convention [a,b] = a^{-1} b^{-1} a b the relation reads
// ab = bac, which gives a^x b^y = b^y a^x c^{xy} and hence the product law
//   (c^{z1} b^{y1} a^{x1})(c^{z2} b^{y2} a^{x2}) = c^{z1+z2+x1*y2} b^{y1+y2} a^{x1+x2}.
// The law is validated in the tests against the 3x3 unitriangular matrix
// model rather than asserted; commutator(a, b) == c is the pinned invariant.

#include <cstdint>
#include <sstream>

#include "growthlab/common.hpp"

namespace growthlab {

struct HeisCoord {
    int64_t x = 0, y = 0, z = 0;

    friend bool operator==(const HeisCoord&, const HeisCoord&) = default;
};

inline HeisCoord heis_mul(const HeisCoord& g, const HeisCoord& h) {
    return HeisCoord{g.x + h.x, g.y + h.y, g.z + h.z + g.x * h.y};
}

inline HeisCoord heis_inv(const HeisCoord& g) { return HeisCoord{-g.x, -g.y, -g.z + g.x * g.y}; }

inline HeisCoord heis_commutator(const HeisCoord& g, const HeisCoord& h) {
    return heis_mul(heis_mul(heis_inv(g), heis_inv(h)), heis_mul(g, h));
}

inline std::string heis_render(const HeisCoord& g) {
    std::ostringstream os;
    os << "c^" << g.z << "*b^" << g.y << "*a^" << g.x;
    return os.str();
}

}  // namespace growthlab

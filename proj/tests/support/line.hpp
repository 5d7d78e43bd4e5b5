#pragma once

// Test-only family: Z acting on Z by translation. Exercises the combinators
// (product, induced) with the simplest possible factor.

#include <memory>

#include "growthlab/action.hpp"

namespace oracle {

class LineArith : public growthlab::GroupArith {
public:
    std::string signature() const override { return "zline"; }
    growthlab::Bytes identity() const override { return enc(0); }
    growthlab::Bytes mul(const growthlab::Bytes& g, const growthlab::Bytes& h) const override {
        return enc(dec(g) + dec(h));
    }
    growthlab::Bytes inverse(const growthlab::Bytes& g) const override { return enc(-dec(g)); }
    std::string render(const growthlab::Bytes& g) const override { return std::to_string(dec(g)); }

    static growthlab::Bytes enc(int64_t v) {
        growthlab::Bytes b;
        growthlab::put_varint(b, v);
        return b;
    }
    static int64_t dec(const growthlab::Bytes& b) {
        growthlab::ByteReader r(b);
        return r.varint();
    }
};

class LineSpace : public growthlab::PointSpace {
public:
    explicit LineSpace(std::vector<growthlab::Bytes> gens) {
        for (const auto& g : gens) gens_.push_back(LineArith::dec(g));
    }
    growthlab::Bytes apply_gen(int i, const growthlab::Bytes& x) const override {
        return LineArith::enc(LineArith::dec(x) + gens_[i]);
    }
    growthlab::Bytes apply_elem(const growthlab::Bytes& g, const growthlab::Bytes& x) const override {
        return LineArith::enc(LineArith::dec(x) + LineArith::dec(g));
    }
    std::string render_point(const growthlab::Bytes& x) const override {
        return std::to_string(LineArith::dec(x));
    }

private:
    std::vector<int64_t> gens_;
};

// Z acting on Z by +-step.
inline growthlab::MarkedAction line_action(int64_t step = 1) {
    using namespace growthlab;
    MarkedAction a;
    a.spec = "zline:step=" + std::to_string(step);
    a.group.arith = std::make_shared<LineArith>();
    a.group.gens = {LineArith::enc(step), LineArith::enc(-step)};
    a.group.gen_names = {"g", "g^-1"};
    a.group.inverse_index = {1, 0};
    a.space = std::make_shared<LineSpace>(a.group.gens);
    a.basepoints = {LineArith::enc(0)};
    return a;
}

}  // namespace oracle

#pragma once

// Artifact I/O: the bit-exact CSV table format (`n,size,basepoint_id`, LF,
// ASCII, no trailing comma), versioned JSON schemas, and atomic
// write-then-rename file output. JSON artifacts embed the RunConfig that
// produced them.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "growthlab/certificates.hpp"
#include "growthlab/common.hpp"
#include "growthlab/explorer.hpp"
#include "growthlab/fitting.hpp"

namespace growthlab {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Shortest round-trip decimal for doubles.
inline std::string double_to_string(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline std::string hex_encode(const Bytes& b) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (unsigned char c : b) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

inline Bytes hex_decode(const std::string& s) {
    if (s.size() % 2) throw SpecError("odd-length hex string", s);
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw SpecError("invalid hex digit", std::string(1, c));
    };
    Bytes out;
    for (size_t i = 0; i < s.size(); i += 2) out.push_back(static_cast<char>(val(s[i]) * 16 + val(s[i + 1])));
    return out;
}

// ---------------------------------------------------------------------------
// RunConfig: everything needed to reproduce a run; embedded in JSON outputs.

struct RunConfig {
    std::string command;
    std::string family;
    std::string mode = "pointed";
    std::string sampler = "default";
    std::string subset;
    std::string tuple;
    std::string pset;
    std::string window;
    std::string out;
    int radius = 0;
    int grid_n = 0;
    int64_t budget_mb = 2048;
    uint64_t seed = 0;

    Json to_json() const {
        Json j;
        j["command"] = command;
        if (!family.empty()) j["family"] = family;
        j["mode"] = mode;
        j["sampler"] = sampler;
        if (!subset.empty()) j["subset"] = subset;
        if (!tuple.empty()) j["tuple"] = tuple;
        if (!pset.empty()) j["pset"] = pset;
        if (!window.empty()) j["window"] = window;
        if (!out.empty()) j["out"] = out;
        j["radius"] = radius;
        if (grid_n) j["grid_n"] = grid_n;
        j["budget_mb"] = budget_mb;
        j["seed"] = seed;
        return j;
    }
};

// ---------------------------------------------------------------------------
// Atomic file output: write to a sibling temp file, then rename.

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw SpecError("cannot open output file", path.string());
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw SpecError("write failed", path.string());
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// CSV

inline std::string table_to_csv(const GrowthTable& t) {
    std::string out = "n,size,basepoint_id\n";
    for (size_t r = 0; r < t.sizes.size(); ++r) {
        int bp = r < t.attained_by.size() ? t.attained_by[r] : 0;
        out += std::to_string(r);
        out += ',';
        out += std::to_string(t.sizes[r]);
        out += ",bp";
        out += std::to_string(bp);
        out += '\n';
    }
    return out;
}

inline GrowthTable table_from_csv(const std::string& text) {
    GrowthTable t;
    t.mode = "imported";
    size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        if (header) {
            if (line != "n,size,basepoint_id") throw SpecError("bad CSV header", line);
            header = false;
            continue;
        }
        size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) throw SpecError("bad CSV row", line);
        int64_t n = std::stoll(line.substr(0, c1));
        int64_t size = std::stoll(line.substr(c1 + 1, c2 - c1 - 1));
        if (n != static_cast<int64_t>(t.sizes.size())) throw SpecError("CSV radii must be 0,1,2,...", line);
        t.sizes.push_back(size);
        t.attained_by.push_back(0);
    }
    if (t.sizes.empty()) throw SpecError("empty CSV table");
    return t;
}

// ---------------------------------------------------------------------------
// JSON schemas

inline Json table_to_json(const GrowthTable& t, const RunConfig* cfg = nullptr) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "growth_table";
    j["spec"] = t.spec;
    j["mode"] = t.mode;
    j["generators"] = t.generators;
    Json radii = Json::array(), sizes = Json::array();
    for (size_t r = 0; r < t.sizes.size(); ++r) {
        radii.push_back(r);
        sizes.push_back(t.sizes[r]);
    }
    j["radii"] = radii;
    j["sizes"] = sizes;
    j["basepoints"] = t.basepoints;
    if (t.mode == "max") {
        j["attained_by"] = t.attained_by;
        j["note"] = "max over sampled basepoints; a lower bound for sup over the whole space";
    }
    if (!t.subset.empty()) j["subset"] = t.subset;
    j["budget_hit"] = t.budget_hit;
    if (cfg) j["config"] = cfg->to_json();
    return j;
}

inline Json fit_to_json(const ExponentFit& f, const RunConfig* cfg = nullptr) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "exponent_fit";
    j["estimate"] = f.estimate;
    j["window"] = {f.n1, f.n2};
    j["residual"] = f.residual;
    j["classification"] = growth_class_name(f.cls);
    if (f.cls == GrowthClass::Exponential) j["rate"] = f.rate;
    if (cfg) j["config"] = cfg->to_json();
    return j;
}

inline Json certificate_to_json(const Certificate& c, const RunConfig* cfg = nullptr) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "certificate";
    j["type"] = certificate_type_name(c.type);
    j["family"] = c.family_spec;
    j["words"] = c.words;
    if (c.grid_n) j["grid_n"] = c.grid_n;
    if (c.search_radius >= 0) j["search_radius"] = c.search_radius;
    switch (c.type) {
        case Certificate::Type::GridCollision:
            j["lhs"] = c.lhs;
            j["rhs"] = c.rhs;
            j["element"] = c.element_render;
            break;
        case Certificate::Type::NonfoldWitness:
            j["witness"] = c.point_render;
            j["witness_bytes"] = hex_encode(c.point);
            j["found_at_radius"] = c.found_at_radius;
            j["image_count"] = c.image_count;
            break;
        case Certificate::Type::NonfoldNone:
            j["group_level_collision"] = c.group_level_collision;
            if (c.group_level_collision) {
                j["lhs"] = c.lhs;
                j["rhs"] = c.rhs;
                j["element"] = c.element_render;
            }
            j["conclusive"] = false;
            break;
        case Certificate::Type::ConfineRefutation:
            j["point"] = c.point_render;
            j["point_bytes"] = hex_encode(c.point);
            j["found_at_radius"] = c.found_at_radius;
            break;
        default:
            break;
    }
    if (cfg) j["config"] = cfg->to_json();
    return j;
}

inline Certificate certificate_from_json(const Json& j) {
    Certificate c;
    std::string type = j.at("type");
    if (type == "grid-collision") c.type = Certificate::Type::GridCollision;
    else if (type == "grid-injective") c.type = Certificate::Type::GridInjective;
    else if (type == "nonfold-witness") c.type = Certificate::Type::NonfoldWitness;
    else if (type == "nonfold-none-found") c.type = Certificate::Type::NonfoldNone;
    else if (type == "confine-refutation") c.type = Certificate::Type::ConfineRefutation;
    else if (type == "confine-holds-to-radius") c.type = Certificate::Type::ConfineHolds;
    else throw SpecError("unknown certificate type", type);
    c.family_spec = j.at("family");
    c.words = j.at("words").get<std::vector<std::string>>();
    c.grid_n = j.value("grid_n", 0);
    c.search_radius = j.value("search_radius", -1);
    if (j.contains("lhs")) c.lhs = j["lhs"].get<std::vector<int64_t>>();
    if (j.contains("rhs")) c.rhs = j["rhs"].get<std::vector<int64_t>>();
    if (j.contains("element")) c.element_render = j["element"];
    if (j.contains("witness_bytes")) c.point = hex_decode(j["witness_bytes"]);
    if (j.contains("point_bytes")) c.point = hex_decode(j["point_bytes"]);
    if (j.contains("witness")) c.point_render = j["witness"];
    if (j.contains("point")) c.point_render = j["point"];
    if (j.contains("found_at_radius")) c.found_at_radius = j["found_at_radius"];
    if (j.contains("image_count")) c.image_count = j["image_count"];
    if (j.contains("group_level_collision")) c.group_level_collision = j["group_level_collision"];
    return c;
}

}  // namespace growthlab

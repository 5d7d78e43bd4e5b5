// growthlab — exact growth measurements and finite-radius certificate
// searches on the builtin marked-group actions.
//
// Exit codes: 0 success, 1 preset checks failed or internal error,
// 2 bad input (unknown family/flag/word, violated precondition),
// 3 memory budget exhausted (partial table written and flagged).

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "growthlab/families.hpp"
#include "growthlab/explorer.hpp"
#include "growthlab/fitting.hpp"
#include "growthlab/certificates.hpp"
#include "growthlab/io.hpp"
#include "growthlab/presets.hpp"
#include "growthlab/ring_text.hpp"

namespace gl = growthlab;

namespace {

std::string default_json_path(const std::string& out) {
    std::filesystem::path p(out);
    p.replace_extension(".json");
    return p.string();
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& w : out) {
        size_t a = w.find_first_not_of(" \t");
        size_t b = w.find_last_not_of(" \t");
        w = (a == std::string::npos) ? "" : w.substr(a, b - a + 1);
    }
    std::erase_if(out, [](const std::string& w) { return w.empty(); });
    return out;
}

gl::ExploreOptions budget_options(int64_t budget_mb) {
    gl::ExploreOptions opt;
    opt.budget_bytes = budget_mb * 1024 * 1024;
    return opt;
}

// Random canonical ring element for parse-ring round-trips.
gl::BaumslagElem random_ring_element(gl::Rng& rng, uint32_t p, int d) {
    gl::BaumslagElem e(p, d);
    int terms = static_cast<int>(rng.range(1, 5));
    for (int t = 0; t < terms; ++t) {
        gl::BMonomial m;
        for (int i = 0; i < d; ++i) {
            if (rng.chance(0.6)) m.push_back(gl::BFactor::laurent(rng.range(-6, 6)));
            else m.push_back(gl::BFactor::pole(rng.range(1, 4)));
        }
        e.add_term(std::move(m), static_cast<uint32_t>(rng.range(1, p - 1)));
    }
    return e;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"growthlab: growth of group actions on explicit Schreier graphs"};
    app.require_subcommand(1);

    // growth -----------------------------------------------------------------
    auto* growth = app.add_subcommand("growth", "measure ball sizes of an action");
    gl::RunConfig gcfg;
    gcfg.command = "growth";
    int basepoint_index = 0;
    growth->add_option("--family", gcfg.family, "family spec string")->required();
    growth->add_option("--mode", gcfg.mode, "pointed | max | relative")->default_val("pointed");
    growth->add_option("--radius", gcfg.radius, "ball radius R")->required();
    growth->add_option("--subset", gcfg.subset, "subset name for relative mode");
    growth->add_option("--basepoint", basepoint_index, "index into the designated basepoints");
    growth->add_option("--sampler", gcfg.sampler, "default | designated (max mode)")->default_val("default");
    growth->add_option("--budget-mb", gcfg.budget_mb, "memory budget in MiB")
        ->envname("GROWTHLAB_BUDGET_MB")
        ->default_val(2048);
    growth->add_option("--out", gcfg.out, "output CSV path")->required();
    std::string growth_json;
    growth->add_option("--json", growth_json, "output JSON path (default: <out>.json)");
    growth->set_config("--config", "", "flat key=value config file");

    // fit ---------------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "fit a growth exponent to a CSV table");
    std::string fit_in, fit_window, fit_out;
    fit->add_option("--in", fit_in, "input CSV table")->required();
    fit->add_option("--window", fit_window, "fit window n1,n2");
    fit->add_option("--out", fit_out, "output JSON path");
    fit->set_config("--config", "", "flat key=value config file");

    // gridinj ------------------------------------------------------------------
    auto* gridinj = app.add_subcommand("gridinj", "grid injectivity of a tuple map into the group");
    gl::RunConfig icfg;
    icfg.command = "gridinj";
    int64_t grid_cap = 10'000'000;
    gridinj->add_option("--family", icfg.family)->required();
    gridinj->add_option("--tuple", icfg.tuple, "comma-separated words, e.g. a,t,a")->required();
    gridinj->add_option("--n", icfg.grid_n, "grid radius")->required();
    gridinj->add_option("--cap", grid_cap, "product-count cap");
    gridinj->add_option("--out", icfg.out, "output JSON path")->required();
    gridinj->set_config("--config", "", "flat key=value config file");

    // nonfold -------------------------------------------------------------------
    auto* nonfold = app.add_subcommand("nonfold", "search for a non-folding witness point");
    gl::RunConfig ncfg;
    ncfg.command = "nonfold";
    nonfold->add_option("--family", ncfg.family)->required();
    nonfold->add_option("--tuple", ncfg.tuple, "comma-separated words")->required();
    nonfold->add_option("--n", ncfg.grid_n, "grid radius")->required();
    nonfold->add_option("--radius", ncfg.radius, "search radius")->required();
    nonfold->add_option("--budget-mb", ncfg.budget_mb)->envname("GROWTHLAB_BUDGET_MB")->default_val(2048);
    nonfold->add_option("--out", ncfg.out, "output JSON path")->required();
    nonfold->set_config("--config", "", "flat key=value config file");

    // confine --------------------------------------------------------------------
    auto* confine = app.add_subcommand("confine", "check a confining set up to a radius");
    gl::RunConfig ccfg;
    ccfg.command = "confine";
    confine->add_option("--family", ccfg.family)->required();
    confine->add_option("--pset", ccfg.pset, "comma-separated words, e.g. u, t u t^-1")->required();
    confine->add_option("--radius", ccfg.radius, "search radius")->required();
    confine->add_option("--budget-mb", ccfg.budget_mb)->envname("GROWTHLAB_BUDGET_MB")->default_val(2048);
    confine->add_option("--out", ccfg.out, "output JSON path")->required();
    confine->set_config("--config", "", "flat key=value config file");

    // preset ------------------------------------------------------------------
    auto* preset = app.add_subcommand("preset", "run a named experiment bundle");
    std::string preset_name, preset_out;
    bool preset_list = false;
    preset->add_option("--name", preset_name, "preset name (see --list)");
    preset->add_flag("--list", preset_list, "list preset names");
    preset->add_option("--out", preset_out, "output JSON report path");

    // parse-ring -----------------------------------------------------------------
    auto* parse_ring = app.add_subcommand("parse-ring", "normalize a ring expression / round-trip check");
    std::string pr_expr;
    uint32_t pr_p = 2;
    int pr_d = 1;
    int64_t pr_roundtrip = 0;
    uint64_t pr_seed = 0;
    parse_ring->add_option("--expr", pr_expr, "ring expression, e.g. 2*T1^-3*(1+T1)^-2 + 1");
    parse_ring->add_option("--p", pr_p, "prime modulus")->default_val(2);
    parse_ring->add_option("--d", pr_d, "variable count")->default_val(1);
    parse_ring->add_option("--roundtrip", pr_roundtrip, "render/parse round-trip N random elements");
    parse_ring->add_option("--seed", pr_seed, "seed for --roundtrip");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (growth->parsed()) {
            gl::MarkedAction a = gl::make_family(gcfg.family);
            gl::ExploreOptions opt = budget_options(gcfg.budget_mb);
            gl::GrowthTable t;
            if (gcfg.mode == "pointed") {
                if (basepoint_index < 0 || basepoint_index >= static_cast<int>(a.basepoints.size()))
                    throw gl::SpecError("basepoint index out of range", std::to_string(basepoint_index));
                t = gl::ball_sizes(a, a.basepoints[basepoint_index], gcfg.radius, opt);
            } else if (gcfg.mode == "max") {
                gl::BasepointSampler s;
                if (gcfg.sampler == "designated") s = gl::BasepointSampler::designated();
                else if (gcfg.sampler != "default") throw gl::SpecError("unknown sampler", gcfg.sampler);
                t = gl::max_growth(a, gcfg.radius, s, opt);
            } else if (gcfg.mode == "relative") {
                if (gcfg.subset.empty()) throw gl::SpecError("relative mode needs --subset");
                t = gl::relative_growth(a, gcfg.subset, gcfg.radius, opt);
            } else {
                throw gl::SpecError("unknown mode", gcfg.mode);
            }
            gl::write_atomic(gcfg.out, gl::table_to_csv(t));
            std::string jpath = growth_json.empty() ? default_json_path(gcfg.out) : growth_json;
            gl::write_atomic(jpath, gl::table_to_json(t, &gcfg).dump(2) + "\n");
            std::cout << "wrote " << gcfg.out << " (" << t.sizes.size() << " radii"
                      << (t.budget_hit ? ", budget hit — partial prefix" : "") << ")\n";
            return t.budget_hit ? 3 : 0;
        }

        if (fit->parsed()) {
            std::ifstream is(fit_in, std::ios::binary);
            if (!is) throw gl::SpecError("cannot read input table", fit_in);
            std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
            gl::GrowthTable t = gl::table_from_csv(text);
            std::optional<std::pair<int, int>> window;
            if (!fit_window.empty()) {
                auto parts = split_commas(fit_window);
                if (parts.size() != 2) throw gl::SpecError("window must be n1,n2", fit_window);
                window = std::make_pair(std::stoi(parts[0]), std::stoi(parts[1]));
            }
            gl::ExponentFit f = gl::fit_exponent(t, window);
            std::cout << "estimate " << gl::double_to_string(f.estimate) << " window [" << f.n1 << ","
                      << f.n2 << "] residual " << gl::double_to_string(f.residual) << " classification "
                      << gl::growth_class_name(f.cls) << "\n";
            if (!fit_out.empty()) gl::write_atomic(fit_out, gl::fit_to_json(f).dump(2) + "\n");
            return 0;
        }

        if (gridinj->parsed()) {
            gl::MarkedAction a = gl::make_family(icfg.family);
            gl::Certificate c = gl::grid_injectivity(a, split_commas(icfg.tuple), icfg.grid_n, grid_cap);
            gl::write_atomic(icfg.out, gl::certificate_to_json(c, &icfg).dump(2) + "\n");
            std::cout << gl::certificate_type_name(c.type) << " written to " << icfg.out << "\n";
            return 0;
        }

        if (nonfold->parsed()) {
            gl::MarkedAction a = gl::make_family(ncfg.family);
            gl::Certificate c = gl::nonfold_witness(a, split_commas(ncfg.tuple), ncfg.grid_n, ncfg.radius,
                                                    budget_options(ncfg.budget_mb));
            gl::write_atomic(ncfg.out, gl::certificate_to_json(c, &ncfg).dump(2) + "\n");
            std::cout << gl::certificate_type_name(c.type) << " written to " << ncfg.out << "\n";
            return 0;
        }

        if (confine->parsed()) {
            gl::MarkedAction a = gl::make_family(ccfg.family);
            gl::Certificate c = gl::confining_check(a, split_commas(ccfg.pset), ccfg.radius,
                                                    budget_options(ccfg.budget_mb));
            gl::write_atomic(ccfg.out, gl::certificate_to_json(c, &ccfg).dump(2) + "\n");
            std::cout << gl::certificate_type_name(c.type) << " written to " << ccfg.out << "\n";
            return 0;
        }

        if (preset->parsed()) {
            if (preset_list) {
                for (const auto& n : gl::preset_names()) std::cout << n << "\n";
                return 0;
            }
            if (preset_name.empty()) throw gl::SpecError("preset needs --name or --list");
            std::vector<gl::PresetReport> reports = gl::run_preset(preset_name);
            bool all = true;
            gl::Json jrep = gl::Json::array();
            for (const auto& r : reports) {
                std::cout << r.human();
                all = all && r.pass();
                gl::Json jr;
                jr["preset"] = r.name;
                jr["pass"] = r.pass();
                jr["elapsed_s"] = r.elapsed_s;
                gl::Json checks = gl::Json::array();
                for (const auto& c : r.checks)
                    checks.push_back({{"name", c.name},
                                      {"pass", c.pass},
                                      {"measured", c.measured},
                                      {"expected", c.expected}});
                jr["checks"] = checks;
                jrep.push_back(jr);
            }
            if (!preset_out.empty()) {
                gl::Json top;
                top["schema_version"] = gl::kSchemaVersion;
                top["kind"] = "preset_report";
                top["name"] = preset_name;
                top["pass"] = all;
                top["reports"] = jrep;
                gl::write_atomic(preset_out, top.dump(2) + "\n");
            }
            std::cout << (all ? "PRESET PASS" : "PRESET FAIL") << "\n";
            return all ? 0 : 1;
        }

        if (parse_ring->parsed()) {
            if (pr_roundtrip > 0) {
                gl::Rng rng(pr_seed);
                for (int64_t i = 0; i < pr_roundtrip; ++i) {
                    gl::BaumslagElem e = random_ring_element(rng, pr_p, pr_d);
                    gl::BaumslagElem back = gl::parse_baumslag(e.render(), pr_p, pr_d);
                    if (!(back == e)) {
                        std::cerr << "round-trip mismatch: " << e.render() << " -> " << back.render()
                                  << "\n";
                        return 1;
                    }
                }
                std::cout << pr_roundtrip << " round-trips ok (p=" << pr_p << ", d=" << pr_d << ")\n";
                return 0;
            }
            if (pr_expr.empty()) throw gl::SpecError("parse-ring needs --expr or --roundtrip");
            gl::BaumslagElem e = gl::parse_baumslag(pr_expr, pr_p, pr_d);
            std::cout << e.render() << "\n";
            std::cout << "a0 = " << gl::coeff_a0(e) << "\n";
            return 0;
        }
    } catch (const gl::BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const gl::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

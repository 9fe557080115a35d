#include "reset_lab/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "reset_lab/errors.hpp"
#include "reset_lab/solution_io.hpp"

namespace reset_lab::cli {

using nlohmann::json;

namespace {

using Kind = poincare::Parameterization::Kind;

std::string join(std::string_view prefix, std::string_view key) {
    return prefix.empty() ? std::string(key) : std::string(prefix) + "." + std::string(key);
}

void only_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        throw ScenarioError(std::string(where.empty() ? "scenario" : where) + ": expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ScenarioError(join(where, key) + ": unknown field");
        }
    }
}

const json& require(const json& obj, std::string_view where, const char* key) {
    if (!obj.contains(key)) {
        throw ScenarioError(join(where, key) + ": missing");
    }
    return obj.at(key);
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ScenarioError(path + ": expected a number");
    }
    return v.get<double>();
}

int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        throw ScenarioError(path + ": expected an integer");
    }
    return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) {
        throw ScenarioError(path + ": expected a string");
    }
    return v.get<std::string>();
}

Mat matrix(const json& v, const std::string& path) {
    try {
        return io::matrix_from_json(v, path);
    } catch (const ArgumentError& e) {
        throw ScenarioError(e.what());
    }
}

// Flat arrays are read as rows here (C, output rows), not columns.
Mat row(const json& v, const std::string& path) {
    Mat m = matrix(v, path);
    if (v.is_array() && !v.empty() && !v.front().is_array()) {
        m.transposeInPlace();
    }
    return m;
}

template <typename F>
auto checked(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

BlockSpec parse_blocks(const json& j) {
    only_keys(j, "blocks", {"plant", "controller", "exosystem"});
    BlockSpec b;
    const auto& p = require(j, "blocks", "plant");
    only_keys(p, "blocks.plant", {"a", "b", "c"});
    b.plant_a = matrix(require(p, "blocks.plant", "a"), "blocks.plant.a");
    b.plant_b = matrix(require(p, "blocks.plant", "b"), "blocks.plant.b");
    b.plant_c = row(require(p, "blocks.plant", "c"), "blocks.plant.c");
    const auto& c = require(j, "blocks", "controller");
    only_keys(c, "blocks.controller", {"a", "b", "c", "d", "n_reset"});
    b.ctrl_a = matrix(require(c, "blocks.controller", "a"), "blocks.controller.a");
    b.ctrl_b = matrix(require(c, "blocks.controller", "b"), "blocks.controller.b");
    b.ctrl_c = row(require(c, "blocks.controller", "c"), "blocks.controller.c");
    b.ctrl_d = c.contains("d") ? number(c.at("d"), "blocks.controller.d") : 0.0;
    b.n_reset = integer(require(c, "blocks.controller", "n_reset"), "blocks.controller.n_reset");
    if (j.contains("exosystem")) {
        const auto& w = j.at("exosystem");
        only_keys(w, "blocks.exosystem", {"a", "c1", "c2"});
        b.exo_a = matrix(require(w, "blocks.exosystem", "a"), "blocks.exosystem.a");
        b.exo_c1 = row(require(w, "blocks.exosystem", "c1"), "blocks.exosystem.c1");
        b.exo_c2 = row(require(w, "blocks.exosystem", "c2"), "blocks.exosystem.c2");
    }
    return b;
}

MatrixSpec parse_matrices(const json& j) {
    only_keys(j, "matrices", {"a", "a_r", "c", "m", "output_row"});
    MatrixSpec m;
    m.a = matrix(require(j, "matrices", "a"), "matrices.a");
    m.a_r = matrix(require(j, "matrices", "a_r"), "matrices.a_r");
    m.c = row(require(j, "matrices", "c"), "matrices.c");
    if (j.contains("m")) {
        m.m = matrix(j.at("m"), "matrices.m");
    }
    if (j.contains("output_row")) {
        m.output_row = row(j.at("output_row"), "matrices.output_row");
    }
    return m;
}

model::LtiPlant plant_of(const BlockSpec& b) { return {b.plant_a, b.plant_b, b.plant_c}; }

model::ResetController ctrl_of(const BlockSpec& b) {
    return {b.ctrl_a, b.ctrl_b, b.ctrl_c, b.ctrl_d, b.n_reset};
}

std::optional<model::Exosystem> exo_of(const BlockSpec& b) {
    if (!b.exo_a) {
        return std::nullopt;
    }
    return model::Exosystem(*b.exo_a, *b.exo_c1, *b.exo_c2);
}

RowVec as_row(const Mat& m, const std::string& path) {
    if (m.rows() != 1) {
        throw ScenarioError(path + ": expected a single row, got " + std::to_string(m.rows()) + " rows");
    }
    return m.row(0);
}

const char* kind_name(Kind k) { return k == Kind::Circle ? "circle" : "segment"; }

}  // namespace

model::ClosedLoopSystem closed_loop(const Scenario& s) {
    if (const auto* b = std::get_if<BlockSpec>(&s.system)) {
        return checked("blocks", [&] { return model::build_closed_loop(exo_of(*b), plant_of(*b), ctrl_of(*b)); });
    }
    const auto& m = std::get<MatrixSpec>(s.system);
    std::optional<RowVec> out;
    if (m.output_row) {
        out = as_row(*m.output_row, "matrices.output_row");
    }
    return checked("matrices", [&] {
        return model::ClosedLoopSystem::from_matrices(m.a, m.a_r, as_row(m.c, "matrices.c"), out);
    });
}

bool has_sector_form(const Scenario& s) {
    if (const auto* m = std::get_if<MatrixSpec>(&s.system)) {
        return m->m.has_value();
    }
    return true;
}

model::SectorClosedLoop sector_loop(const Scenario& s) {
    if (const auto* b = std::get_if<BlockSpec>(&s.system)) {
        return checked("blocks",
                       [&] { return model::build_sector_closed_loop(exo_of(*b), plant_of(*b), ctrl_of(*b)); });
    }
    const auto& m = std::get<MatrixSpec>(s.system);
    if (!m.m) {
        throw ScenarioError("matrices.m: the sector law needs the quadratic form M");
    }
    return checked("matrices.m", [&] { return model::SectorClosedLoop(m.a, m.a_r, *m.m); });
}

std::optional<poincare::Parameterization> parameterization(const Scenario& s) {
    const auto sys = closed_loop(s);
    if (s.analysis.parameterization) {
        const auto& p = *s.analysis.parameterization;
        if (p.kind == Kind::Circle) {
            return sys.reduced_dim() == 2 ? std::optional(poincare::Parameterization::circle()) : std::nullopt;
        }
        return poincare::Parameterization::segment(p.a, p.b, sys.reduced_dim());
    }
    if (sys.reduced_dim() == 2) {
        return poincare::Parameterization::circle();
    }
    return std::nullopt;
}

Scenario parse_scenario(const json& j) {
    only_keys(j, "", {"version", "name", "description", "blocks", "matrices", "law", "policy", "initial", "horizon",
                      "selection", "analysis"});
    Scenario s;
    s.version = integer(require(j, "", "version"), "version");
    if (s.version != kScenarioVersion) {
        throw ScenarioError("version: unsupported scenario version " + std::to_string(s.version));
    }
    s.name = text(require(j, "", "name"), "name");
    if (j.contains("description")) {
        s.description = text(j.at("description"), "description");
    }

    const bool blocks = j.contains("blocks");
    const bool matrices = j.contains("matrices");
    if (blocks == matrices) {
        throw ScenarioError(blocks ? "blocks/matrices: give one system description, not both"
                                   : "blocks/matrices: missing system description");
    }
    if (blocks) {
        s.system = parse_blocks(j.at("blocks"));
    } else {
        s.system = parse_matrices(j.at("matrices"));
    }

    const std::string law = j.contains("law") ? text(j.at("law"), "law") : "zero_crossing";
    if (law == "zero_crossing") {
        s.law = Law::ZeroCrossing;
    } else if (law == "sector") {
        s.law = Law::Sector;
    } else {
        throw ScenarioError("law: expected zero_crossing or sector, got " + law);
    }

    const auto& pol = require(j, "", "policy");
    only_keys(pol, "policy", {"tau_m", "tau_max"});
    s.tau_m = number(require(pol, "policy", "tau_m"), "policy.tau_m");
    if (pol.contains("tau_max")) {
        s.tau_max = number(pol.at("tau_max"), "policy.tau_max");
    }
    checked("policy", [&] { return sim::TimerPolicy(s.tau_m, s.tau_max); });

    const auto& init = require(j, "", "initial");
    only_keys(init, "initial", {"x0", "q0", "tau0"});
    const Mat x0 = matrix(require(init, "initial", "x0"), "initial.x0");
    if (x0.cols() != 1) {
        throw ScenarioError("initial.x0: expected a flat array");
    }
    s.x0 = x0.col(0);
    s.q0 = init.contains("q0") ? integer(init.at("q0"), "initial.q0") : 1;
    if (s.q0 != 1 && s.q0 != -1) {
        throw ScenarioError("initial.q0: must be 1 or -1");
    }
    s.tau0 = init.contains("tau0") ? number(init.at("tau0"), "initial.tau0") : 0.0;
    if (!(s.tau0 >= 0.0)) {
        throw ScenarioError("initial.tau0: must be nonnegative");
    }

    s.horizon = number(require(j, "", "horizon"), "horizon");
    if (!(s.horizon > 0.0)) {
        throw ScenarioError("horizon: must be positive");
    }
    const std::string sel = j.contains("selection") ? text(j.at("selection"), "selection") : "eager";
    if (sel == "eager") {
        s.selection = sim::Selection::Eager;
    } else if (sel == "lazy") {
        s.selection = sim::Selection::Lazy;
    } else {
        throw ScenarioError("selection: expected eager or lazy, got " + sel);
    }

    if (j.contains("analysis")) {
        const auto& a = j.at("analysis");
        only_keys(a, "analysis", {"parameterization", "tau_cap", "k_max", "grid", "method", "lmi", "basin_samples",
                                  "basin_iterations", "compare_horizon"});
        auto& an = s.analysis;
        if (a.contains("parameterization")) {
            const auto& p = a.at("parameterization");
            only_keys(p, "analysis.parameterization", {"kind", "a", "b"});
            ParamSpec ps;
            const std::string kind = text(require(p, "analysis.parameterization", "kind"),
                                          "analysis.parameterization.kind");
            if (kind == "circle") {
                ps.kind = Kind::Circle;
            } else if (kind == "segment") {
                ps.kind = Kind::Segment;
                ps.a = number(require(p, "analysis.parameterization", "a"), "analysis.parameterization.a");
                ps.b = number(require(p, "analysis.parameterization", "b"), "analysis.parameterization.b");
                if (!(ps.a < ps.b)) {
                    throw ScenarioError("analysis.parameterization: need a < b");
                }
            } else {
                throw ScenarioError("analysis.parameterization.kind: expected circle or segment, got " + kind);
            }
            an.parameterization = ps;
        }
        if (a.contains("tau_cap")) {
            an.tau_cap = number(a.at("tau_cap"), "analysis.tau_cap");
            if (!(*an.tau_cap > s.tau_m)) {
                throw ScenarioError("analysis.tau_cap: must exceed policy.tau_m");
            }
        }
        if (a.contains("k_max")) {
            an.k_max = integer(a.at("k_max"), "analysis.k_max");
        }
        if (a.contains("grid")) {
            an.grid = integer(a.at("grid"), "analysis.grid");
        }
        if (a.contains("method")) {
            an.method = text(a.at("method"), "analysis.method");
        }
        if (a.contains("lmi")) {
            const auto& l = a.at("lmi");
            only_keys(l, "analysis.lmi", {"tau_lo", "tau_hi", "grid", "eps"});
            if (l.contains("tau_lo")) {
                an.lmi.tau_lo = number(l.at("tau_lo"), "analysis.lmi.tau_lo");
            }
            if (l.contains("tau_hi")) {
                an.lmi.tau_hi = number(l.at("tau_hi"), "analysis.lmi.tau_hi");
            }
            if (l.contains("grid")) {
                an.lmi.grid = integer(l.at("grid"), "analysis.lmi.grid");
            }
            if (l.contains("eps")) {
                an.lmi.eps = number(l.at("eps"), "analysis.lmi.eps");
            }
        }
        if (a.contains("basin_samples")) {
            an.basin_samples = integer(a.at("basin_samples"), "analysis.basin_samples");
        }
        if (a.contains("basin_iterations")) {
            an.basin_iterations = integer(a.at("basin_iterations"), "analysis.basin_iterations");
        }
        if (a.contains("compare_horizon")) {
            an.compare_horizon = number(a.at("compare_horizon"), "analysis.compare_horizon");
        }
        if (an.k_max < 1) {
            throw ScenarioError("analysis.k_max: must be at least 1");
        }
        if (an.grid < 100) {
            throw ScenarioError("analysis.grid: must be at least 100");
        }
        if (an.method != "eigen" && an.method != "lmi" && an.method != "ranged") {
            throw ScenarioError("analysis.method: expected eigen, lmi or ranged, got " + an.method);
        }
        if (an.lmi.grid < 1 || !(an.lmi.eps > 0.0)) {
            throw ScenarioError("analysis.lmi: grid must be >= 1 and eps > 0");
        }
        if (an.lmi.tau_lo && an.lmi.tau_hi && !(*an.lmi.tau_lo >= 0.0 && *an.lmi.tau_hi >= *an.lmi.tau_lo)) {
            throw ScenarioError("analysis.lmi: need 0 <= tau_lo <= tau_hi");
        }
        if (an.basin_samples < 1 || an.basin_iterations < 0) {
            throw ScenarioError("analysis.basin_samples/basin_iterations: out of range");
        }
    }

    // Build everything once so dimension errors surface before any command runs.
    const auto sys = closed_loop(s);
    if (s.x0.size() != sys.dim()) {
        throw ScenarioError("initial.x0: length " + std::to_string(s.x0.size()) + " does not match the state dimension " +
                            std::to_string(sys.dim()));
    }
    if (s.law == Law::Sector || has_sector_form(s)) {
        (void)sector_loop(s);
    }
    if (s.analysis.parameterization && s.analysis.parameterization->kind == Kind::Circle && sys.reduced_dim() != 2) {
        throw ScenarioError("analysis.parameterization: the circle needs a 2-D reduced state, this one is " +
                            std::to_string(sys.reduced_dim()) + "-D");
    }
    if (s.analysis.parameterization && s.analysis.parameterization->kind == Kind::Segment && sys.reduced_dim() < 2) {
        throw ScenarioError("analysis.parameterization: the segment needs a reduced state of dimension >= 2");
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(path.string() + ": cannot open");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ScenarioError(path.string() + ": not valid JSON (" + e.what() + ")");
    }
    return parse_scenario(j);
}

json to_json(const Scenario& s) {
    json j;
    j["version"] = s.version;
    j["name"] = s.name;
    if (!s.description.empty()) {
        j["description"] = s.description;
    }
    if (const auto* b = std::get_if<BlockSpec>(&s.system)) {
        json blocks;
        blocks["plant"] = {{"a", io::matrix_to_json(b->plant_a)},
                           {"b", io::matrix_to_json(b->plant_b)},
                           {"c", io::matrix_to_json(b->plant_c)}};
        blocks["controller"] = {{"a", io::matrix_to_json(b->ctrl_a)},
                                {"b", io::matrix_to_json(b->ctrl_b)},
                                {"c", io::matrix_to_json(b->ctrl_c)},
                                {"d", b->ctrl_d},
                                {"n_reset", b->n_reset}};
        if (b->exo_a) {
            blocks["exosystem"] = {{"a", io::matrix_to_json(*b->exo_a)},
                                   {"c1", io::matrix_to_json(*b->exo_c1)},
                                   {"c2", io::matrix_to_json(*b->exo_c2)}};
        }
        j["blocks"] = blocks;
    } else {
        const auto& m = std::get<MatrixSpec>(s.system);
        json mats = {{"a", io::matrix_to_json(m.a)}, {"a_r", io::matrix_to_json(m.a_r)}, {"c", io::matrix_to_json(m.c)}};
        if (m.m) {
            mats["m"] = io::matrix_to_json(*m.m);
        }
        if (m.output_row) {
            mats["output_row"] = io::matrix_to_json(*m.output_row);
        }
        j["matrices"] = mats;
    }
    j["law"] = s.law == Law::ZeroCrossing ? "zero_crossing" : "sector";
    j["policy"] = {{"tau_m", s.tau_m}};
    if (s.tau_max) {
        j["policy"]["tau_max"] = *s.tau_max;
    }
    j["initial"] = {{"x0", std::vector<double>(s.x0.data(), s.x0.data() + s.x0.size())},
                    {"q0", s.q0},
                    {"tau0", s.tau0}};
    j["horizon"] = s.horizon;
    j["selection"] = s.selection == sim::Selection::Eager ? "eager" : "lazy";

    const auto& an = s.analysis;
    json a = {{"k_max", an.k_max},
              {"grid", an.grid},
              {"method", an.method},
              {"basin_samples", an.basin_samples},
              {"basin_iterations", an.basin_iterations},
              {"compare_horizon", an.compare_horizon}};
    if (an.parameterization) {
        a["parameterization"] = {{"kind", kind_name(an.parameterization->kind)}};
        if (an.parameterization->kind == Kind::Segment) {
            a["parameterization"]["a"] = an.parameterization->a;
            a["parameterization"]["b"] = an.parameterization->b;
        }
    }
    if (an.tau_cap) {
        a["tau_cap"] = *an.tau_cap;
    }
    a["lmi"] = {{"grid", an.lmi.grid}, {"eps", an.lmi.eps}};
    if (an.lmi.tau_lo) {
        a["lmi"]["tau_lo"] = *an.lmi.tau_lo;
    }
    if (an.lmi.tau_hi) {
        a["lmi"]["tau_hi"] = *an.lmi.tau_hi;
    }
    j["analysis"] = a;
    return j;
}

}  // namespace reset_lab::cli

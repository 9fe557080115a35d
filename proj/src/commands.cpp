#include "reset_lab/commands.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>

#include "reset_lab/solution_io.hpp"

namespace reset_lab::cli {

using nlohmann::json;

namespace {

std::ofstream open_out(const CommandOptions& opt, const std::string& file) {
    std::filesystem::create_directories(opt.out_dir);
    const auto path = opt.out_dir / file;
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

void write_json(const CommandOptions& opt, const std::string& file, const json& j) {
    auto out = open_out(opt, file);
    out << j.dump(2) << '\n';
}

sim::HybridSolution run_law(const Scenario& s, Law law, double horizon) {
    const sim::TimerPolicy policy(s.tau_m, s.tau_max);
    sim::SimOptions so;
    so.selection = s.selection;
    if (law == Law::Sector) {
        return sim::simulate_sector(sector_loop(s), s.x0, s.tau0, policy, horizon, so);
    }
    return sim::simulate(closed_loop(s), sim::HybridState{s.x0, s.q0, s.tau0}, policy, horizon, so);
}

json run_summary(const Scenario& s, Law law, const sim::HybridSolution& sol) {
    const auto iv = sim::reset_intervals(sol);
    std::vector<double> times;
    for (const auto& jr : sol.jumps) {
        times.push_back(jr.t);
    }
    json j = {{"scenario", s.name},
              {"law", law == Law::Sector ? "sector" : "zero_crossing"},
              {"jump_count", sol.jumps.size()},
              {"jump_times", times},
              {"reset_intervals", iv}};
    const auto& fin = sol.final_sample();
    j["final"] = {{"t", fin.t}, {"q", fin.q}, {"tau", fin.tau},
                  {"x", std::vector<double>(fin.x.data(), fin.x.data() + fin.x.size())}};
    if (!iv.empty()) {
        const std::size_t n = std::min<std::size_t>(5, iv.size());
        const double mean = std::accumulate(iv.end() - static_cast<std::ptrdiff_t>(n), iv.end(), 0.0) / n;
        j["interval_tail"] = {{"last", iv.back()},
                              {"mean_last", mean},
                              {"count", n},
                              {"min", *std::min_element(iv.begin(), iv.end())},
                              {"max", *std::max_element(iv.begin(), iv.end())}};
    } else {
        j["interval_tail"] = nullptr;
    }
    return j;
}

poincare::Parameterization require_param(const Scenario& s, const char* what) {
    if (s.law != Law::ZeroCrossing) {
        throw InapplicableError(std::string(what) + ": the Poincare reduction covers the zero-crossing law only");
    }
    const auto p = parameterization(s);
    if (!p) {
        throw InapplicableError(std::string(what) + ": no 1-D parameterization; the reduced state is " +
                                std::to_string(closed_loop(s).reduced_dim()) +
                                "-D and the scenario declares no invariant segment");
    }
    return *p;
}

poincare::PoincareMap poincare_map(const Scenario& s) {
    return poincare::PoincareMap(closed_loop(s), s.tau_m, s.analysis.tau_cap);
}

stability::EigenOptions eigen_options(const Scenario& s, const CommandOptions& opt) {
    stability::EigenOptions eo;
    eo.k_max = opt.k_max.value_or(s.analysis.k_max);
    eo.grid_n = opt.grid.value_or(s.analysis.grid);
    eo.n_samples = s.analysis.basin_samples;
    eo.n_iter = s.analysis.basin_iterations;
    eo.seed = opt.seed;
    return eo;
}

void report_orbits(const std::vector<stability::PeriodicOrbit>& orbits, std::ostream& log) {
    for (const auto& o : orbits) {
        log << "  period " << o.period << " " << stability::to_string(o.derivative.classification) << "  points";
        for (double p : o.points) {
            log << ' ' << p;
        }
        log << "  lambda_p " << o.lambda_p << '\n';
    }
}

}  // namespace

int exit_code(stability::Result r) {
    switch (r) {
        case stability::Result::Stable:
            return kExitOk;
        case stability::Result::Inconclusive:
            return kExitInconclusive;
        case stability::Result::Unstable:
            return kExitUnstable;
    }
    return kExitInconclusive;
}

int cmd_simulate(const Scenario& s, const CommandOptions& opt, std::ostream& log) {
    const auto sol = run_law(s, s.law, s.horizon);
    {
        auto out = open_out(opt, s.name + "_trace.csv");
        io::write_solution_csv(out, sol);
    }
    const auto summary = run_summary(s, s.law, sol);
    write_json(opt, s.name + "_summary.json", summary);
    log << s.name << ": " << sol.jumps.size() << " jumps on [0, " << s.horizon << "]";
    if (!summary["interval_tail"].is_null()) {
        log << ", last reset interval " << summary["interval_tail"]["last"].get<double>();
    }
    log << '\n';
    return kExitOk;
}

int cmd_poincare(const Scenario& s, const CommandOptions& opt, std::ostream& log) {
    const auto param = require_param(s, "poincare");
    const auto pm = poincare_map(s);
    const int grid = opt.grid.value_or(s.analysis.grid);
    const auto rows = poincare::map_graph(pm, param, grid);
    auto out = open_out(opt, s.name + "_map.csv");
    poincare::write_map_graph_csv(out, rows);
    const auto missing = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.status != "ok"; });
    log << s.name << ": " << rows.size() << " map samples, " << missing << " without a reset image\n";
    return kExitOk;
}

int cmd_periodic(const Scenario& s, const CommandOptions& opt, std::ostream& log) {
    const auto param = require_param(s, "periodic");
    const auto pm = poincare_map(s);
    const auto eo = eigen_options(s, opt);
    const auto orbits = stability::find_periodic_points(pm, param, eo.k_max, eo.grid_n);
    stability::StabilityVerdict holder;
    holder.orbits = orbits;
    json j = {{"scenario", s.name}, {"k_max", eo.k_max}, {"grid", eo.grid_n}};
    j["orbits"] = stability::to_json(holder)["orbits"];
    write_json(opt, s.name + "_periodic.json", j);
    std::size_t points = 0;
    for (const auto& o : orbits) {
        points += o.points.size();
    }
    log << s.name << ": " << orbits.size() << " periodic orbits (" << points << " points) up to period " << eo.k_max
        << '\n';
    report_orbits(orbits, log);
    return kExitOk;
}

int cmd_stability(const Scenario& s, const CommandOptions& opt, std::ostream& log) {
    const std::string method = opt.method.value_or(s.analysis.method);
    const auto sys = closed_loop(s);
    const double eps = opt.eps.value_or(s.analysis.lmi.eps);
    const int lmi_grid = opt.grid.value_or(s.analysis.lmi.grid);
    stability::StabilityVerdict v;
    if (method == "eigen") {
        const auto param = require_param(s, "stability --method eigen");
        v = stability::eigen_stability_verdict(poincare_map(s), param, eigen_options(s, opt));
    } else if (method == "lmi") {
        const double lo = s.analysis.lmi.tau_lo.value_or(s.tau_m);
        const double hi = s.analysis.lmi.tau_hi.value_or(
            s.analysis.tau_cap.value_or(poincare::PoincareMap::default_cap(sys, s.tau_m)));
        v = stability::dwell_lmi_verdict(sys, lo, hi, lmi_grid, eps);
    } else if (method == "ranged") {
        if (!s.tau_max) {
            throw InapplicableError("stability --method ranged: the scenario has no policy.tau_max");
        }
        v = stability::ranged_dwell_verdict(sys, s.tau_m, *s.tau_max, lmi_grid, eps);
    } else {
        throw ScenarioError("--method: expected eigen, lmi or ranged, got " + method);
    }
    json j = stability::to_json(v);
    j["scenario"] = s.name;
    write_json(opt, s.name + "_verdict.json", j);
    log << s.name << ": " << stability::to_string(v.result) << " (" << stability::to_string(v.method) << ") "
        << v.note << '\n';
    report_orbits(v.orbits, log);
    return exit_code(v.result);
}

int cmd_compare(const Scenario& s, const CommandOptions& opt, std::ostream& log) {
    if (!has_sector_form(s)) {
        throw InapplicableError("compare: the scenario gives no sector quadratic form (matrices.m)");
    }
    const double horizon = s.analysis.compare_horizon > 0.0 ? s.analysis.compare_horizon : s.horizon;
    json j = {{"scenario", s.name}, {"horizon", horizon}};
    for (const Law law : {Law::ZeroCrossing, Law::Sector}) {
        const auto sol = run_law(s, law, horizon);
        const std::string tag = law == Law::Sector ? "sector" : "zero_crossing";
        {
            auto out = open_out(opt, s.name + "_" + tag + ".csv");
            io::write_solution_csv(out, sol);
        }
        j[tag] = run_summary(s, law, sol);
        log << s.name << " [" << tag << "]: " << sol.jumps.size() << " jumps on [0, " << horizon << "]\n";
    }
    write_json(opt, s.name + "_compare.json", j);
    return kExitOk;
}

int run_command(const std::string& name, const std::filesystem::path& scenario_file, const CommandOptions& opt,
                std::ostream& log, std::ostream& err) {
    Scenario s;
    try {
        s = load_scenario(scenario_file);
    } catch (const Error& e) {
        err << "invalid scenario: " << e.what() << '\n';
        return kExitInvalid;
    }
    try {
        if (name == "simulate") {
            return cmd_simulate(s, opt, log);
        }
        if (name == "poincare") {
            return cmd_poincare(s, opt, log);
        }
        if (name == "periodic") {
            return cmd_periodic(s, opt, log);
        }
        if (name == "stability") {
            return cmd_stability(s, opt, log);
        }
        if (name == "compare") {
            return cmd_compare(s, opt, log);
        }
        err << "unknown command " << name << '\n';
        return kExitInvalid;
    } catch (const InapplicableError& e) {
        err << e.what() << '\n';
        return kExitInapplicable;
    } catch (const ScenarioError& e) {
        err << "invalid scenario: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const Error& e) {
        err << name << " failed: " << e.what() << '\n';
        return kExitInvalid;
    }
}

}  // namespace reset_lab::cli

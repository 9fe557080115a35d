#include "reset_lab/stability.hpp"

#include <cmath>
#include <string>

#include "reset_lab/errors.hpp"
#include "reset_lab/solution_io.hpp"

namespace reset_lab::stability {

const char* to_string(Method m) { return m == Method::EigenOrbit ? "eigen_orbit" : "dwell_lmi"; }

const char* to_string(Result r) {
    switch (r) {
        case Result::Stable:
            return "stable";
        case Result::Unstable:
            return "unstable";
        case Result::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

StabilityVerdict eigen_stability_verdict(const poincare::PoincareMap& pm, const poincare::Parameterization& param,
                                         const EigenOptions& options) {
    StabilityVerdict v;
    v.method = Method::EigenOrbit;
    v.orbits = find_periodic_points(pm, param, options.k_max, options.grid_n);
    const auto cov = basin_coverage(pm, param, v.orbits, options.n_samples, options.n_iter, options.seed);
    v.coverage_fraction = cov.fraction;

    bool any_sink = false;
    bool sinks_schur = true;
    for (std::size_t i = 0; i < v.orbits.size(); ++i) {
        const auto& o = v.orbits[i];
        if (cov.captured[i] > 0 && std::abs(o.lambda_p) >= 1.0) {
            v.result = Result::Unstable;
            v.note = "a period-" + std::to_string(o.period) + " orbit attracting " + std::to_string(cov.captured[i]) +
                     " samples has |lambda_p| = " + std::to_string(std::abs(o.lambda_p)) + " >= 1";
            return v;
        }
        if (o.derivative.classification == Classification::Sink) {
            any_sink = true;
            sinks_schur = sinks_schur && numerics::is_schur(o.m_p);
        }
    }
    if (any_sink && sinks_schur && cov.fraction >= 1.0) {
        v.result = Result::Stable;
        v.note = "every sink has a Schur M_p and all sampled starts converge to a found orbit";
    } else {
        v.result = Result::Inconclusive;
        v.note = !any_sink      ? "no sink among the periodic points found"
                 : !sinks_schur ? "a sink has an M_p eigenvalue on or outside the unit circle"
                                : "sampled starts not all captured by the found orbits (coverage " +
                                      std::to_string(cov.fraction) + ")";
    }
    return v;
}

StabilityVerdict dwell_lmi_verdict(const model::ClosedLoopSystem& sys, double tau_lo, double tau_hi, int grid_n,
                                   double eps) {
    StabilityVerdict v;
    v.method = Method::DwellLmi;
    const auto grid = make_tau_grid(tau_lo, tau_hi, grid_n);
    const auto outcome = dwell_lmi_constant_P(sys.a(), sys.a_r(), grid, eps);
    const std::string where = std::to_string(grid.size()) + " grid points on [" + std::to_string(tau_lo) + ", " +
                              std::to_string(tau_hi) + "]";
    if (const auto* cert = std::get_if<LyapunovCertificate>(&outcome)) {
        // Trust nothing from the search: recheck P and the margin from scratch.
        const double margin = certificate_margin(sys.a(), sys.a_r(), cert->p, grid, eps);
        if (numerics::min_sym_eigenvalue(cert->p) > 0.0 && margin >= 0.0) {
            v.result = Result::Stable;
            v.certificate = *cert;
            v.certificate->margin = margin;
            v.note = "constant P certificate on " + where + "; valid on the grid only";
            return v;
        }
        v.infeasible = Infeasible{margin, 0, "certificate failed re-verification"};
    } else {
        v.infeasible = std::get<Infeasible>(outcome);
    }
    v.result = Result::Inconclusive;
    v.note = "no constant P found on " + where + ": " + v.infeasible->reason;
    return v;
}

StabilityVerdict ranged_dwell_verdict(const model::ClosedLoopSystem& sys, double tau_m, double tau_max, int grid_n,
                                      double eps) {
    if (!(tau_m > 0.0) || !(tau_max >= tau_m)) {
        throw ArgumentError("ranged dwell verdict: need 0 < tau_m <= tau_M");
    }
    return dwell_lmi_verdict(sys, tau_m, tau_max, grid_n, eps);
}

Vec prepare_initial(const model::ClosedLoopSystem& sys, const Vec& x0, int q0, double tau0) {
    if (x0.size() != sys.dim()) {
        throw DimensionError("prepare_initial: x0 has length " + std::to_string(x0.size()) + ", expected " +
                             std::to_string(sys.dim()));
    }
    if (q0 != 1 && q0 != -1) {
        throw ArgumentError("prepare_initial: q0 must be 1 or -1");
    }
    if (!(tau0 >= 0.0)) {
        throw ArgumentError("prepare_initial: tau0 must be nonnegative");
    }
    // The timer restarts at 0 in the prepared state, so tau0 plays no role.
    return static_cast<double>(q0) * (sys.j().transpose() * (sys.a_r() * x0));
}

nlohmann::json to_json(const StabilityVerdict& v) {
    using nlohmann::json;
    json j;
    j["method"] = to_string(v.method);
    j["result"] = to_string(v.result);
    j["note"] = v.note;
    j["orbits"] = json::array();
    for (const auto& o : v.orbits) {
        j["orbits"].push_back({{"period", o.period},
                               {"points", o.points},
                               {"intervals", o.intervals},
                               {"lambda_p", o.lambda_p},
                               {"m_p", io::matrix_to_json(o.m_p)},
                               {"m_p_spectral_radius", numerics::spectral_radius(o.m_p)},
                               {"derivative", o.derivative.value},
                               {"classification", to_string(o.derivative.classification)},
                               {"one_sided", o.derivative.one_sided}});
    }
    if (v.certificate) {
        j["certificate"] = {{"p", io::matrix_to_json(v.certificate->p)},
                            {"eps", v.certificate->eps},
                            {"tau_grid", v.certificate->tau_grid},
                            {"margin", v.certificate->margin}};
    } else {
        j["certificate"] = nullptr;
    }
    if (v.infeasible) {
        j["infeasible"] = {{"best_margin", v.infeasible->best_margin},
                           {"iterations", v.infeasible->iterations},
                           {"reason", v.infeasible->reason}};
    }
    j["coverage_fraction"] = v.coverage_fraction ? json(*v.coverage_fraction) : json(nullptr);
    return j;
}

}  // namespace reset_lab::stability

#include "reset_lab/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "reset_lab/errors.hpp"
#include "reset_lab/solution_io.hpp"

namespace reset_lab::poincare {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) {
        r += 2.0 * kPi;
    }
    return r;
}

double pick_scan_step(const model::ClosedLoopSystem& sys, double tau_m, double cap) {
    double step = numerics::default_grid_step(tau_m, cap);
    const double w = numerics::max_imag_part(sys.a());
    if (w > 0.0) {
        step = std::min(step, 2.0 * kPi / (200.0 * w));
    }
    return step;
}

}  // namespace

PoincareMap::PoincareMap(model::ClosedLoopSystem sys, double tau_m, std::optional<double> tau_cap,
                         std::optional<double> scan_step, double tol)
    : sys_(std::move(sys)), tau_m_(tau_m), tau_cap_(0.0), scan_step_(0.0), tol_(tol) {
    if (!(tau_m > 0.0) || !std::isfinite(tau_m)) {
        throw ArgumentError("PoincareMap: tau_m must be positive, got " + std::to_string(tau_m));
    }
    if (sys_.reduced_dim() < 1) {
        throw DimensionError("PoincareMap: the system has no non-reset coordinates");
    }
    tau_cap_ = tau_cap.value_or(default_cap(sys_, tau_m));
    if (!(tau_cap_ > tau_m) || !std::isfinite(tau_cap_)) {
        throw ArgumentError("PoincareMap: tau_cap must exceed tau_m");
    }
    scan_step_ = scan_step.value_or(pick_scan_step(sys_, tau_m, tau_cap_));
    if (!(scan_step_ > 0.0) || !(tol_ > 0.0)) {
        throw ArgumentError("PoincareMap: scan step and tolerance must be positive");
    }

    const auto n = static_cast<Eigen::Index>(std::ceil((tau_cap_ - tau_m_) / scan_step_)) + 1;
    rows_.resize(n, sys_.reduced_dim());
    const RowVec cj = sys_.c() * sys_.j();
    // Walk the grid with one step propagator, restarting from an exact
    // exponential every 64 rows to keep rounding from piling up.
    const Mat step_exp = numerics::expm(sys_.a(), scan_step_);
    Mat e;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double tau = tau_m_ + static_cast<double>(i) * scan_step_;
        if (i % 64 == 0) {
            e = numerics::expm(sys_.a(), tau);
        } else {
            e = step_exp * e;
        }
        rows_.row(i) = sys_.c() * e * sys_.j();
    }
}

double PoincareMap::default_cap(const model::ClosedLoopSystem& sys, double tau_m) {
    double best_re = -std::numeric_limits<double>::infinity();
    double omega = 0.0;
    for (const auto& l : numerics::eigenvalues(sys.a())) {
        if (std::abs(l.imag()) > 1e-12 && l.real() > best_re) {
            best_re = l.real();
            omega = std::abs(l.imag());
        }
    }
    if (omega > 0.0) {
        return 10.0 * (tau_m + 2.0 * kPi / omega);
    }
    return 100.0 * tau_m;
}

double PoincareMap::switching(double tau, const Vec& unit_z) const {
    const double k = std::round((tau - tau_m_) / scan_step_);
    if (k >= 0.0 && k < static_cast<double>(rows_.rows()) &&
        tau_m_ + k * scan_step_ == tau) {
        return rows_.row(static_cast<Eigen::Index>(k)).dot(unit_z);
    }
    return (sys_.c() * numerics::expm(sys_.a(), tau) * sys_.j() * unit_z)(0);
}

SpherePoint::SpherePoint(const Vec& direction) {
    const double n = direction.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DegenerateError("SpherePoint: zero or non-finite direction");
    }
    s_ = direction / n;
}

Parameterization Parameterization::circle() { return {Kind::Circle, -kPi, kPi, 2}; }

Parameterization Parameterization::segment(double a, double b, Eigen::Index dim) {
    if (!(a < b)) {
        throw ArgumentError("segment parameterization: need a < b");
    }
    if (dim < 2) {
        throw DimensionError("segment parameterization: dimension must be at least 2");
    }
    return {Kind::Segment, a, b, dim};
}

Vec Parameterization::point(double u) const {
    if (!std::isfinite(u)) {
        throw ArgumentError("parameterization: non-finite parameter");
    }
    Vec s = Vec::Zero(dim_);
    if (kind_ == Kind::Circle) {
        s << std::cos(u), std::sin(u);
        return s;
    }
    const double r = std::sqrt(1.0 + u * u);
    s(0) = u / r;
    s(1) = 1.0 / r;
    return s;
}

double Parameterization::parameter(const Vec& s) const {
    if (s.size() != dim_) {
        throw DimensionError("parameterization: expected a vector of length " + std::to_string(dim_));
    }
    const double n = s.norm();
    if (!(n > 0.0)) {
        throw DegenerateError("parameterization: zero vector");
    }
    const Vec v = s / n;
    if (kind_ == Kind::Circle) {
        return std::atan2(v(1), v(0));
    }
    const double off = v.tail(dim_ - 2).size() > 0 ? v.tail(dim_ - 2).cwiseAbs().maxCoeff() : 0.0;
    if (off > 1e-6 || v(1) <= 0.0) {
        throw DegenerateError("parameterization: point leaves the invariant segment (off-plane " +
                              std::to_string(off) + ", second coordinate " + std::to_string(v(1)) + ")");
    }
    const double t = v(0) / v(1);
    if (t < lo_ - 1e-6 || t > hi_ + 1e-6) {
        throw DegenerateError("parameterization: image parameter " + std::to_string(t) +
                              " outside [" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }
    return t;
}

double Parameterization::difference(double a, double b) const {
    return periodic() ? wrap_angle(a - b) : a - b;
}

double Parameterization::distance(double a, double b) const { return std::abs(difference(a, b)); }

double interval_map(const PoincareMap& pm, const Vec& z) {
    const auto& sys = pm.system();
    if (z.size() != sys.reduced_dim()) {
        throw DimensionError("interval_map: z has length " + std::to_string(z.size()) + ", expected " +
                             std::to_string(sys.reduced_dim()));
    }
    const double n = z.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ArgumentError("interval_map: z must be nonzero and finite");
    }
    const Vec unit = z / n;
    const auto tau = numerics::first_crossing([&](double t) { return pm.switching(t, unit); },
                                              pm.tau_m(), pm.tau_cap(), pm.scan_step(), pm.tol());
    if (!tau) {
        const bool hurwitz = numerics::is_hurwitz(sys.a());
        throw NotFoundError("interval_map: no reset within [" + std::to_string(pm.tau_m()) + ", " +
                            std::to_string(pm.tau_cap()) + "]; A is " +
                            (hurwitz ? "Hurwitz, so the flow may legitimately never reset"
                                     : "not Hurwitz, so the cap is too small for this state"));
    }
    return *tau;
}

Vec g_map(const PoincareMap& pm, const Vec& z) {
    const auto& sys = pm.system();
    const double tau = interval_map(pm, z);
    return -(sys.j().transpose() * (numerics::expm(sys.a(), tau) * (sys.j() * z)));
}

SpherePoint angle_map(const PoincareMap& pm, const SpherePoint& s) {
    const Vec g = g_map(pm, s.vec());
    if (!(g.norm() > 1e-300)) {
        throw DegenerateError("angle_map: g(s) vanishes; the state lands in the reset subspace");
    }
    return SpherePoint(g);
}

double angle_map_1d(const PoincareMap& pm, const Parameterization& param, double u) {
    if (param.dim() != pm.system().reduced_dim()) {
        throw DimensionError("angle_map_1d: parameterization dimension " + std::to_string(param.dim()) +
                             " does not match the reduced state dimension " +
                             std::to_string(pm.system().reduced_dim()));
    }
    return param.parameter(angle_map(pm, SpherePoint(param.point(u))).vec());
}

std::vector<double> orbit(const PoincareMap& pm, const Parameterization& param, double u0, int k) {
    if (k < 0) {
        throw ArgumentError("orbit: k must be nonnegative");
    }
    std::vector<double> out{u0};
    out.reserve(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i < k; ++i) {
        out.push_back(angle_map_1d(pm, param, out.back()));
    }
    return out;
}

double ScalarMap::difference(double a, double b) const {
    if (!periodic) {
        return a - b;
    }
    const double period = hi - lo;
    double r = std::remainder(a - b, period);
    if (r <= -0.5 * period) {
        r += period;
    }
    return r;
}

double ScalarMap::iterate(double u, int k) const {
    for (int i = 0; i < k; ++i) {
        u = f(u);
    }
    return u;
}

ScalarMap make_angle_map_1d(const PoincareMap& pm, const Parameterization& param) {
    return ScalarMap{[pm, param](double u) { return angle_map_1d(pm, param, u); }, param.lo(), param.hi(),
                     param.periodic()};
}

std::vector<MapGraphRow> map_graph(const PoincareMap& pm, const Parameterization& param, int grid_n) {
    if (grid_n < 2) {
        throw ArgumentError("map_graph: need at least 2 grid points");
    }
    std::vector<MapGraphRow> rows;
    rows.reserve(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) {
        MapGraphRow row;
        row.u = param.lo() + (param.hi() - param.lo()) * i / (grid_n - 1);
        try {
            const Vec s = param.point(row.u);
            row.interval = interval_map(pm, s);
            row.image = angle_map_1d(pm, param, row.u);
            row.status = "ok";
        } catch (const NotFoundError&) {
            row.status = "not_found";
        } catch (const DegenerateError&) {
            row.status = "degenerate";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_map_graph_csv(std::ostream& os, const std::vector<MapGraphRow>& rows) {
    os << "u,image,interval,status\n";
    for (const auto& r : rows) {
        os << io::format_double(r.u) << ',' << (r.image ? io::format_double(*r.image) : "") << ','
           << (r.interval ? io::format_double(*r.interval) : "") << ',' << r.status << '\n';
    }
}

}  // namespace reset_lab::poincare

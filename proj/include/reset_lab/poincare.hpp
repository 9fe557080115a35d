#pragma once

// Discrete-time reduction of the zero-crossing reset system: the reset-interval
// map I, the after-jump map g, and the angle map on the unit sphere, plus 1-D
// parameterizations of that sphere (or of an invariant arc on it).

#include <cmath>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reset_lab/model.hpp"

namespace reset_lab::poincare {

/// The pair (I, g) bound to a system and a minimum dwell-time.
///
/// Resets are searched on [tau_m, tau_cap]; the cap plays the role of the
/// upper bound on I that the stability results assume for non-Hurwitz flows.
/// The switching row C e^{A tau} J is tabulated once on the scan grid, so map
/// evaluations only pay for the bisection.
class PoincareMap {
  public:
    PoincareMap(model::ClosedLoopSystem sys,
                double tau_m,
                std::optional<double> tau_cap = std::nullopt,
                std::optional<double> scan_step = std::nullopt,
                double tol = 1e-12);

    /// 10 (tau_m + 2 pi / |Im lambda_dom|) for an oscillatory A, else 100 tau_m.
    [[nodiscard]] static double default_cap(const model::ClosedLoopSystem& sys, double tau_m);

    [[nodiscard]] const model::ClosedLoopSystem& system() const { return sys_; }
    [[nodiscard]] double tau_m() const { return tau_m_; }
    [[nodiscard]] double tau_cap() const { return tau_cap_; }
    [[nodiscard]] double scan_step() const { return scan_step_; }
    [[nodiscard]] double tol() const { return tol_; }

    /// C e^{A tau} J z for a unit z; grid values come from the table.
    [[nodiscard]] double switching(double tau, const Vec& unit_z) const;

  private:
    model::ClosedLoopSystem sys_;
    double tau_m_;
    double tau_cap_;
    double scan_step_;
    double tol_;
    Mat rows_;  // row i: C e^{A (tau_m + i * scan_step)} J
};

/// A unit vector of the reduced space.
class SpherePoint {
  public:
    /// Normalizes `direction`; throws DegenerateError for the zero vector.
    explicit SpherePoint(const Vec& direction);

    [[nodiscard]] const Vec& vec() const { return s_; }

  private:
    Vec s_;
};

/// 1-D chart of the sphere (a circle) or of an invariant arc on it.
class Parameterization {
  public:
    enum class Kind { Circle, Segment };

    /// theta -> (cos theta, sin theta), theta in [-pi, pi].
    [[nodiscard]] static Parameterization circle();
    /// t -> (t, 1, 0, ..., 0) / sqrt(1 + t^2) in R^dim, t in [a, b].
    [[nodiscard]] static Parameterization segment(double a, double b, Eigen::Index dim);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] bool periodic() const { return kind_ == Kind::Circle; }

    [[nodiscard]] Vec point(double u) const;
    /// Inverse chart; DegenerateError when `s` is off the parameterized set by more than 1e-6.
    [[nodiscard]] double parameter(const Vec& s) const;

    /// Signed difference a - b (wrapped into (-pi, pi] on the circle).
    [[nodiscard]] double difference(double a, double b) const;
    [[nodiscard]] double distance(double a, double b) const;

  private:
    Parameterization(Kind kind, double lo, double hi, Eigen::Index dim)
        : kind_(kind), lo_(lo), hi_(hi), dim_(dim) {}

    Kind kind_;
    double lo_, hi_;
    Eigen::Index dim_;
};

/// First tau >= tau_m with C e^{A tau} J z >= 0 (tau_m itself when already
/// nonnegative there). NotFoundError when no reset occurs before tau_cap.
[[nodiscard]] double interval_map(const PoincareMap& pm, const Vec& z);

/// z+ = -J' e^{A I(z)} J z.
[[nodiscard]] Vec g_map(const PoincareMap& pm, const Vec& z);

/// g(s) / |g(s)|; DegenerateError when g(s) vanishes.
[[nodiscard]] SpherePoint angle_map(const PoincareMap& pm, const SpherePoint& s);

/// The angle map read through a 1-D chart.
[[nodiscard]] double angle_map_1d(const PoincareMap& pm, const Parameterization& param, double u);

/// (u0, Pi(u0), ..., Pi^k(u0)).
[[nodiscard]] std::vector<double> orbit(const PoincareMap& pm, const Parameterization& param, double u0,
                                        int k);

/// A self-map of an interval (or of the circle when `periodic`).
struct ScalarMap {
    std::function<double(double)> f;
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;

    [[nodiscard]] double difference(double a, double b) const;
    [[nodiscard]] double distance(double a, double b) const { return std::abs(difference(a, b)); }
    /// f applied k times.
    [[nodiscard]] double iterate(double u, int k) const;
};

[[nodiscard]] ScalarMap make_angle_map_1d(const PoincareMap& pm, const Parameterization& param);

/// One row of a sampled (u, Pi(u), I(u)) graph.
struct MapGraphRow {
    double u = 0.0;
    std::optional<double> image;
    std::optional<double> interval;
    std::string status;  ///< "ok", "not_found" or "degenerate"
};

[[nodiscard]] std::vector<MapGraphRow> map_graph(const PoincareMap& pm, const Parameterization& param,
                                                 int grid_n);

/// Columns u,image,interval,status; missing values are left empty.
void write_map_graph_csv(std::ostream& os, const std::vector<MapGraphRow>& rows);

}  // namespace reset_lab::poincare

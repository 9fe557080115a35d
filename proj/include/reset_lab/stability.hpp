#pragma once

// Stability verdicts for zero-crossing reset systems: periodic points of the
// 1-D angle map and their monodromy matrices, an empirical basin check, and a
// constant-P dwell-time Lyapunov search on a grid of reset intervals.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "reset_lab/poincare.hpp"

namespace reset_lab::stability {

enum class Classification { Sink, Source, Neutral };

[[nodiscard]] const char* to_string(Classification c);

struct Derivative {
    double value = 0.0;
    Classification classification = Classification::Neutral;
    bool one_sided = false;  ///< a discontinuity sat within the difference step
};

/// A periodic orbit of a 1-D map, points in orbit order starting at the
/// smallest parameter.
struct PeriodicPoints {
    int period = 1;
    std::vector<double> points;
    Derivative derivative;
};

struct PeriodicOrbit {
    int period = 1;
    std::vector<double> points;
    std::vector<double> intervals;  ///< I at each point
    Mat m_p;
    double lambda_p = 0.0;
    Derivative derivative;
};

inline constexpr double kClassifyTol = 1e-4;
inline constexpr double kDedupTol = 1e-6;
inline constexpr double kResidualTol = 1e-8;

/// Periodic points of period 1..k_max of a 1-D map, found by bracketing sign
/// changes of F_k(u) = f^k(u) - u on grid_n samples and bisecting. Brackets
/// straddling a jump of F_k (more than 10x the local median step) are skipped.
[[nodiscard]] std::vector<PeriodicPoints> find_periodic_points(const poincare::ScalarMap& map, int k_max,
                                                               int grid_n);

[[nodiscard]] std::vector<PeriodicOrbit> find_periodic_points(const poincare::PoincareMap& pm,
                                                              const poincare::Parameterization& param,
                                                              int k_max, int grid_n);

/// Derivative of f^k at p by finite differences.
[[nodiscard]] Derivative classify(const poincare::ScalarMap& map, double p, int k);
[[nodiscard]] Derivative classify(const poincare::PoincareMap& pm, const poincare::Parameterization& param,
                                  double p, int k);

struct Monodromy {
    Mat m_p;
    double lambda_p = 0.0;
};

/// M_p = J' e^{A I(p_{k-1})} J ... J' e^{A I(p_0)} J and the real eigenvalue
/// whose eigenvector lines up with the first point.
[[nodiscard]] Monodromy monodromy_matrix(const poincare::PoincareMap& pm,
                                         const poincare::Parameterization& param,
                                         const std::vector<double>& points);

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct Coverage {
    double fraction = 0.0;
    std::vector<int> captured;  ///< samples ending near each orbit
};

/// Share of uniform random starting parameters whose n_iter-th iterate lies
/// within 1e-4 of a point of some orbit. Failed iterations count as misses.
[[nodiscard]] Coverage basin_coverage(const poincare::ScalarMap& map,
                                      const std::vector<std::vector<double>>& orbits, int n_samples,
                                      int n_iter, std::uint64_t seed = kDefaultSeed);
[[nodiscard]] Coverage basin_coverage(const poincare::PoincareMap& pm, const poincare::Parameterization& param,
                                      const std::vector<PeriodicOrbit>& orbits, int n_samples, int n_iter,
                                      std::uint64_t seed = kDefaultSeed);

struct LyapunovCertificate {
    Mat p;
    double eps = 0.0;
    std::vector<double> tau_grid;
    double margin = 0.0;
};

struct Infeasible {
    double best_margin = 0.0;  ///< for the best iterate scaled to |P| = 1
    int iterations = 0;
    std::string reason;
};

using LmiOutcome = std::variant<LyapunovCertificate, Infeasible>;

struct LmiOptions {
    int max_iterations = 5000;
    double clip = 1e-3;  ///< eigenvalue floor when projecting onto the PSD cone
};

/// Constant P with P >= I and e^{A'tau} A_R P A_R e^{A tau} - P <= -eps I on
/// every grid point, by alternating projections.
[[nodiscard]] LmiOutcome dwell_lmi_constant_P(const Mat& a, const Mat& a_r, const std::vector<double>& tau_grid,
                                              double eps, const LmiOptions& options = {});

/// min over the grid of the smallest eigenvalue of P - Phi' P Phi - eps I,
/// Phi = A_R e^{A tau}, recomputed from scratch.
[[nodiscard]] double certificate_margin(const Mat& a, const Mat& a_r, const Mat& p,
                                        const std::vector<double>& tau_grid, double eps);

/// n points on [lo, hi]; log-spaced when hi / lo > 10.
[[nodiscard]] std::vector<double> make_tau_grid(double lo, double hi, int n);

enum class Method { EigenOrbit, DwellLmi };
enum class Result { Stable, Unstable, Inconclusive };

[[nodiscard]] const char* to_string(Method m);
[[nodiscard]] const char* to_string(Result r);

struct StabilityVerdict {
    Method method = Method::EigenOrbit;
    Result result = Result::Inconclusive;
    std::vector<PeriodicOrbit> orbits;
    std::optional<LyapunovCertificate> certificate;
    std::optional<Infeasible> infeasible;
    std::optional<double> coverage_fraction;
    std::string note;
};

struct EigenOptions {
    int k_max = 3;
    int grid_n = 2000;
    int n_samples = 200;
    int n_iter = 200;
    std::uint64_t seed = kDefaultSeed;
};

[[nodiscard]] StabilityVerdict eigen_stability_verdict(const poincare::PoincareMap& pm,
                                                       const poincare::Parameterization& param,
                                                       const EigenOptions& options = {});

/// Gridded constant-P check on [tau_lo, tau_hi]; Stable or Inconclusive.
[[nodiscard]] StabilityVerdict dwell_lmi_verdict(const model::ClosedLoopSystem& sys, double tau_lo, double tau_hi,
                                                 int grid_n, double eps);

/// Same check on the ranged dwell-time window [tau_m, tau_M].
[[nodiscard]] StabilityVerdict ranged_dwell_verdict(const model::ClosedLoopSystem& sys, double tau_m,
                                                    double tau_max, int grid_n, double eps);

/// Reduced state z with (J z, 1, 0) equivalent to (x0, q0, tau0): a forced jump
/// clears the reset block, and q = -1 is folded in through (x, q) -> (-x, -q).
[[nodiscard]] Vec prepare_initial(const model::ClosedLoopSystem& sys, const Vec& x0, int q0, double tau0);

[[nodiscard]] nlohmann::json to_json(const StabilityVerdict& v);

}  // namespace reset_lab::stability

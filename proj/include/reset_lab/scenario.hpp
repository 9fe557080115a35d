#pragma once

// Scenario files: one JSON document per run describing the system, the
// resetting law, the timer policy, the initial condition and what to analyze.

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "reset_lab/errors.hpp"
#include "reset_lab/hybrid_sim.hpp"
#include "reset_lab/model.hpp"
#include "reset_lab/poincare.hpp"

namespace reset_lab::cli {

inline constexpr int kScenarioVersion = 1;

/// Malformed or inconsistent scenario; the message names the offending field.
class ScenarioError : public Error {
  public:
    using Error::Error;
};

struct BlockSpec {
    Mat plant_a, plant_b, plant_c;
    Mat ctrl_a, ctrl_b, ctrl_c;
    double ctrl_d = 0.0;
    Eigen::Index n_reset = 1;
    std::optional<Mat> exo_a, exo_c1, exo_c2;  // all three or none
};

struct MatrixSpec {
    Mat a, a_r, c;
    std::optional<Mat> m;
    std::optional<Mat> output_row;
};

enum class Law { ZeroCrossing, Sector };

struct ParamSpec {
    poincare::Parameterization::Kind kind = poincare::Parameterization::Kind::Circle;
    double a = -3.0;  // segment only
    double b = 4.0;
};

struct LmiSpec {
    std::optional<double> tau_lo, tau_hi;  // default: policy window
    int grid = 60;
    double eps = 1e-6;
};

struct Analysis {
    std::optional<ParamSpec> parameterization;
    std::optional<double> tau_cap;
    int k_max = 3;
    int grid = 2000;
    std::string method = "eigen";  // eigen | lmi | ranged
    LmiSpec lmi;
    int basin_samples = 200;
    int basin_iterations = 200;
    double compare_horizon = 0.0;  // 0: use the scenario horizon
};

struct Scenario {
    int version = kScenarioVersion;
    std::string name;
    std::string description;
    std::variant<BlockSpec, MatrixSpec> system;
    Law law = Law::ZeroCrossing;
    double tau_m = 0.1;
    std::optional<double> tau_max;
    Vec x0;
    int q0 = 1;
    double tau0 = 0.0;
    double horizon = 10.0;
    sim::Selection selection = sim::Selection::Eager;
    Analysis analysis;
};

/// Parses and validates (shapes, dimensions, ranges) before anything runs.
[[nodiscard]] Scenario parse_scenario(const nlohmann::json& j);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const Scenario& s);

[[nodiscard]] model::ClosedLoopSystem closed_loop(const Scenario& s);
/// The sector-law system; ScenarioError when literal matrices carry no M.
[[nodiscard]] model::SectorClosedLoop sector_loop(const Scenario& s);
[[nodiscard]] bool has_sector_form(const Scenario& s);

/// The 1-D chart for the Poincare commands: the declared one, or the circle
/// when the reduced state is 2-D. nullopt when neither applies.
[[nodiscard]] std::optional<poincare::Parameterization> parameterization(const Scenario& s);

}  // namespace reset_lab::cli

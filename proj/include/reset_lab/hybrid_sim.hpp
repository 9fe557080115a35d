#pragma once

// Time-regularized simulation of zero-crossing and sector reset systems.
//
// Flows are linear, so they are propagated exactly with the matrix exponential;
// only the jump instants are localized numerically (grid scan + bisection on
// the switching function).

#include <optional>
#include <vector>

#include "reset_lab/model.hpp"

namespace reset_lab::sim {

/// How to resolve points where both flowing and jumping are allowed.
enum class Selection {
    Eager,  ///< jump at the earliest enabled instant
    Lazy,   ///< keep flowing as long as the flow set permits it
};

/// Minimum dwell-time tau_m > 0 and optional maximum dwell-time tau_M >= tau_m
/// (a jump is forced once the timer reaches tau_M).
class TimerPolicy {
  public:
    explicit TimerPolicy(double tau_m, std::optional<double> tau_max = std::nullopt);

    [[nodiscard]] double tau_m() const { return tau_m_; }
    [[nodiscard]] const std::optional<double>& tau_max() const { return tau_max_; }

  private:
    double tau_m_;
    std::optional<double> tau_max_;
};

struct HybridState {
    Vec x;
    int q = 1;
    double tau = 0.0;
};

struct Sample {
    double t = 0.0;
    Vec x;
    int q = 1;
    double tau = 0.0;
};

/// One flow interval [t_start, t_end] x {j} with its samples (both endpoints included).
struct FlowInterval {
    double t_start = 0.0;
    double t_end = 0.0;
    int j = 0;
    std::vector<Sample> samples;
};

struct JumpRecord {
    double t = 0.0;
    Vec x_before;
    Vec x_after;
    int q_before = 1;
    double tau_before = 0.0;
    bool forced = false;  ///< triggered by tau_M rather than the switching condition
};

struct DomainInterval {
    double t_start = 0.0;
    double t_end = 0.0;
    int j = 0;
};

using HybridTimeDomain = std::vector<DomainInterval>;

/// A hybrid arc sampled on its hybrid time domain.
struct HybridSolution {
    std::vector<FlowInterval> intervals;
    std::vector<JumpRecord> jumps;

    [[nodiscard]] HybridTimeDomain domain() const;
    [[nodiscard]] std::size_t sample_count() const;
    [[nodiscard]] const Sample& final_sample() const { return intervals.back().samples.back(); }
};

struct SimOptions {
    Selection selection = Selection::Eager;
    /// Spacing of the output samples and of the event scan; <= 0 means horizon / 2000.
    double sample_step = 0.0;
    /// Width to which jump instants are bisected.
    double event_tol = 1e-9;
};

/// Zero-crossing law: jumps when q C x >= 0 and tau >= tau_m.
[[nodiscard]] HybridSolution simulate(const model::ClosedLoopSystem& sys,
                                      const HybridState& init,
                                      const TimerPolicy& policy,
                                      double horizon,
                                      const SimOptions& options = {});

/// Sector law: jumps when x' M x <= 0 and tau >= tau_m (q is recorded as +1).
[[nodiscard]] HybridSolution simulate_sector(const model::SectorClosedLoop& sys,
                                             const Vec& x0,
                                             double tau0,
                                             const TimerPolicy& policy,
                                             double horizon,
                                             const SimOptions& options = {});

/// Timer values just before each jump (t_1 - 0, t_2 - t_1, ... when started at tau = 0).
[[nodiscard]] std::vector<double> reset_intervals(const HybridSolution& sol);

struct SignalTraces {
    std::vector<double> t;
    std::vector<int> j;
    std::vector<double> error;      ///< e = C x
    std::vector<double> switching;  ///< q C x
    std::vector<double> output;     ///< controller output v (NaN when the system has no output row)
};

[[nodiscard]] SignalTraces error_and_output_traces(const model::ClosedLoopSystem& sys,
                                                   const HybridSolution& sol);

}  // namespace reset_lab::sim

#include "reset_lab/hybrid_sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "reset_lab/errors.hpp"

namespace reset_lab::sim {

TimerPolicy::TimerPolicy(double tau_m, std::optional<double> tau_max) : tau_m_(tau_m), tau_max_(tau_max) {
    if (!(tau_m_ > 0.0) || !std::isfinite(tau_m_)) {
        throw ArgumentError("timer policy: tau_m must be a positive finite number");
    }
    if (tau_max_ && (!(*tau_max_ >= tau_m_) || !std::isfinite(*tau_max_))) {
        throw ArgumentError("timer policy: tau_M must be finite and >= tau_m");
    }
}

HybridTimeDomain HybridSolution::domain() const {
    HybridTimeDomain d;
    d.reserve(intervals.size());
    for (const auto& iv : intervals) {
        d.push_back({iv.t_start, iv.t_end, iv.j});
    }
    return d;
}

std::size_t HybridSolution::sample_count() const {
    std::size_t n = 0;
    for (const auto& iv : intervals) {
        n += iv.samples.size();
    }
    return n;
}

namespace {

// Law-specific data for the shared event loop. `jump_value` is >= 0 exactly on
// the (untimed) jump set and is scale-normalized by the caller.
struct Law {
    const Mat& a;
    const Mat& a_r;
    std::function<double(const Vec&, int)> jump_value;
    bool flips_q;
};

// Lazy selection only jumps once the switching value is strictly positive, so
// flows that stay on the switching surface are continued.
constexpr double kLazyLevel = 1e-10;

HybridSolution run(const Law& law, HybridState state, const TimerPolicy& policy, double horizon,
                   const SimOptions& options) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ArgumentError("simulate: horizon must be positive and finite");
    }
    if (state.x.size() != law.a.rows()) {
        throw DimensionError("simulate: initial state has dimension " + std::to_string(state.x.size()) +
                             ", system has " + std::to_string(law.a.rows()));
    }
    numerics::require_finite(state.x, "simulate: initial state");
    if (state.q != 1 && state.q != -1) {
        throw ArgumentError("simulate: q must be +1 or -1");
    }
    if (!(state.tau >= 0.0)) {
        throw ArgumentError("simulate: initial timer must be nonnegative");
    }
    const double dt = options.sample_step > 0.0 ? options.sample_step : horizon / 2000.0;
    const double tol = options.event_tol;

    HybridSolution sol;
    double t = 0.0;
    int j = 0;

    auto flow_interval = [&](double t_end) {
        FlowInterval iv{t, t_end, j, {}};
        const Vec x0 = state.x;
        auto push = [&](double ts) {
            iv.samples.push_back({ts, numerics::expm(law.a, ts - t) * x0, state.q, state.tau + (ts - t)});
        };
        push(t);
        for (auto k = static_cast<long>(std::floor(t / dt)) + 1;; ++k) {
            const double ts = static_cast<double>(k) * dt;
            if (ts >= t_end) {
                break;
            }
            if (ts > t) {
                push(ts);
            }
        }
        if (t_end > t) {
            push(t_end);
        } else {
            iv.samples.back().t = t_end;
        }
        state.x = iv.samples.back().x;
        state.tau = iv.samples.back().tau;
        t = t_end;
        sol.intervals.push_back(std::move(iv));
    };

    for (;;) {
        const double remaining = horizon - t;
        const double s_min = std::max(0.0, policy.tau_m() - state.tau);
        const double s_force = policy.tau_max() ? std::max(0.0, *policy.tau_max() - state.tau)
                                                : std::numeric_limits<double>::infinity();
        const double cap = std::min(remaining, s_force);

        std::optional<double> s_jump;
        bool forced = false;
        if (s_min <= cap) {
            const Vec x = state.x;
            const int q = state.q;
            auto h = [&law, x, q](double s) {
                return law.jump_value(numerics::expm(law.a, s) * x, q);
            };
            try {
                if (options.selection == Selection::Eager) {
                    s_jump = numerics::first_crossing(h, s_min, cap, dt, tol);
                } else {
                    auto shifted = [&h](double s) { return h(s) - 2.0 * kLazyLevel; };
                    s_jump = numerics::first_crossing(shifted, s_min, cap, dt, kLazyLevel);
                }
            } catch (const NumericalError& e) {
                throw NumericalError(std::string("simulate: event localization failed in [") +
                                     std::to_string(t + s_min) + ", " + std::to_string(t + cap) +
                                     "]: " + e.what());
            }
        }
        if (!s_jump && s_force <= remaining) {
            s_jump = s_force;
            forced = true;
        }
        if (!s_jump) {
            flow_interval(horizon);
            break;
        }

        flow_interval(t + *s_jump);
        JumpRecord jr{t, state.x, law.a_r * state.x, state.q, state.tau, forced};
        state.x = jr.x_after;
        if (law.flips_q) {
            state.q = -state.q;
        }
        state.tau = 0.0;
        ++j;
        sol.jumps.push_back(std::move(jr));
    }
    return sol;
}

}  // namespace

HybridSolution simulate(const model::ClosedLoopSystem& sys,
                        const HybridState& init,
                        const TimerPolicy& policy,
                        double horizon,
                        const SimOptions& options) {
    const RowVec c = sys.c();
    Law law{sys.a(), sys.a_r(),
            [c](const Vec& x, int q) {
                const double n = x.norm();
                return n > 0.0 ? q * c.dot(x) / n : 0.0;
            },
            true};
    return run(law, init, policy, horizon, options);
}

HybridSolution simulate_sector(const model::SectorClosedLoop& sys,
                               const Vec& x0,
                               double tau0,
                               const TimerPolicy& policy,
                               double horizon,
                               const SimOptions& options) {
    const Mat m = sys.m();
    Law law{sys.a(), sys.a_r(),
            [m](const Vec& x, int) {
                const double n2 = x.squaredNorm();
                return n2 > 0.0 ? -x.dot(m * x) / n2 : 0.0;
            },
            false};
    return run(law, HybridState{x0, 1, tau0}, policy, horizon, options);
}

std::vector<double> reset_intervals(const HybridSolution& sol) {
    std::vector<double> out;
    out.reserve(sol.jumps.size());
    for (const auto& jr : sol.jumps) {
        out.push_back(jr.tau_before);
    }
    return out;
}

SignalTraces error_and_output_traces(const model::ClosedLoopSystem& sys, const HybridSolution& sol) {
    SignalTraces tr;
    const auto n = sol.sample_count();
    tr.t.reserve(n);
    tr.j.reserve(n);
    tr.error.reserve(n);
    tr.switching.reserve(n);
    tr.output.reserve(n);
    const auto& v = sys.output_row();
    for (const auto& iv : sol.intervals) {
        for (const auto& s : iv.samples) {
            const double e = sys.switching_value(s.x);
            tr.t.push_back(s.t);
            tr.j.push_back(iv.j);
            tr.error.push_back(e);
            tr.switching.push_back(s.q * e);
            tr.output.push_back(v ? v->dot(s.x) : std::numeric_limits<double>::quiet_NaN());
        }
    }
    return tr;
}

}  // namespace reset_lab::sim

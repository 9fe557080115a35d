#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "reset_lab/errors.hpp"
#include "reset_lab/stability.hpp"

namespace reset_lab::stability {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<double> try_iterate(const poincare::ScalarMap& map, double u, int k) {
    try {
        const double v = map.iterate(u, k);
        if (std::isfinite(v)) {
            return v;
        }
    } catch (const Error&) {
    }
    return std::nullopt;
}

std::optional<double> try_residual(const poincare::ScalarMap& map, double u, int k) {
    const auto v = try_iterate(map, u, k);
    if (!v) {
        return std::nullopt;
    }
    return map.difference(*v, u);
}

double local_median(const std::vector<double>& steps, std::size_t i, std::size_t half_width) {
    std::vector<double> window;
    const std::size_t lo = i > half_width ? i - half_width : 0;
    const std::size_t hi = std::min(steps.size(), i + half_width + 1);
    for (std::size_t j = lo; j < hi; ++j) {
        if (std::isfinite(steps[j])) {
            window.push_back(steps[j]);
        }
    }
    if (window.empty()) {
        return kNaN;
    }
    auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    std::nth_element(window.begin(), mid, window.end());
    return *mid;
}

// Bisects F between a (F < 0) and b (F >= 0), or the reverse.
std::optional<double> bisect(const poincare::ScalarMap& map, int k, double a, double b, bool a_nonneg) {
    for (int it = 0; it < 200 && std::abs(b - a) > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) {
            break;
        }
        const auto fm = try_residual(map, mid, k);
        if (!fm) {
            return std::nullopt;
        }
        if ((*fm >= 0.0) == a_nonneg) {
            a = mid;
        } else {
            b = mid;
        }
    }
    const auto fa = try_residual(map, a, k);
    const auto fb = try_residual(map, b, k);
    if (fa && fb) {
        return std::abs(*fa) <= std::abs(*fb) ? a : b;
    }
    if (fa) {
        return a;
    }
    if (fb) {
        return b;
    }
    return std::nullopt;
}

double canonical(const poincare::ScalarMap& map, double u) {
    if (!map.periodic) {
        return u;
    }
    const double period = map.hi - map.lo;
    double r = std::fmod(u - map.lo, period);
    if (r < 0.0) {
        r += period;
    }
    return map.lo + r;
}

}  // namespace

const char* to_string(Classification c) {
    switch (c) {
        case Classification::Sink:
            return "sink";
        case Classification::Source:
            return "source";
        case Classification::Neutral:
            return "neutral";
    }
    return "?";
}

Derivative classify(const poincare::ScalarMap& map, double p, int k) {
    if (k < 1) {
        throw ArgumentError("classify: period must be at least 1");
    }
    const double h = 1e-6 * std::max(1.0, map.hi - map.lo);
    const auto g0 = try_iterate(map, p, k);
    if (!g0) {
        throw NumericalError("classify: the map fails at p = " + std::to_string(p));
    }
    // Richardson-extrapolated one-sided slopes, and whether two step sizes agree.
    auto side = [&](double dir) -> std::optional<double> {
        const auto g1 = try_iterate(map, p + dir * h, k);
        const auto g2 = try_iterate(map, p + dir * 0.5 * h, k);
        if (!g1 || !g2) {
            return std::nullopt;
        }
        const double s1 = map.difference(*g1, *g0) / (dir * h);
        const double s2 = map.difference(*g2, *g0) / (dir * 0.5 * h);
        if (std::abs(s1 - s2) > 1e-3 * (1.0 + std::abs(s2))) {
            return std::nullopt;
        }
        return 2.0 * s2 - s1;
    };
    const auto right = side(1.0);
    const auto left = side(-1.0);

    Derivative d;
    if (right && left && std::abs(*right - *left) <= 1e-4 * (1.0 + std::abs(*right))) {
        d.value = 0.5 * (*right + *left);
    } else if (right || left) {
        d.value = right ? *right : *left;
        d.one_sided = true;
    } else {
        throw NumericalError("classify: no smooth side at p = " + std::to_string(p));
    }
    const double m = std::abs(d.value);
    d.classification = m < 1.0 - kClassifyTol   ? Classification::Sink
                       : m > 1.0 + kClassifyTol ? Classification::Source
                                                : Classification::Neutral;
    return d;
}

std::vector<PeriodicPoints> find_periodic_points(const poincare::ScalarMap& map, int k_max, int grid_n) {
    if (k_max < 1) {
        throw ArgumentError("find_periodic_points: k_max must be at least 1");
    }
    if (grid_n < 100) {
        throw ArgumentError("find_periodic_points: grid_n must be at least 100");
    }
    if (!(map.lo < map.hi)) {
        throw ArgumentError("find_periodic_points: empty parameter interval");
    }

    // Samples include both ends. On the circle the end sample is the start
    // sample seen from the other side, so it reuses those iterates and a root
    // sitting on the seam is bracketed with consistent signs.
    const int n = grid_n;
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] = map.lo + (map.hi - map.lo) * i / (n - 1);
    }
    std::vector<std::vector<double>> iter(u.size(), std::vector<double>(static_cast<std::size_t>(k_max) + 1, kNaN));
    const std::size_t own = map.periodic ? u.size() - 1 : u.size();
    for (std::size_t i = 0; i < own; ++i) {
        double v = u[i];
        iter[i][0] = v;
        for (int m = 1; m <= k_max; ++m) {
            const auto next = try_iterate(map, v, 1);
            if (!next) {
                break;
            }
            v = *next;
            iter[i][static_cast<std::size_t>(m)] = v;
        }
    }
    if (map.periodic) {
        iter.back() = iter.front();
        iter.back()[0] = u.back();
    }

    std::vector<PeriodicPoints> found;
    std::vector<double> known;
    auto is_known = [&](double p) {
        return std::any_of(known.begin(), known.end(), [&](double q) { return map.distance(p, q) <= kDedupTol; });
    };

    for (int k = 1; k <= k_max; ++k) {
        std::vector<double> f(u.size(), kNaN);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double img = iter[i][static_cast<std::size_t>(k)];
            if (std::isfinite(img)) {
                f[i] = map.difference(img, u[i]);
            }
        }
        std::vector<double> steps(u.size() - 1, kNaN);
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            steps[i] = std::abs(f[i + 1] - f[i]);
        }

        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            if (!std::isfinite(f[i]) || !std::isfinite(f[i + 1])) {
                continue;
            }
            const bool a_nonneg = f[i] >= 0.0;
            if (a_nonneg == (f[i + 1] >= 0.0)) {
                continue;
            }
            const double med = local_median(steps, i, 8);
            if (std::isfinite(med) && steps[i] > 10.0 * med && steps[i] > 1e-12) {
                continue;
            }
            const auto root = bisect(map, k, u[i], u[i + 1], a_nonneg);
            if (!root) {
                continue;
            }
            const double p = canonical(map, *root);
            const auto res = try_residual(map, p, k);
            if (!res || std::abs(*res) > kResidualTol) {
                continue;
            }
            bool lower = false;
            for (int m = 1; m < k && !lower; ++m) {
                if (k % m == 0) {
                    const auto rm = try_residual(map, p, m);
                    lower = rm && std::abs(*rm) <= kDedupTol;
                }
            }
            if (lower || is_known(p)) {
                continue;
            }

            PeriodicPoints orbit;
            orbit.period = k;
            orbit.points.push_back(p);
            bool ok = true;
            for (int m = 1; m < k && ok; ++m) {
                const auto next = try_iterate(map, orbit.points.back(), 1);
                ok = next.has_value();
                if (ok) {
                    orbit.points.push_back(canonical(map, *next));
                }
            }
            if (!ok) {
                continue;
            }
            std::rotate(orbit.points.begin(), std::min_element(orbit.points.begin(), orbit.points.end()),
                        orbit.points.end());
            try {
                orbit.derivative = classify(map, orbit.points.front(), k);
            } catch (const NumericalError&) {
                continue;
            }
            known.insert(known.end(), orbit.points.begin(), orbit.points.end());
            found.push_back(std::move(orbit));
        }
    }
    return found;
}

Derivative classify(const poincare::PoincareMap& pm, const poincare::Parameterization& param, double p, int k) {
    return classify(poincare::make_angle_map_1d(pm, param), p, k);
}

Monodromy monodromy_matrix(const poincare::PoincareMap& pm, const poincare::Parameterization& param,
                           const std::vector<double>& points) {
    if (points.empty()) {
        throw ArgumentError("monodromy_matrix: empty orbit");
    }
    const auto& sys = pm.system();
    const Mat& j = sys.j();
    Mat m = Mat::Identity(sys.reduced_dim(), sys.reduced_dim());
    for (double u : points) {
        const double tau = poincare::interval_map(pm, param.point(u));
        m = (j.transpose() * numerics::expm(sys.a(), tau) * j) * m;
    }

    const Vec p = param.point(points.front());
    Eigen::EigenSolver<Mat> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("monodromy_matrix: eigen decomposition failed");
    }
    double best_cos = -1.0;
    double lambda = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const auto l = solver.eigenvalues()(i);
        if (std::abs(l.imag()) > 1e-9 * std::max(1.0, std::abs(l))) {
            continue;
        }
        const Vec v = solver.eigenvectors().col(i).real();
        if (!(v.norm() > 0.0)) {
            continue;
        }
        const double c = std::abs(v.dot(p)) / v.norm();
        if (c > best_cos) {
            best_cos = c;
            lambda = l.real();
        }
    }
    if (best_cos < 0.99) {
        throw NumericalError("monodromy_matrix: no real eigenvector of M_p lines up with the orbit point (best cosine " +
                             std::to_string(best_cos) + ")");
    }
    if ((m * p - lambda * p).norm() > 1e-6 * std::max(1.0, m.norm())) {
        throw NumericalError("monodromy_matrix: M_p p differs from lambda_p p by " +
                             std::to_string((m * p - lambda * p).norm()));
    }
    return {m, lambda};
}

std::vector<PeriodicOrbit> find_periodic_points(const poincare::PoincareMap& pm,
                                                const poincare::Parameterization& param, int k_max, int grid_n) {
    std::vector<PeriodicOrbit> out;
    for (auto& pts : find_periodic_points(poincare::make_angle_map_1d(pm, param), k_max, grid_n)) {
        PeriodicOrbit o;
        o.period = pts.period;
        o.points = pts.points;
        o.derivative = pts.derivative;
        for (double u : o.points) {
            o.intervals.push_back(poincare::interval_map(pm, param.point(u)));
        }
        const auto mono = monodromy_matrix(pm, param, o.points);
        o.m_p = mono.m_p;
        o.lambda_p = mono.lambda_p;
        out.push_back(std::move(o));
    }
    return out;
}

Coverage basin_coverage(const poincare::ScalarMap& map, const std::vector<std::vector<double>>& orbits,
                        int n_samples, int n_iter, std::uint64_t seed) {
    if (n_samples < 1 || n_iter < 0) {
        throw ArgumentError("basin_coverage: need n_samples >= 1 and n_iter >= 0");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(map.lo, map.hi);
    Coverage cov;
    cov.captured.assign(orbits.size(), 0);
    int hits = 0;
    for (int s = 0; s < n_samples; ++s) {
        const auto end = try_iterate(map, dist(rng), n_iter);
        if (!end) {
            continue;
        }
        for (std::size_t o = 0; o < orbits.size(); ++o) {
            const bool near = std::any_of(orbits[o].begin(), orbits[o].end(),
                                          [&](double p) { return map.distance(*end, p) <= 1e-4; });
            if (near) {
                ++cov.captured[o];
                ++hits;
                break;
            }
        }
    }
    cov.fraction = static_cast<double>(hits) / n_samples;
    return cov;
}

Coverage basin_coverage(const poincare::PoincareMap& pm, const poincare::Parameterization& param,
                        const std::vector<PeriodicOrbit>& orbits, int n_samples, int n_iter, std::uint64_t seed) {
    std::vector<std::vector<double>> pts;
    pts.reserve(orbits.size());
    for (const auto& o : orbits) {
        pts.push_back(o.points);
    }
    return basin_coverage(poincare::make_angle_map_1d(pm, param), pts, n_samples, n_iter, seed);
}

}  // namespace reset_lab::stability

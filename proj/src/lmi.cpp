#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "reset_lab/errors.hpp"
#include "reset_lab/stability.hpp"

namespace reset_lab::stability {

namespace {

// Orthonormal coordinates on symmetric matrices (off-diagonal pairs carry sqrt 2).
struct SymBasis {
    Eigen::Index n;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;

    explicit SymBasis(Eigen::Index n_) : n(n_) {
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                idx.emplace_back(i, j);
            }
        }
    }

    [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(idx.size()); }

    [[nodiscard]] Vec vec(const Mat& s) const {
        Vec v(size());
        for (Eigen::Index k = 0; k < size(); ++k) {
            const auto [i, j] = idx[static_cast<std::size_t>(k)];
            v(k) = i == j ? s(i, i) : std::sqrt(2.0) * 0.5 * (s(i, j) + s(j, i));
        }
        return v;
    }

    [[nodiscard]] Mat mat(const Vec& v) const {
        Mat s = Mat::Zero(n, n);
        for (Eigen::Index k = 0; k < size(); ++k) {
            const auto [i, j] = idx[static_cast<std::size_t>(k)];
            if (i == j) {
                s(i, i) = v(k);
            } else {
                s(i, j) = s(j, i) = v(k) / std::sqrt(2.0);
            }
        }
        return s;
    }
};

Mat clip_psd(const Mat& s, double floor_value) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (s + s.transpose()));
    const Vec d = es.eigenvalues().cwiseMax(floor_value);
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double min_eig(const Mat& s) {
    return Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
}

double max_eig(const Mat& s) {
    return Eigen::SelfAdjointEigenSolver<Mat>(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly)
        .eigenvalues()
        .maxCoeff();
}

// P with Phi' P Phi - P = -I, or nullopt when that has no positive definite solution.
std::optional<Mat> discrete_lyapunov(const Mat& phi) {
    const Eigen::Index n = phi.rows();
    const Mat k = Mat::Identity(n * n, n * n) - Eigen::kroneckerProduct(phi.transpose(), phi.transpose()).eval();
    Eigen::FullPivLU<Mat> lu(k);
    if (!lu.isInvertible()) {
        return std::nullopt;
    }
    const Mat eye = Mat::Identity(n, n);
    const Vec x = lu.solve(Eigen::Map<const Vec>(eye.data(), n * n));
    Mat p = Eigen::Map<const Mat>(x.data(), n, n);
    p = 0.5 * (p + p.transpose());
    if (!p.allFinite() || !(min_eig(p) > 0.0)) {
        return std::nullopt;
    }
    return p;
}

void check_grid(const std::vector<double>& tau_grid, double eps) {
    if (tau_grid.empty()) {
        throw ArgumentError("dwell-time LMI: empty tau grid");
    }
    for (double t : tau_grid) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw ArgumentError("dwell-time LMI: grid point " + std::to_string(t) + " is negative or not finite");
        }
    }
    if (!(eps > 0.0)) {
        throw ArgumentError("dwell-time LMI: eps must be positive");
    }
}

std::vector<Mat> reset_flows(const Mat& a, const Mat& a_r, const std::vector<double>& tau_grid) {
    numerics::require_square(a, "A");
    numerics::require_square(a_r, "A_R");
    if (a.rows() != a_r.rows()) {
        throw DimensionError("dwell-time LMI: A and A_R differ in size");
    }
    std::vector<Mat> phis;
    phis.reserve(tau_grid.size());
    for (double t : tau_grid) {
        phis.push_back(a_r * numerics::expm(a, t));
    }
    return phis;
}

double margin_of(const Mat& p, const std::vector<Mat>& phis, double eps) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& phi : phis) {
        m = std::min(m, min_eig(p - phi.transpose() * p * phi));
    }
    return m - eps;
}

}  // namespace

std::vector<double> make_tau_grid(double lo, double hi, int n) {
    if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
        throw ArgumentError("tau grid: need 0 <= lo <= hi");
    }
    if (n < 1) {
        throw ArgumentError("tau grid: need at least one point");
    }
    if (n == 1 || lo == hi) {
        return {lo};
    }
    std::vector<double> g(static_cast<std::size_t>(n));
    const bool log_spaced = lo > 0.0 && hi / lo > 10.0;
    for (int i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        g[static_cast<std::size_t>(i)] = log_spaced ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo);
    }
    g.back() = hi;
    return g;
}

double certificate_margin(const Mat& a, const Mat& a_r, const Mat& p, const std::vector<double>& tau_grid,
                          double eps) {
    check_grid(tau_grid, eps);
    return margin_of(p, reset_flows(a, a_r, tau_grid), eps);
}

LmiOutcome dwell_lmi_constant_P(const Mat& a, const Mat& a_r, const std::vector<double>& tau_grid, double eps,
                                const LmiOptions& options) {
    check_grid(tau_grid, eps);
    const auto phis = reset_flows(a, a_r, tau_grid);
    const Eigen::Index n = a.rows();
    const SymBasis basis(n);
    const Eigen::Index nb = basis.size();
    const Mat eye = Mat::Identity(n, n);

    // Constraint maps: T_0(P) = P, T_i(P) = P - Phi_i' P Phi_i.
    std::vector<Mat> t_maps;
    t_maps.push_back(Mat::Identity(nb, nb));
    for (const auto& phi : phis) {
        Mat t(nb, nb);
        for (Eigen::Index b = 0; b < nb; ++b) {
            const Mat e = basis.mat(Vec::Unit(nb, b));
            t.col(b) = basis.vec(e - phi.transpose() * e * phi);
        }
        t_maps.push_back(std::move(t));
    }
    Mat gram = Mat::Zero(nb, nb);
    for (const auto& t : t_maps) {
        gram += t.transpose() * t;
    }
    const Eigen::LDLT<Mat> normal(gram);
    const Vec eye_v = basis.vec(eye);
    std::vector<Vec> offsets(t_maps.size(), eps * eye_v);
    offsets[0] = eye_v;

    const Mat& mid_phi = phis[phis.size() / 2];
    Mat p = discrete_lyapunov(mid_phi).value_or(eye);
    p /= min_eig(p);

    double best = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < options.max_iterations; ++it) {
        const double lam_min = min_eig(p);
        const double margin = margin_of(p, phis, eps);
        if (lam_min > 0.0 && margin >= 0.0) {
            return LyapunovCertificate{p, eps, tau_grid, margin};
        }
        if (lam_min > 0.0) {
            best = std::max(best, margin / max_eig(p));
        }

        Vec rhs = Vec::Zero(nb);
        const Vec pv = basis.vec(p);
        for (std::size_t i = 0; i < t_maps.size(); ++i) {
            const Mat target = clip_psd(basis.mat(t_maps[i] * pv - offsets[i]), options.clip);
            rhs += t_maps[i].transpose() * (basis.vec(target) + offsets[i]);
        }
        const Vec next = normal.solve(rhs);
        if (!next.allFinite()) {
            return Infeasible{best, it, "projection produced non-finite values"};
        }
        const double change = (next - pv).norm();
        p = basis.mat(next);
        if (change <= 1e-13 * (1.0 + pv.norm())) {
            return Infeasible{best, it + 1, "alternating projections stalled"};
        }
    }
    return Infeasible{best, options.max_iterations, "iteration cap reached"};
}

}  // namespace reset_lab::stability

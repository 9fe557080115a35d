#include "reset_lab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "reset_lab/errors.hpp"

namespace reset_lab::numerics {

void require_finite(const Mat& m, std::string_view what) {
    if (!m.allFinite()) {
        throw ArgumentError(std::string(what) + ": non-finite entry");
    }
}

void require_square(const Mat& m, std::string_view what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

Mat expm(const Mat& a, double t) {
    require_square(a, "expm");
    require_finite(a, "expm");
    if (!std::isfinite(t)) {
        throw ArgumentError("expm: non-finite time");
    }
    if (a.rows() == 0) {
        return Mat(0, 0);
    }
    if (t == 0.0) {
        return Mat::Identity(a.rows(), a.cols());
    }
    Mat at = a * t;
    return at.exp();
}

Spectrum eigenvalues(const Mat& a) {
    require_square(a, "eigenvalues");
    require_finite(a, "eigenvalues");
    if (a.rows() > kMaxEigenDimension) {
        throw ArgumentError("eigenvalues: dimension " + std::to_string(a.rows()) +
                            " exceeds the desk-scale cap of 20");
    }
    if (a.rows() == 0) {
        return {};
    }
    Eigen::EigenSolver<Mat> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalues: QR iteration did not converge for a " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " matrix with norm " + std::to_string(a.norm()));
    }
    const auto& ev = solver.eigenvalues();
    return Spectrum(ev.data(), ev.data() + ev.size());
}

double spectral_radius(const Mat& a) {
    double r = 0.0;
    for (const auto& l : eigenvalues(a)) {
        r = std::max(r, std::abs(l));
    }
    return r;
}

bool is_schur(const Mat& a, double margin) {
    if (margin < 0.0) {
        throw ArgumentError("is_schur: margin must be nonnegative");
    }
    return spectral_radius(a) < 1.0 - margin;
}

bool is_hurwitz(const Mat& a, double margin) {
    const auto spec = eigenvalues(a);
    return std::all_of(spec.begin(), spec.end(),
                       [margin](const auto& l) { return l.real() < -margin; });
}

double min_sym_eigenvalue(const Mat& s) {
    require_square(s, "min_sym_eigenvalue");
    const Mat sym = 0.5 * (s + s.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("min_sym_eigenvalue: symmetric eigensolver failed");
    }
    return solver.eigenvalues().minCoeff();
}

double max_imag_part(const Mat& a) {
    double m = 0.0;
    for (const auto& l : eigenvalues(a)) {
        m = std::max(m, std::abs(l.imag()));
    }
    return m;
}

std::optional<double> first_crossing(const std::function<double(double)>& h,
                                     double start,
                                     double cap,
                                     double grid_step,
                                     double tol) {
    if (!(start <= cap)) {
        throw ArgumentError("first_crossing: start must not exceed cap");
    }
    if (!(grid_step > 0.0) || !(tol > 0.0)) {
        throw ArgumentError("first_crossing: grid_step and tol must be positive");
    }
    auto eval = [&h](double tau) {
        const double v = h(tau);
        if (!std::isfinite(v)) {
            throw NumericalError("first_crossing: switching function is not finite at tau = " +
                                 std::to_string(tau));
        }
        return v;
    };

    if (eval(start) >= -tol) {
        return start;
    }
    double lo = start;
    for (long i = 1;; ++i) {
        const double hi = std::min(start + static_cast<double>(i) * grid_step, cap);
        if (eval(hi) >= 0.0) {
            double a = lo;
            double b = hi;
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) {
                    break;
                }
                if (eval(mid) >= 0.0) {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return b;
        }
        if (hi >= cap) {
            return std::nullopt;
        }
        lo = hi;
    }
}

}  // namespace reset_lab::numerics

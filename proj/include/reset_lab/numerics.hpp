#pragma once

// Small dense real-matrix numerics shared by every other module.

#include <complex>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace reset_lab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;

namespace numerics {

/// Eigenvalues as (real, imag) pairs; complex ones come in conjugate pairs.
using Spectrum = std::vector<std::complex<double>>;

inline constexpr int kMaxEigenDimension = 20;

/// Throws ArgumentError naming `what` if any entry is NaN or infinite.
void require_finite(const Mat& m, std::string_view what);

/// Throws DimensionError naming `what` unless `m` is square.
void require_square(const Mat& m, std::string_view what);

/// e^{A t} by Padé scaling-and-squaring.
[[nodiscard]] Mat expm(const Mat& a, double t);

/// All eigenvalues of a square matrix of dimension <= 20.
[[nodiscard]] Spectrum eigenvalues(const Mat& a);

[[nodiscard]] double spectral_radius(const Mat& a);

/// True iff the spectral radius is strictly below 1 - margin.
[[nodiscard]] bool is_schur(const Mat& a, double margin = 0.0);

/// True iff every eigenvalue has real part strictly below -margin.
[[nodiscard]] bool is_hurwitz(const Mat& a, double margin = 0.0);

/// Smallest eigenvalue of the symmetric part of `s`.
[[nodiscard]] double min_sym_eigenvalue(const Mat& s);

/// Largest |Im(lambda)| over the spectrum (0 for a real spectrum).
[[nodiscard]] double max_imag_part(const Mat& a);

inline constexpr double kDefaultCrossingTol = 1e-9;

[[nodiscard]] inline double default_grid_step(double start, double cap) {
    return 1e-3 * (cap - start);
}

/// Earliest tau in [start, cap] at which h becomes nonnegative.
///
/// Returns `start` when h(start) >= -tol (the tolerance absorbs states that sit
/// exactly on a switching surface after a jump). Otherwise h is scanned on a
/// uniform grid of spacing `grid_step`; the first bracket where h goes from
/// negative to nonnegative is bisected down to width `tol`, and the right end
/// (where h >= 0) is returned. A double root falling between two grid points
/// is not seen; refine `grid_step` when that matters.
///
/// Returns std::nullopt when h stays negative on the whole interval.
[[nodiscard]] std::optional<double> first_crossing(const std::function<double(double)>& h,
                                                   double start,
                                                   double cap,
                                                   double grid_step,
                                                   double tol = kDefaultCrossingTol);

}  // namespace numerics
}  // namespace reset_lab

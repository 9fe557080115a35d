#pragma once

// Systems and oracles shared by the test suites.

#include <cmath>
#include <numbers>
#include <random>

#include "reset_lab/model.hpp"

namespace testsupport {

using reset_lab::Mat;
using reset_lab::RowVec;
using reset_lab::Vec;

inline constexpr double kPi = std::numbers::pi;

/// Horowitz controller and first-order plant, no exogenous input (3 states).
inline reset_lab::model::ClosedLoopSystem horowitz() {
    Mat a(3, 3);
    a << -1, 1, 1, -4, 0, 0, -1, 0, 0;
    RowVec c(3);
    c << -1, 0, 0;
    return {a, c, 1};
}

/// Same loop with the step-reference exosystem in front (4 states).
inline reset_lab::model::ClosedLoopSystem horowitz_step() {
    Mat a(4, 4);
    a << 0, 0, 0, 0, 0, -1, 1, 1, 4, -4, 0, 0, 1, -1, 0, 0;
    RowVec c(4);
    c << 1, -1, 0, 0;
    RowVec v(4);
    v << 0, 0, 1, 1;
    return {a, c, 1, v};
}

inline Mat horowitz_sector_m() {
    Mat m(4, 4);
    m << 0, 0, 1, 1, 0, 0, -1, -1, 1, -1, 0, 0, 1, -1, 0, 0;
    return m;
}

inline reset_lab::model::ClosedLoopSystem chaos() {
    Mat a(4, 4);
    a << 0, 0, 3.5, 5, 1, 0, -4.3, 1, 0, 1, -1, 0, 0, 0, -1, -1;
    RowVec c(4);
    c << 0, 0, -1, 0;
    return {a, c, 1};
}

/// FORE with a second-order plant; A is Hurwitz.
inline reset_lab::model::ClosedLoopSystem classical_fore() {
    Mat a(3, 3);
    a << 0, 0, 1, 1, -0.2, 1, 0, -1, -1;
    RowVec c(3);
    c << 0, -1, 0;
    return {a, c, 1};
}

/// e^{A t} from a scaled Taylor series, squared back up.
inline Mat taylor_expm(const Mat& a, double t) {
    Mat at = a * t;
    int squarings = 0;
    while (at.lpNorm<Eigen::Infinity>() > 0.5) {
        at /= 2.0;
        ++squarings;
    }
    Mat term = Mat::Identity(a.rows(), a.cols());
    Mat sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * at / k;
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

inline Mat random_matrix(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> d(0.0, scale);
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = d(rng);
        }
    }
    return m;
}

inline Vec random_vector(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> d(0.0, 1.0);
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = d(rng);
    }
    return v;
}

}  // namespace testsupport

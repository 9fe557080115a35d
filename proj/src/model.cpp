#include "reset_lab/model.hpp"

#include <cmath>
#include <string>

#include "reset_lab/errors.hpp"

namespace reset_lab::model {
namespace {

std::string shape(const Mat& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void expect_shape(const Mat& m, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
    if (m.rows() != rows || m.cols() != cols) {
        throw DimensionError(what + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                             ", got " + shape(m));
    }
    numerics::require_finite(m, what);
}

}  // namespace

LtiPlant::LtiPlant(Mat a, Mat b, Mat c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    numerics::require_square(a_, "plant A_p");
    const auto n = a_.rows();
    expect_shape(a_, n, n, "plant A_p");
    expect_shape(b_, n, 1, "plant B_p");
    expect_shape(c_, 1, n, "plant C_p");
}

ResetController::ResetController(Mat a, Mat b, Mat c, double d, Eigen::Index n_reset)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d), n_reset_(n_reset) {
    numerics::require_square(a_, "controller A_r");
    const auto n = a_.rows();
    expect_shape(a_, n, n, "controller A_r");
    expect_shape(b_, n, 1, "controller B_r");
    expect_shape(c_, 1, n, "controller C_r");
    if (!std::isfinite(d_)) {
        throw ArgumentError("controller D_r: non-finite");
    }
    if (n_reset_ < 0 || n_reset_ > n) {
        throw ArgumentError("controller n_reset: must lie in [0, " + std::to_string(n) + "], got " +
                            std::to_string(n_reset_));
    }
}

Mat ResetController::reset_projector() const { return model::reset_projector(order(), n_reset_); }

Exosystem::Exosystem(Mat a, Mat c1, Mat c2) : a_(std::move(a)), c1_(std::move(c1)), c2_(std::move(c2)) {
    numerics::require_square(a_, "exosystem A_w");
    const auto n = a_.rows();
    expect_shape(a_, n, n, "exosystem A_w");
    expect_shape(c1_, 1, n, "exosystem C_w1");
    expect_shape(c2_, 1, n, "exosystem C_w2");
}

Mat reset_projector(Eigen::Index n_r, Eigen::Index n_reset) {
    if (n_r < 0 || n_reset < 0 || n_reset > n_r) {
        throw ArgumentError("reset_projector: need 0 <= n_reset <= n_r, got n_r = " + std::to_string(n_r) +
                            ", n_reset = " + std::to_string(n_reset));
    }
    Mat p = Mat::Zero(n_r, n_r);
    p.topLeftCorner(n_r - n_reset, n_r - n_reset).setIdentity();
    return p;
}

ClosedLoopSystem::ClosedLoopSystem(Mat a, RowVec c, Eigen::Index n_reset, std::optional<RowVec> output_row)
    : a_(std::move(a)), c_(std::move(c)), n_reset_(n_reset), output_row_(std::move(output_row)) {
    numerics::require_square(a_, "closed-loop A");
    numerics::require_finite(a_, "closed-loop A");
    const auto n = a_.rows();
    if (c_.size() != n) {
        throw DimensionError("closed-loop C: expected 1x" + std::to_string(n) + ", got 1x" +
                             std::to_string(c_.size()));
    }
    numerics::require_finite(c_, "closed-loop C");
    if (output_row_ && output_row_->size() != n) {
        throw DimensionError("closed-loop output row: expected 1x" + std::to_string(n));
    }
    a_r_ = reset_projector(n, n_reset_);
    j_ = Mat::Identity(n, n).leftCols(n - n_reset_);
}

ClosedLoopSystem ClosedLoopSystem::from_matrices(Mat a, const Mat& a_r, RowVec c,
                                                 std::optional<RowVec> output_row) {
    numerics::require_square(a, "closed-loop A");
    const auto n = a.rows();
    expect_shape(a_r, n, n, "closed-loop A_R");
    // Count the trailing zero block; everything before it must be the identity.
    Eigen::Index kept = 0;
    while (kept < n && a_r(kept, kept) == 1.0) {
        ++kept;
    }
    const Mat expected = reset_projector(n, n - kept);
    if (a_r != expected) {
        throw ArgumentError("closed-loop A_R: must be blockdiag(I, 0) with the reset states last");
    }
    return ClosedLoopSystem(std::move(a), std::move(c), n - kept, std::move(output_row));
}

SectorClosedLoop::SectorClosedLoop(Mat a, Mat a_r, Mat m)
    : a_(std::move(a)), a_r_(std::move(a_r)), m_(std::move(m)) {
    numerics::require_square(a_, "sector A");
    const auto n = a_.rows();
    expect_shape(a_, n, n, "sector A");
    expect_shape(a_r_, n, n, "sector A_R");
    expect_shape(m_, n, n, "sector M");
    if (m_ != m_.transpose()) {
        throw ArgumentError("sector M: must be symmetric");
    }
}

namespace {

struct Blocks {
    Eigen::Index nw, np, nr;
    Mat cw1, cw2;
};

Blocks layout(const std::optional<Exosystem>& exo, const LtiPlant& plant, const ResetController& ctrl) {
    Blocks b{exo ? exo->order() : 0, plant.order(), ctrl.order(), Mat(1, 0), Mat(1, 0)};
    if (exo) {
        b.cw1 = exo->c1();
        b.cw2 = exo->c2();
    }
    return b;
}

}  // namespace

ClosedLoopSystem build_closed_loop(const std::optional<Exosystem>& exo,
                                   const LtiPlant& plant,
                                   const ResetController& ctrl) {
    const auto [nw, np, nr, cw1, cw2] = layout(exo, plant, ctrl);
    const auto n = nw + np + nr;
    const Mat& bp = plant.b();
    const Mat& cp = plant.c();
    const Mat& br = ctrl.b();
    const Mat& cr = ctrl.c();
    const double dr = ctrl.d();

    Mat a = Mat::Zero(n, n);
    if (exo) {
        a.block(0, 0, nw, nw) = exo->a();
        a.block(nw, 0, np, nw) = bp * (dr * cw1 + cw2);
        a.block(nw + np, 0, nr, nw) = br * cw1;
    }
    a.block(nw, nw, np, np) = plant.a() - dr * bp * cp;
    a.block(nw, nw + np, np, nr) = bp * cr;
    a.block(nw + np, nw, nr, np) = -br * cp;
    a.block(nw + np, nw + np, nr, nr) = ctrl.a();

    RowVec c = RowVec::Zero(n);
    c.segment(0, nw) = cw1.row(0);
    c.segment(nw, np) = -cp.row(0);

    RowVec v = RowVec::Zero(n);
    v.segment(0, nw) = dr * cw1.row(0);
    v.segment(nw, np) = -dr * cp.row(0);
    v.segment(nw + np, nr) = cr.row(0);

    return ClosedLoopSystem(std::move(a), std::move(c), ctrl.n_reset(), std::move(v));
}

SectorClosedLoop build_sector_closed_loop(const std::optional<Exosystem>& exo,
                                          const LtiPlant& plant,
                                          const ResetController& ctrl) {
    const ClosedLoopSystem base = build_closed_loop(exo, plant, ctrl);
    const auto [nw, np, nr, cw1, cw2] = layout(exo, plant, ctrl);
    const auto n = nw + np + nr;
    const Mat& cp = plant.c();
    const Mat& cr = ctrl.c();

    Mat m = Mat::Zero(n, n);
    if (exo) {
        m.block(0, nw + np, nw, nr) = cw1.transpose() * cr;
        m.block(nw + np, 0, nr, nw) = cr.transpose() * cw1;
    }
    m.block(nw, nw + np, np, nr) = -cp.transpose() * cr;
    m.block(nw + np, nw, nr, np) = -cr.transpose() * cp;
    const Mat sym = 0.5 * (m + m.transpose());
    return SectorClosedLoop(base.a(), base.a_r(), sym);
}

}  // namespace reset_lab::model

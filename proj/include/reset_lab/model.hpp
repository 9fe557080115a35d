#pragma once

// Plants, reset controllers, exosystems and the closed-loop matrices they
// assemble into. All types are immutable values validated at construction.

#include <optional>

#include "reset_lab/numerics.hpp"

namespace reset_lab::model {

/// SISO plant  x_p' = A_p x_p + B_p u,  y_p = C_p x_p.
class LtiPlant {
  public:
    LtiPlant(Mat a, Mat b, Mat c);

    [[nodiscard]] const Mat& a() const { return a_; }
    [[nodiscard]] const Mat& b() const { return b_; }
    [[nodiscard]] const Mat& c() const { return c_; }
    [[nodiscard]] Eigen::Index order() const { return a_.rows(); }

  private:
    Mat a_, b_, c_;
};

/// Linear base controller whose last `n_reset` states are zeroed at every reset.
/// Output v = C_r x_r + D_r e.
class ResetController {
  public:
    ResetController(Mat a, Mat b, Mat c, double d, Eigen::Index n_reset);

    [[nodiscard]] const Mat& a() const { return a_; }
    [[nodiscard]] const Mat& b() const { return b_; }
    [[nodiscard]] const Mat& c() const { return c_; }
    [[nodiscard]] double d() const { return d_; }
    [[nodiscard]] Eigen::Index order() const { return a_.rows(); }
    [[nodiscard]] Eigen::Index n_reset() const { return n_reset_; }

    /// blockdiag(I, 0) acting on the controller state.
    [[nodiscard]] Mat reset_projector() const;

  private:
    Mat a_, b_, c_;
    double d_;
    Eigen::Index n_reset_;
};

/// Autonomous signal generator  x_w' = A_w x_w,  w1 = C_w1 x_w (reference),
/// w2 = C_w2 x_w (input disturbance).
class Exosystem {
  public:
    Exosystem(Mat a, Mat c1, Mat c2);

    [[nodiscard]] const Mat& a() const { return a_; }
    [[nodiscard]] const Mat& c1() const { return c1_; }
    [[nodiscard]] const Mat& c2() const { return c2_; }
    [[nodiscard]] Eigen::Index order() const { return a_.rows(); }

  private:
    Mat a_, c1_, c2_;
};

/// The autonomous zero-crossing reset system: flow x' = A x, jump x+ = A_R x
/// with q+ = -q, switching on the sign of q C x. The reset states are always
/// the last `n_reset` coordinates.
class ClosedLoopSystem {
  public:
    /// A_R is derived from n_reset. `output_row`, when known, maps x to the
    /// controller output v.
    ClosedLoopSystem(Mat a, RowVec c, Eigen::Index n_reset,
                     std::optional<RowVec> output_row = std::nullopt);

    /// Literal matrices; A_R must have the form blockdiag(I, 0).
    [[nodiscard]] static ClosedLoopSystem from_matrices(Mat a, const Mat& a_r, RowVec c,
                                                        std::optional<RowVec> output_row = std::nullopt);

    [[nodiscard]] const Mat& a() const { return a_; }
    [[nodiscard]] const Mat& a_r() const { return a_r_; }
    [[nodiscard]] const RowVec& c() const { return c_; }
    /// n x (n - n_reset) embedding of the non-reset coordinates.
    [[nodiscard]] const Mat& j() const { return j_; }
    [[nodiscard]] Eigen::Index dim() const { return a_.rows(); }
    [[nodiscard]] Eigen::Index n_reset() const { return n_reset_; }
    [[nodiscard]] Eigen::Index reduced_dim() const { return a_.rows() - n_reset_; }
    [[nodiscard]] const std::optional<RowVec>& output_row() const { return output_row_; }

    [[nodiscard]] double switching_value(const Vec& x) const { return c_.dot(x); }

  private:
    Mat a_, a_r_;
    RowVec c_;
    Eigen::Index n_reset_;
    Mat j_;
    std::optional<RowVec> output_row_;
};

/// Sector-law reset system: flow while x' M x >= 0, jump x+ = A_R x once
/// x' M x <= 0.
class SectorClosedLoop {
  public:
    SectorClosedLoop(Mat a, Mat a_r, Mat m);

    [[nodiscard]] const Mat& a() const { return a_; }
    [[nodiscard]] const Mat& a_r() const { return a_r_; }
    [[nodiscard]] const Mat& m() const { return m_; }
    [[nodiscard]] Eigen::Index dim() const { return a_.rows(); }

    [[nodiscard]] double sector_value(const Vec& x) const { return x.dot(m_ * x); }

  private:
    Mat a_, a_r_, m_;
};

/// blockdiag(I_{n_r - n_reset}, 0_{n_reset}).
[[nodiscard]] Mat reset_projector(Eigen::Index n_r, Eigen::Index n_reset);

/// Assembles A, A_R and C with the exosystem rows first, then the plant, then
/// the controller. Without an exosystem the first block row/column is dropped.
[[nodiscard]] ClosedLoopSystem build_closed_loop(const std::optional<Exosystem>& exo,
                                                 const LtiPlant& plant,
                                                 const ResetController& ctrl);

/// Same state layout; M is the quadratic form with x' M x = 2 e v, v = C_r x_r.
[[nodiscard]] SectorClosedLoop build_sector_closed_loop(const std::optional<Exosystem>& exo,
                                                        const LtiPlant& plant,
                                                        const ResetController& ctrl);

}  // namespace reset_lab::model

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mfcbf/barrier.hpp"
#include "mfcbf/error.hpp"

namespace mfcbf {

/// Per-component actuator limits, shared by every agent. Infinite entries are allowed.
class ControlBox {
public:
    ControlBox(Eigen::VectorXd lower, Eigen::VectorXd upper);
    static ControlBox unbounded(int control_dim);

    const Eigen::VectorXd& lower() const noexcept { return lower_; }
    const Eigen::VectorXd& upper() const noexcept { return upper_; }
    Eigen::Index dim() const noexcept { return lower_.size(); }

    bool contains(const Eigen::Ref<const Eigen::MatrixXd>& controls) const;
    Eigen::MatrixXd clip(const Eigen::Ref<const Eigen::MatrixXd>& controls) const;

    bool operator==(const ControlBox&) const = default;

private:
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
};

enum class QpStatus { nominal_safe, projected, infeasible };

const char* to_string(QpStatus status) noexcept;

struct QpReport {
    QpStatus status = QpStatus::nominal_safe;
    /// Scalar multiplier of the half-space row (largest row multiplier for the
    /// multi-row solver). +inf when infeasible.
    double lambda = 0.0;
    /// Half-space path: constraint slack sum c.q - b (negative means violated).
    /// Splitting path: max(primal, dual) residual at exit.
    double residual = 0.0;
    int iterations = 0;
    /// Largest value of sum c.q over the box (half-space path only).
    double achievable_sup = 0.0;
};

struct QpSolution {
    Eigen::MatrixXd controls;  // control_dim x n
    QpReport report;
};

struct ProjectionOptions {
    double tolerance = 1e-10;
    int max_iterations = 200;
};

/// Exact minimizer of sum_i w_i |q_i - q_nom_i|^2 subject to
/// sum_i c_i . q_i >= b and q_i in box, via the scalar dual
/// q_i(lambda) = clip(q_nom_i + lambda c_i / w_i).
/// Infeasible rows yield the lambda -> inf saturated control, flagged.
QpSolution project_halfspace_box(const Eigen::Ref<const Eigen::MatrixXd>& q_nom,
                                 const ConstraintRow& row, const ControlBox& box,
                                 const ProjectionOptions& opts = {});

/// Rows of the stacked program, each "A.row(r) . q >= lower_bounds[r]".
/// Column index of agent i, component c is i * control_dim + c.
struct StackedRows {
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
    Eigen::VectorXd lower_bounds;
};

struct DenseQpOptions {
    double tolerance = 1e-8;
    int max_iterations = 50000;
    double penalty = 1.0;
    double relaxation = 1.6;
    double regularization = 1e-6;
    double infeasibility_tolerance = 1e-7;
    int check_every = 10;
};

/// Operator-splitting (ADMM) solve of
///   min sum_i w_i |q_i - q_nom_i|^2  s.t.  rows, box.
/// The KKT system is factored densely once per call.
QpSolution solve_dense_qp(const Eigen::Ref<const Eigen::VectorXd>& weights,
                          const Eigen::Ref<const Eigen::MatrixXd>& q_nom, const StackedRows& rows,
                          const ControlBox& box, const DenseQpOptions& opts = {});

/// Thrown when the splitting iteration hits its cap. Carries the best iterate.
class QpNotConverged : public Error {
public:
    QpNotConverged(Eigen::MatrixXd best, double primal_residual, double dual_residual,
                   int iterations);

    const Eigen::MatrixXd& best() const noexcept { return best_; }
    double primal_residual() const noexcept { return primal_; }
    double dual_residual() const noexcept { return dual_; }
    int iterations() const noexcept { return iterations_; }

private:
    Eigen::MatrixXd best_;
    double primal_;
    double dual_;
    int iterations_;
};

}  // namespace mfcbf

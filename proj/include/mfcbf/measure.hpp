#pragma once

#include <Eigen/Dense>

#include "mfcbf/kernel.hpp"

namespace mfcbf {

/// Weighted Dirac sum. Points are stored column-wise (dim x n).
class EmpiricalMeasure {
public:
    /// Uniform weights 1/n.
    explicit EmpiricalMeasure(Eigen::MatrixXd points);
    EmpiricalMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights);

    Eigen::Index size() const noexcept { return points_.cols(); }
    Eigen::Index dim() const noexcept { return points_.rows(); }
    const Eigen::MatrixXd& points() const noexcept { return points_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd weights_;
};

/// Half squared MMD together with its derivatives with respect to every
/// particle of both measures. Computed in one pass over the Gram blocks.
struct MmdEvaluation {
    double value = 0.0;
    /// d(value)/d x_i for the first measure, dim x n.
    Eigen::MatrixXd grad_particles;
    /// d(value)/d y_j for the second measure, dim x m.
    Eigen::MatrixXd grad_targets;
};

MmdEvaluation mmd_evaluate(const KernelSpec& k, const EmpiricalMeasure& rho,
                           const EmpiricalMeasure& target);

/// 1/2 |mu_rho - mu_target|^2 in the kernel's RKHS.
double mmd_sq_half(const KernelSpec& k, const EmpiricalMeasure& rho,
                   const EmpiricalMeasure& target);

/// g_i = w_i [sum_j w_j grad_x K(x_i,x_j) - sum_j w'_j grad_x K(x_i,y_j)], dim x n.
Eigen::MatrixXd mmd_grad_particles(const KernelSpec& k, const EmpiricalMeasure& rho,
                                   const EmpiricalMeasure& target);

}  // namespace mfcbf

#pragma once

#include <Eigen/Dense>

#include "mfcbf/dynamics.hpp"
#include "mfcbf/kernel.hpp"
#include "mfcbf/measure.hpp"

namespace mfcbf {

enum class BarrierMode {
    avoidance,  // H = 1/2 MMD^2 - eps
    tracking,   // H = eps - 1/2 MMD^2
};

enum class ClassKFamily { linear, cubic };

/// alpha(x) = gamma x  or  gamma x^3.
class ClassKSpec {
public:
    ClassKSpec(ClassKFamily family, double gamma);

    ClassKFamily family() const noexcept { return family_; }
    double gamma() const noexcept { return gamma_; }
    double operator()(double x) const noexcept;

    bool operator==(const ClassKSpec&) const = default;

private:
    ClassKFamily family_;
    double gamma_;
};

double class_k(const ClassKSpec& a, double x);

class BarrierSpec {
public:
    BarrierSpec(BarrierMode mode, double epsilon, ClassKSpec alpha, KernelSpec kernel);

    BarrierMode mode() const noexcept { return mode_; }
    double epsilon() const noexcept { return epsilon_; }
    const ClassKSpec& alpha() const noexcept { return alpha_; }
    const KernelSpec& kernel() const noexcept { return kernel_; }

private:
    BarrierMode mode_;
    double epsilon_;
    ClassKSpec alpha_;
    KernelSpec kernel_;
};

/// Discretized K_CBF: the swarm controls q_i are admissible iff
///   sum_i coeffs.col(i) . q_i >= rhs.
/// Tracking barriers are negated at assembly, so this orientation holds in
/// both modes and drift_term / adversary_term already carry the mode's sign.
struct ConstraintRow {
    Eigen::MatrixXd coeffs;   // control_dim x n, c_i = B^T(s, x_i) g_i
    Eigen::VectorXd weights;  // agent weights, objective metric of the projection
    double rhs = 0.0;
    double drift_term = 0.0;      // sum_i g_i . A(s, x_i)
    double adversary_term = 0.0;  // partial_s H through the adversary's transport
    double h_value = 0.0;
    double alpha_value = 0.0;     // alpha(h_value)
    bool degenerate = false;      // |c| < 1e-10
};

double barrier_value(const BarrierSpec& spec, double s, const EmpiricalMeasure& rho,
                     const EmpiricalMeasure& target);

/// partial_s of 1/2 MMD^2 when target particle j moves with state velocity
/// v_target.col(j). Avoidance sign; tracking callers negate.
double adversary_term(const BarrierSpec& spec, const EmpiricalMeasure& rho,
                      const EmpiricalMeasure& target,
                      const Eigen::Ref<const Eigen::MatrixXd>& v_target);

ConstraintRow assemble_constraint(const BarrierSpec& spec, const DynamicsSpec& dyn, double s,
                                  const EmpiricalMeasure& rho, const EmpiricalMeasure& target,
                                  const Eigen::Ref<const Eigen::MatrixXd>& v_target);

/// dH/ds = drift_term + sum_i c_i . q_i + adversary_term.
double dh_ds_analytic(const ConstraintRow& row, const Eigen::Ref<const Eigen::MatrixXd>& controls);

}  // namespace mfcbf

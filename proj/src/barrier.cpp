#include "mfcbf/barrier.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mfcbf/error.hpp"
#include "summation.hpp"

namespace mfcbf {

ClassKSpec::ClassKSpec(ClassKFamily family, double gamma) : family_(family), gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidArgument("class-K gain gamma must be positive, got " + std::to_string(gamma));
}

double ClassKSpec::operator()(double x) const noexcept {
    switch (family_) {
        case ClassKFamily::linear:
            return gamma_ * x;
        case ClassKFamily::cubic:
            return gamma_ * x * x * x;
    }
    return 0.0;
}

double class_k(const ClassKSpec& a, double x) { return a(x); }

BarrierSpec::BarrierSpec(BarrierMode mode, double epsilon, ClassKSpec alpha, KernelSpec kernel)
    : mode_(mode), epsilon_(epsilon), alpha_(alpha), kernel_(kernel) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw InvalidArgument("barrier epsilon must be positive, got " + std::to_string(epsilon));
}

namespace {

double signed_h(const BarrierSpec& spec, double mmd) {
    return spec.mode() == BarrierMode::avoidance ? mmd - spec.epsilon() : spec.epsilon() - mmd;
}

double transport_term(const Eigen::MatrixXd& grad_targets,
                      const Eigen::Ref<const Eigen::MatrixXd>& v_target) {
    std::vector<double> terms(static_cast<std::size_t>(grad_targets.cols()));
    for (Eigen::Index j = 0; j < grad_targets.cols(); ++j)
        terms[j] = grad_targets.col(j).dot(v_target.col(j));
    return detail::pairwise_sum(terms);
}

void check_velocities(const EmpiricalMeasure& target,
                      const Eigen::Ref<const Eigen::MatrixXd>& v_target) {
    if (v_target.cols() != target.size())
        throw DimensionError("got " + std::to_string(v_target.cols()) +
                             " adversary velocities for " + std::to_string(target.size()) +
                             " adversary particles");
    if (v_target.rows() != target.dim())
        throw DimensionError("adversary velocities have dimension " +
                             std::to_string(v_target.rows()) + ", states have " +
                             std::to_string(target.dim()));
}

}  // namespace

double barrier_value(const BarrierSpec& spec, double, const EmpiricalMeasure& rho,
                     const EmpiricalMeasure& target) {
    return signed_h(spec, mmd_sq_half(spec.kernel(), rho, target));
}

double adversary_term(const BarrierSpec& spec, const EmpiricalMeasure& rho,
                      const EmpiricalMeasure& target,
                      const Eigen::Ref<const Eigen::MatrixXd>& v_target) {
    check_velocities(target, v_target);
    const MmdEvaluation e = mmd_evaluate(spec.kernel(), rho, target);
    return transport_term(e.grad_targets, v_target);
}

ConstraintRow assemble_constraint(const BarrierSpec& spec, const DynamicsSpec& dyn, double s,
                                  const EmpiricalMeasure& rho, const EmpiricalMeasure& target,
                                  const Eigen::Ref<const Eigen::MatrixXd>& v_target) {
    check_velocities(target, v_target);
    if (rho.dim() != dyn.state_dim())
        throw DimensionError("swarm states have dimension " + std::to_string(rho.dim()) +
                             ", model expects " + std::to_string(dyn.state_dim()));

    const MmdEvaluation e = mmd_evaluate(spec.kernel(), rho, target);
    const double sign = spec.mode() == BarrierMode::avoidance ? 1.0 : -1.0;
    const Eigen::Index n = rho.size();

    ConstraintRow row;
    row.weights = rho.weights();
    row.coeffs.resize(dyn.control_dim(), n);
    std::vector<double> drift_terms(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto xi = rho.points().col(i);
        const Eigen::VectorXd gi = sign * e.grad_particles.col(i);
        row.coeffs.col(i) = apply_control_transpose(dyn, s, xi, gi);
        drift_terms[i] = gi.dot(drift(dyn, s, xi));
    }
    row.drift_term = detail::pairwise_sum(drift_terms);
    row.adversary_term = sign * transport_term(e.grad_targets, v_target);
    row.h_value = signed_h(spec, e.value);
    row.alpha_value = spec.alpha()(row.h_value);
    row.rhs = -row.drift_term - row.adversary_term - row.alpha_value;
    row.degenerate = row.coeffs.norm() < 1e-10;
    return row;
}

double dh_ds_analytic(const ConstraintRow& row, const Eigen::Ref<const Eigen::MatrixXd>& controls) {
    if (controls.cols() != row.coeffs.cols() || controls.rows() != row.coeffs.rows())
        throw DimensionError("expected " + std::to_string(row.coeffs.cols()) +
                             " controls of dimension " + std::to_string(row.coeffs.rows()));
    std::vector<double> terms(static_cast<std::size_t>(controls.cols()));
    for (Eigen::Index i = 0; i < controls.cols(); ++i)
        terms[i] = row.coeffs.col(i).dot(controls.col(i));
    return row.drift_term + detail::pairwise_sum(terms) + row.adversary_term;
}

}  // namespace mfcbf

#pragma once

#include <Eigen/Dense>

namespace mfcbf {

enum class KernelFamily { gaussian, inverse_multiquadric };

/// Linear map C applied to states before the kernel sees them.
enum class Observation { full_state, position_only };

/// Symmetric positive-definite, translation-invariant kernel on observed states.
///
/// gaussian:             K = exp(-r^2 / (2 sigma^2))
/// inverse_multiquadric: K = (1 + r^2 / sigma^2)^(-1/2)
///
/// with r = |Cx - Cy|. Both families peak at K(x,x) = 1. For position_only the
/// first `position_dim` coordinates of a state are observed and the rest are
/// ignored; gradients are zero on the ignored coordinates.
class KernelSpec {
public:
    KernelSpec(KernelFamily family, double bandwidth,
               Observation observation = Observation::full_state, int position_dim = 0);

    KernelFamily family() const noexcept { return family_; }
    double bandwidth() const noexcept { return bandwidth_; }
    Observation observation() const noexcept { return observation_; }
    int position_dim() const noexcept { return position_dim_; }

    /// Number of leading coordinates the kernel sees for a state of size `state_dim`.
    int observed_dim(Eigen::Index state_dim) const;

    /// K as a function of the squared observed distance.
    double profile(double r2) const noexcept;

    /// -dK/d(r^2) * 2, i.e. grad_x K = -grad_scale(K) * C^T C (x - y).
    double grad_scale(double kval) const noexcept;

    bool operator==(const KernelSpec&) const = default;

private:
    KernelFamily family_;
    double bandwidth_;
    Observation observation_;
    int position_dim_;
    double inv_bw2_;
};

double eval(const KernelSpec& k, const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y);

Eigen::VectorXd grad_x(const KernelSpec& k, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace mfcbf

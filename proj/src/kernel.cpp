#include "mfcbf/kernel.hpp"

#include <cmath>
#include <string>

#include "mfcbf/error.hpp"

namespace mfcbf {

KernelSpec::KernelSpec(KernelFamily family, double bandwidth, Observation observation,
                       int position_dim)
    : family_(family),
      bandwidth_(bandwidth),
      observation_(observation),
      position_dim_(position_dim),
      inv_bw2_(0.0) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw InvalidArgument("kernel bandwidth must be positive and finite, got " +
                              std::to_string(bandwidth));
    if (observation == Observation::position_only && position_dim <= 0)
        throw InvalidArgument("position_only observation needs a positive position_dim");
    inv_bw2_ = 1.0 / (bandwidth * bandwidth);
}

int KernelSpec::observed_dim(Eigen::Index state_dim) const {
    if (observation_ == Observation::full_state) return static_cast<int>(state_dim);
    if (state_dim < position_dim_)
        throw DimensionError("state of size " + std::to_string(state_dim) +
                             " is smaller than the observed position block (" +
                             std::to_string(position_dim_) + ")");
    return position_dim_;
}

double KernelSpec::profile(double r2) const noexcept {
    switch (family_) {
        case KernelFamily::gaussian:
            return std::exp(-0.5 * r2 * inv_bw2_);
        case KernelFamily::inverse_multiquadric:
            return 1.0 / std::sqrt(1.0 + r2 * inv_bw2_);
    }
    return 0.0;
}

double KernelSpec::grad_scale(double kval) const noexcept {
    switch (family_) {
        case KernelFamily::gaussian:
            return kval * inv_bw2_;
        case KernelFamily::inverse_multiquadric:
            return kval * kval * kval * inv_bw2_;
    }
    return 0.0;
}

namespace {

void check_pair(const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (x.size() != y.size())
        throw DimensionError("kernel arguments differ in dimension: " +
                             std::to_string(x.size()) + " vs " + std::to_string(y.size()));
}

}  // namespace

double eval(const KernelSpec& k, const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y) {
    check_pair(x, y);
    const int od = k.observed_dim(x.size());
    return k.profile((x.head(od) - y.head(od)).squaredNorm());
}

Eigen::VectorXd grad_x(const KernelSpec& k, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y) {
    check_pair(x, y);
    const int od = k.observed_dim(x.size());
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    const Eigen::VectorXd diff = x.head(od) - y.head(od);
    const double kval = k.profile(diff.squaredNorm());
    g.head(od) = -k.grad_scale(kval) * diff;
    return g;
}

}  // namespace mfcbf

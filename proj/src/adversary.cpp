#include "mfcbf/adversary.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mfcbf/error.hpp"

namespace mfcbf {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd path_position(const std::vector<WaypointKnot>& knots, double s) {
    if (s <= knots.front().time) return to_eigen(knots.front().position);
    if (s >= knots.back().time) return to_eigen(knots.back().position);
    std::size_t k = 1;
    while (knots[k].time < s) ++k;
    const auto& a = knots[k - 1];
    const auto& b = knots[k];
    const double t = (s - a.time) / (b.time - a.time);
    return (1.0 - t) * to_eigen(a.position) + t * to_eigen(b.position);
}

}  // namespace

Eigen::VectorXd AdversaryField::spatial_velocity(double s) const {
    if (kind == Kind::constant_velocity) return to_eigen(velocity);
    const Eigen::Index d = static_cast<Eigen::Index>(knots.front().position.size());
    if (knots.size() < 2 || s < knots.front().time || s >= knots.back().time)
        return Eigen::VectorXd::Zero(d);
    std::size_t k = 1;
    while (knots[k].time <= s) ++k;
    const auto& a = knots[k - 1];
    const auto& b = knots[k];
    return (to_eigen(b.position) - to_eigen(a.position)) / (b.time - a.time);
}

Eigen::VectorXd AdversaryField::displacement(double s0, double s1) const {
    if (kind == Kind::constant_velocity) return (s1 - s0) * to_eigen(velocity);
    return path_position(knots, s1) - path_position(knots, s0);
}

Eigen::VectorXd adversary_velocity(const AdversaryField& field, const DynamicsSpec& dyn, double s,
                                   const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (!(s >= 0.0) || s > field.horizon * (1.0 + 1e-12))
        throw InvalidArgument("adversary velocity queried at s=" + std::to_string(s) +
                              " outside [0, " + std::to_string(field.horizon) + "]");
    if (x.size() != dyn.state_dim())
        throw DimensionError("adversary state has dimension " + std::to_string(x.size()) +
                             ", model expects " + std::to_string(dyn.state_dim()));
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dyn.state_dim());
    out.head(dyn.spatial_dim()) = field.spatial_velocity(s);
    if (!out.allFinite()) throw NumericalError("adversary velocity is not finite");
    return out;
}

void transport_adversary(const AdversaryField& field, const DynamicsSpec& dyn,
                         AdversaryIntegrator integrator, double s, double dt,
                         Eigen::MatrixXd& adversary) {
    const int d = dyn.spatial_dim();
    Eigen::VectorXd shift;
    if (integrator == AdversaryIntegrator::euler) {
        shift = dt * field.spatial_velocity(s);
    } else {
        // RK4 stages on each sub-interval between knots, where the field is smooth.
        std::vector<double> cuts{s};
        if (field.kind == AdversaryField::Kind::waypoint_path)
            for (const auto& k : field.knots)
                if (k.time > s && k.time < s + dt) cuts.push_back(k.time);
        cuts.push_back(s + dt);
        shift = Eigen::VectorXd::Zero(d);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], h = cuts[i + 1] - cuts[i];
            const Eigen::VectorXd k1 = field.spatial_velocity(a);
            const Eigen::VectorXd k2 = field.spatial_velocity(a + 0.5 * h);
            // The field is constant on a piece, so its left limit at the end equals k2.
            shift += h / 6.0 * (k1 + 5.0 * k2);
        }
    }
    adversary.topRows(d).colwise() += shift;
    if (dyn.model() == DynamicsModel::double_integrator)
        adversary.bottomRows(d).colwise() = field.spatial_velocity(s + dt);
}

}  // namespace mfcbf

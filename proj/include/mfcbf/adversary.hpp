#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mfcbf/dynamics.hpp"

namespace mfcbf {

struct WaypointKnot {
    double time = 0.0;
    std::vector<double> position;

    bool operator==(const WaypointKnot&) const = default;
};

/// Prescribed spatially uniform velocity field v(s) transporting the adversary.
struct AdversaryField {
    enum class Kind { constant_velocity, waypoint_path };

    Kind kind = Kind::constant_velocity;
    std::vector<double> velocity;       // constant_velocity, spatial_dim entries
    std::vector<WaypointKnot> knots;    // waypoint_path, strictly increasing times
    double horizon = std::numeric_limits<double>::infinity();

    /// Position-space velocity at time s. Zero outside the knot span of a path;
    /// at a knot the outgoing segment is used.
    Eigen::VectorXd spatial_velocity(double s) const;

    /// Position change between s0 and s1 (exact for both kinds).
    Eigen::VectorXd displacement(double s0, double s1) const;

    bool operator==(const AdversaryField& o) const {
        return kind == o.kind && velocity == o.velocity && knots == o.knots;
    }
};

/// State-space velocity of an adversary particle: v for single integrators,
/// (v, 0) for double integrators (position moves with v, its velocity block is
/// kept equal to v by the transport step).
Eigen::VectorXd adversary_velocity(const AdversaryField& field, const DynamicsSpec& dyn, double s,
                                   const Eigen::Ref<const Eigen::VectorXd>& x);

enum class AdversaryIntegrator { rk4, euler };

/// Moves every adversary column from time s to s + dt.
void transport_adversary(const AdversaryField& field, const DynamicsSpec& dyn,
                         AdversaryIntegrator integrator, double s, double dt,
                         Eigen::MatrixXd& adversary);

}  // namespace mfcbf

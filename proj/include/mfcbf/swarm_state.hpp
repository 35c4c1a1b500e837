#pragma once

#include <Eigen/Dense>

namespace mfcbf {

/// Controlled agents and adversary particles at one instant. States are columns.
struct SwarmState {
    double time = 0.0;
    Eigen::MatrixXd agents;     // state_dim x n
    Eigen::MatrixXd adversary;  // state_dim x m
};

}  // namespace mfcbf

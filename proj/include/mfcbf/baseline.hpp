#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mfcbf/barrier.hpp"
#include "mfcbf/dynamics.hpp"
#include "mfcbf/qp.hpp"

namespace mfcbf {

/// h_i(z_i) = |z_i - center|^2 - radius^2 for one agent. `center` lives in state space.
struct SphereBarrier {
    int agent = 0;
    Eigen::VectorXd center;
    double radius = 0.0;

    bool operator==(const SphereBarrier& o) const {
        return agent == o.agent && radius == o.radius && center.size() == o.center.size() &&
               center == o.center;
    }
};

/// Finite-dimensional swarm CBF: one barrier per unordered agent pair,
/// h_ij = |z_i - z_j|^2 - safe_distance^2, plus optional per-agent spheres.
class PairwiseSpec {
public:
    PairwiseSpec(double safe_distance, ClassKSpec alpha, std::vector<SphereBarrier> individual = {});

    double safe_distance() const noexcept { return safe_distance_; }
    const ClassKSpec& alpha() const noexcept { return alpha_; }
    const std::vector<SphereBarrier>& individual() const noexcept { return individual_; }

private:
    double safe_distance_;
    ClassKSpec alpha_;
    std::vector<SphereBarrier> individual_;
};

struct PairwiseRows {
    StackedRows rows;
    Eigen::VectorXd h_values;  // barrier value behind each row
};

/// Pair rows (i < j, lexicographic) followed by individual-barrier rows.
PairwiseRows pairwise_constraints(const PairwiseSpec& spec, const DynamicsSpec& dyn, double s,
                                  const Eigen::Ref<const Eigen::MatrixXd>& states);

QpSolution solve_pairwise_cbf(const PairwiseSpec& spec, const DynamicsSpec& dyn, double s,
                              const Eigen::Ref<const Eigen::MatrixXd>& states,
                              const Eigen::Ref<const Eigen::MatrixXd>& q_nom, const ControlBox& box,
                              const DenseQpOptions& opts = {});

}  // namespace mfcbf

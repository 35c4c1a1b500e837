#include "mfcbf/baseline.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseCore>

#include "mfcbf/error.hpp"

namespace mfcbf {

PairwiseSpec::PairwiseSpec(double safe_distance, ClassKSpec alpha,
                           std::vector<SphereBarrier> individual)
    : safe_distance_(safe_distance), alpha_(alpha), individual_(std::move(individual)) {
    if (!(safe_distance > 0.0) || !std::isfinite(safe_distance))
        throw InvalidArgument("pairwise safe distance must be positive");
    for (const auto& b : individual_) {
        if (b.agent < 0) throw InvalidArgument("individual barrier agent index is negative");
        if (!(b.radius > 0.0)) throw InvalidArgument("individual barrier radius must be positive");
    }
}

PairwiseRows pairwise_constraints(const PairwiseSpec& spec, const DynamicsSpec& dyn, double s,
                                  const Eigen::Ref<const Eigen::MatrixXd>& states) {
    const Eigen::Index n = states.cols();
    const int sd = dyn.state_dim();
    const int m = dyn.control_dim();
    if (n < 1) throw InvalidArgument("pairwise filter needs at least one agent");
    if (states.rows() != sd)
        throw DimensionError("agent states have dimension " + std::to_string(states.rows()) +
                             ", model expects " + std::to_string(sd));
    for (const auto& b : spec.individual()) {
        if (b.agent >= n)
            throw DimensionError("individual barrier refers to agent " + std::to_string(b.agent) +
                                 " of " + std::to_string(n));
        if (b.center.size() != sd)
            throw DimensionError("individual barrier center must have the state dimension");
    }

    const Eigen::Index pairs = n * (n - 1) / 2;
    const Eigen::Index nrows = pairs + static_cast<Eigen::Index>(spec.individual().size());

    std::vector<Eigen::VectorXd> drifts(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) drifts[i] = drift(dyn, s, states.col(i));

    PairwiseRows out;
    out.h_values.resize(nrows);
    out.rows.lower_bounds.resize(nrows);
    out.rows.matrix.resize(nrows, n * m);
    out.rows.matrix.reserve(Eigen::VectorXi::Constant(nrows, 2 * m));

    const double eps2 = spec.safe_distance() * spec.safe_distance();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j, ++r) {
            const Eigen::VectorXd grad = 2.0 * (states.col(i) - states.col(j));
            const double h = 0.25 * grad.squaredNorm() - eps2;
            const Eigen::VectorXd ci = apply_control_transpose(dyn, s, states.col(i), grad);
            for (int c = 0; c < m; ++c) {
                out.rows.matrix.insert(r, i * m + c) = ci[c];
                out.rows.matrix.insert(r, j * m + c) = -ci[c];
            }
            out.h_values[r] = h;
            out.rows.lower_bounds[r] = -spec.alpha()(h) - grad.dot(drifts[i] - drifts[j]);
        }
    }
    for (const auto& b : spec.individual()) {
        const Eigen::VectorXd grad = 2.0 * (states.col(b.agent) - b.center);
        const double h = 0.25 * grad.squaredNorm() - b.radius * b.radius;
        const Eigen::VectorXd ci = apply_control_transpose(dyn, s, states.col(b.agent), grad);
        for (int c = 0; c < m; ++c) out.rows.matrix.insert(r, b.agent * m + c) = ci[c];
        out.h_values[r] = h;
        out.rows.lower_bounds[r] = -spec.alpha()(h) - grad.dot(drifts[b.agent]);
        ++r;
    }
    out.rows.matrix.makeCompressed();
    return out;
}

QpSolution solve_pairwise_cbf(const PairwiseSpec& spec, const DynamicsSpec& dyn, double s,
                              const Eigen::Ref<const Eigen::MatrixXd>& states,
                              const Eigen::Ref<const Eigen::MatrixXd>& q_nom, const ControlBox& box,
                              const DenseQpOptions& opts) {
    const PairwiseRows rows = pairwise_constraints(spec, dyn, s, states);
    return solve_dense_qp(Eigen::VectorXd::Ones(states.cols()), q_nom, rows.rows, box, opts);
}

}  // namespace mfcbf

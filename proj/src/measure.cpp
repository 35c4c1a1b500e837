#include "mfcbf/measure.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mfcbf/error.hpp"
#include "summation.hpp"

namespace mfcbf {

EmpiricalMeasure::EmpiricalMeasure(Eigen::MatrixXd points)
    : EmpiricalMeasure(points,
                       Eigen::VectorXd::Constant(points.cols(),
                                                 points.cols() > 0 ? 1.0 / points.cols() : 0.0)) {}

EmpiricalMeasure::EmpiricalMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.cols() < 1) throw InvalidArgument("empirical measure needs at least one particle");
    if (points_.rows() < 1) throw DimensionError("empirical measure particles have dimension 0");
    if (weights_.size() != points_.cols())
        throw DimensionError("measure has " + std::to_string(points_.cols()) + " particles but " +
                             std::to_string(weights_.size()) + " weights");
    if (!points_.allFinite()) throw NumericalError("measure particles must be finite");
    for (Eigen::Index i = 0; i < weights_.size(); ++i)
        if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
            throw InvalidArgument("measure weight " + std::to_string(i) + " is negative or non-finite");
    if (std::abs(weights_.sum() - 1.0) > 1e-12)
        throw InvalidArgument("measure weights must sum to 1");
}

namespace {

// Gram block entries and their gradient scales for one pair of particle sets.
struct GramBlock {
    Eigen::MatrixXd k;      // K(a_i, b_j)
    Eigen::MatrixXd scale;  // grad_x K(a_i, b_j) = -scale_ij * C^T C (a_i - b_j)
};

GramBlock gram(const KernelSpec& ks, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
               int od, bool symmetric) {
    GramBlock g{Eigen::MatrixXd(a.cols(), b.cols()), Eigen::MatrixXd(a.cols(), b.cols())};
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        const Eigen::Index i0 = symmetric ? j : 0;
        for (Eigen::Index i = i0; i < a.cols(); ++i) {
            double r2 = 0.0;
            for (int c = 0; c < od; ++c) {
                const double d = a(c, i) - b(c, j);
                r2 += d * d;
            }
            const double kv = ks.profile(r2);
            g.k(i, j) = kv;
            g.scale(i, j) = ks.grad_scale(kv);
            if (symmetric) {
                g.k(j, i) = kv;
                g.scale(j, i) = g.scale(i, j);
            }
        }
    }
    return g;
}

// sum_i wa_i sum_j wb_j K_ij with pairwise reduction at both levels.
double weighted_double_sum(const Eigen::MatrixXd& k, const Eigen::VectorXd& wa,
                           const Eigen::VectorXd& wb, std::vector<double>& row,
                           std::vector<double>& outer) {
    outer.resize(static_cast<std::size_t>(k.rows()));
    row.resize(static_cast<std::size_t>(k.cols()));
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
        for (Eigen::Index j = 0; j < k.cols(); ++j) row[j] = wb[j] * k(i, j);
        outer[i] = wa[i] * detail::pairwise_sum(row);
    }
    return detail::pairwise_sum(outer);
}

// grad of 1/2 MMD^2 with respect to every particle of `self`:
// w_i [sum_j w_j grad K(s_i, s_j) - sum_j w'_j grad K(s_i, o_j)].
Eigen::MatrixXd particle_gradients(const Eigen::MatrixXd& self, const Eigen::VectorXd& ws,
                                   const GramBlock& self_block, const Eigen::MatrixXd& other,
                                   const Eigen::VectorXd& wo, const Eigen::MatrixXd& cross_scale,
                                   int od, std::vector<double>& buf) {
    const Eigen::Index n = self.cols();
    const Eigen::Index m = other.cols();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(self.rows(), n);
    buf.resize(static_cast<std::size_t>(n + m));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (ws[i] == 0.0) continue;
        for (int c = 0; c < od; ++c) {
            const double xi = self(c, i);
            for (Eigen::Index j = 0; j < n; ++j)
                buf[j] = ws[j] * self_block.scale(i, j) * (xi - self(c, j));
            for (Eigen::Index j = 0; j < m; ++j)
                buf[n + j] = -wo[j] * cross_scale(i, j) * (xi - other(c, j));
            g(c, i) = -ws[i] * detail::pairwise_sum(buf);
        }
    }
    return g;
}

void check_compatible(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (a.dim() != b.dim())
        throw DimensionError("measures live in different dimensions: " + std::to_string(a.dim()) +
                             " vs " + std::to_string(b.dim()));
}

MmdEvaluation evaluate(const KernelSpec& k, const EmpiricalMeasure& rho,
                       const EmpiricalMeasure& target, bool with_gradients) {
    check_compatible(rho, target);
    const int od = k.observed_dim(rho.dim());
    const auto& x = rho.points();
    const auto& y = target.points();
    const auto& wx = rho.weights();
    const auto& wy = target.weights();

    const GramBlock kxx = gram(k, x, x, od, true);
    const GramBlock kxy = gram(k, x, y, od, false);
    const GramBlock kyy = gram(k, y, y, od, true);

    std::vector<double> row;
    std::vector<double> outer;
    const double sxx = weighted_double_sum(kxx.k, wx, wx, row, outer);
    const double sxy = weighted_double_sum(kxy.k, wx, wy, row, outer);
    const double syy = weighted_double_sum(kyy.k, wy, wy, row, outer);

    MmdEvaluation out;
    out.value = 0.5 * (sxx - 2.0 * sxy + syy);
    if (!with_gradients) return out;
    out.grad_particles = particle_gradients(x, wx, kxx, y, wy, kxy.scale, od, row);
    const Eigen::MatrixXd kyx_scale = kxy.scale.transpose();
    out.grad_targets = particle_gradients(y, wy, kyy, x, wx, kyx_scale, od, row);
    return out;
}

}  // namespace

MmdEvaluation mmd_evaluate(const KernelSpec& k, const EmpiricalMeasure& rho,
                           const EmpiricalMeasure& target) {
    return evaluate(k, rho, target, true);
}

double mmd_sq_half(const KernelSpec& k, const EmpiricalMeasure& rho,
                   const EmpiricalMeasure& target) {
    return evaluate(k, rho, target, false).value;
}

Eigen::MatrixXd mmd_grad_particles(const KernelSpec& k, const EmpiricalMeasure& rho,
                                   const EmpiricalMeasure& target) {
    return mmd_evaluate(k, rho, target).grad_particles;
}

}  // namespace mfcbf

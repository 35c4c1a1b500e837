#include "mfcbf/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>

#include "summation.hpp"

namespace mfcbf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ControlBox::ControlBox(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size())
        throw DimensionError("control box bounds differ in dimension");
    for (Eigen::Index c = 0; c < lower_.size(); ++c) {
        if (std::isnan(lower_[c]) || std::isnan(upper_[c]))
            throw NumericalError("control box bound is NaN");
        if (lower_[c] > upper_[c])
            throw InvalidArgument("control box lower bound exceeds upper bound in component " +
                                  std::to_string(c));
    }
}

ControlBox ControlBox::unbounded(int control_dim) {
    return ControlBox(Eigen::VectorXd::Constant(control_dim, -kInf),
                      Eigen::VectorXd::Constant(control_dim, kInf));
}

bool ControlBox::contains(const Eigen::Ref<const Eigen::MatrixXd>& controls) const {
    for (Eigen::Index i = 0; i < controls.cols(); ++i)
        for (Eigen::Index c = 0; c < controls.rows(); ++c)
            if (!(controls(c, i) >= lower_[c] && controls(c, i) <= upper_[c])) return false;
    return true;
}

Eigen::MatrixXd ControlBox::clip(const Eigen::Ref<const Eigen::MatrixXd>& controls) const {
    Eigen::MatrixXd out(controls.rows(), controls.cols());
    for (Eigen::Index i = 0; i < controls.cols(); ++i)
        for (Eigen::Index c = 0; c < controls.rows(); ++c)
            out(c, i) = std::clamp(controls(c, i), lower_[c], upper_[c]);
    return out;
}

const char* to_string(QpStatus status) noexcept {
    switch (status) {
        case QpStatus::nominal_safe:
            return "nominal_safe";
        case QpStatus::projected:
            return "projected";
        case QpStatus::infeasible:
            return "infeasible";
    }
    return "unknown";
}

QpNotConverged::QpNotConverged(Eigen::MatrixXd best, double primal_residual,
                               double dual_residual, int iterations)
    : Error("QP splitting iteration did not converge after " + std::to_string(iterations) +
            " iterations (primal " + std::to_string(primal_residual) + ", dual " +
            std::to_string(dual_residual) + ")"),
      best_(std::move(best)),
      primal_(primal_residual),
      dual_(dual_residual),
      iterations_(iterations) {}

// ---------------------------------------------------------------------------
// Single half-space + box: scalar dual bisection.

namespace {

class HalfspaceDual {
public:
    HalfspaceDual(const Eigen::Ref<const Eigen::MatrixXd>& q_nom, const ConstraintRow& row,
                  const ControlBox& box)
        : q_nom_(q_nom), row_(row), box_(box), terms_(static_cast<std::size_t>(q_nom.cols())) {}

    Eigen::MatrixXd controls(double lambda) const {
        Eigen::MatrixXd q(q_nom_.rows(), q_nom_.cols());
        for (Eigen::Index i = 0; i < q.cols(); ++i) {
            const double w = row_.weights[i];
            for (Eigen::Index c = 0; c < q.rows(); ++c) {
                const double free = w > 0.0 ? q_nom_(c, i) + lambda * row_.coeffs(c, i) / w
                                            : q_nom_(c, i);
                q(c, i) = std::clamp(free, box_.lower()[c], box_.upper()[c]);
            }
        }
        return q;
    }

    double phi(const Eigen::MatrixXd& q) {
        for (Eigen::Index i = 0; i < q.cols(); ++i) terms_[i] = row_.coeffs.col(i).dot(q.col(i));
        return detail::pairwise_sum(terms_);
    }

    double phi(double lambda) { return phi(controls(lambda)); }

    // lambda -> inf limit of q(lambda), and the smallest lambda at which it is
    // reached (inf when some coordinate is unbounded in its push direction).
    Eigen::MatrixXd saturated(double& lambda_reached) const {
        Eigen::MatrixXd q = box_.clip(q_nom_);
        lambda_reached = 0.0;
        for (Eigen::Index i = 0; i < q.cols(); ++i) {
            const double w = row_.weights[i];
            if (!(w > 0.0)) continue;
            for (Eigen::Index c = 0; c < q.rows(); ++c) {
                const double ci = row_.coeffs(c, i);
                if (ci == 0.0) continue;
                const double bound = ci > 0.0 ? box_.upper()[c] : box_.lower()[c];
                q(c, i) = bound;
                const double reach = (bound - q_nom_(c, i)) * w / ci;
                lambda_reached = std::max(lambda_reached, reach);
            }
        }
        return q;
    }

private:
    const Eigen::Ref<const Eigen::MatrixXd>& q_nom_;
    const ConstraintRow& row_;
    const ControlBox& box_;
    std::vector<double> terms_;
};

}  // namespace

QpSolution project_halfspace_box(const Eigen::Ref<const Eigen::MatrixXd>& q_nom,
                                 const ConstraintRow& row, const ControlBox& box,
                                 const ProjectionOptions& opts) {
    if (q_nom.rows() != row.coeffs.rows() || q_nom.cols() != row.coeffs.cols())
        throw DimensionError("nominal controls are " + std::to_string(q_nom.rows()) + "x" +
                             std::to_string(q_nom.cols()) + ", constraint row expects " +
                             std::to_string(row.coeffs.rows()) + "x" +
                             std::to_string(row.coeffs.cols()));
    if (box.dim() != q_nom.rows()) throw DimensionError("control box dimension mismatch");
    if (row.weights.size() != q_nom.cols()) throw DimensionError("row weights count mismatch");
    if (!q_nom.allFinite()) throw NumericalError("nominal controls contain NaN or Inf");
    if (!row.coeffs.allFinite() || !std::isfinite(row.rhs))
        throw NumericalError("constraint row contains NaN or Inf");

    HalfspaceDual dual(q_nom, row, box);
    const double b = row.rhs;

    QpSolution out;
    if (box.contains(q_nom)) {
        const double slack = dual.phi(Eigen::MatrixXd(q_nom)) - b;
        if (slack >= 0.0) {
            out.controls = q_nom;
            out.report = {QpStatus::nominal_safe, 0.0, slack, 0, kInf};
            return out;
        }
    }

    double lambda_sat = 0.0;
    Eigen::MatrixXd q_sat = dual.saturated(lambda_sat);
    const double sup = std::isinf(lambda_sat) ? kInf : dual.phi(q_sat);
    out.report.achievable_sup = sup;

    if (sup < b - opts.tolerance) {
        out.controls = std::move(q_sat);
        out.report.status = QpStatus::infeasible;
        out.report.lambda = kInf;
        out.report.residual = sup - b;
        return out;
    }

    out.report.status = QpStatus::projected;
    double phi_lo = dual.phi(0.0);
    if (phi_lo >= b) {
        // Clipping alone restores feasibility.
        out.controls = dual.controls(0.0);
        out.report.residual = phi_lo - b;
        return out;
    }
    if (sup < b) {
        // Reachable only at saturation, within tolerance.
        out.controls = std::move(q_sat);
        out.report.lambda = lambda_sat;
        out.report.residual = sup - b;
        return out;
    }

    double lo = 0.0;
    double hi = 1.0;
    double phi_hi = dual.phi(hi);
    int it = 0;
    while (phi_hi < b) {
        lo = hi;
        phi_lo = phi_hi;
        hi *= 2.0;
        phi_hi = dual.phi(hi);
        if (++it > 2000) throw NumericalError("half-space projection failed to bracket the multiplier");
    }
    int bisections = 0;
    while (phi_hi - b > opts.tolerance && bisections < opts.max_iterations &&
           hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
        const double mid = 0.5 * (lo + hi);
        const double pm = dual.phi(mid);
        if (pm >= b) {
            hi = mid;
            phi_hi = pm;
        } else {
            lo = mid;
            phi_lo = pm;
        }
        ++bisections;
    }
    // phi is piecewise linear; one secant step on the final bracket is exact
    // when no breakpoint remains inside it.
    if (phi_hi > phi_lo) {
        const double sec = lo + (b - phi_lo) * (hi - lo) / (phi_hi - phi_lo);
        if (sec > lo && sec < hi) {
            const double ps = dual.phi(sec);
            if (ps >= b && ps < phi_hi) {
                hi = sec;
                phi_hi = ps;
            }
        }
    }
    out.controls = dual.controls(hi);
    out.report.lambda = hi;
    out.report.residual = phi_hi - b;
    out.report.iterations = it + bisections;
    return out;
}

// ---------------------------------------------------------------------------
// Multi-row + box: OSQP-style ADMM with a dense KKT factorization.

QpSolution solve_dense_qp(const Eigen::Ref<const Eigen::VectorXd>& weights,
                          const Eigen::Ref<const Eigen::MatrixXd>& q_nom, const StackedRows& rows,
                          const ControlBox& box, const DenseQpOptions& opts) {
    const Eigen::Index m = q_nom.rows();
    const Eigen::Index n = q_nom.cols();
    const Eigen::Index nv = m * n;
    if (weights.size() != n) throw DimensionError("one objective weight per agent expected");
    if (box.dim() != m) throw DimensionError("control box dimension mismatch");
    if (rows.matrix.cols() != nv)
        throw DimensionError("stacked rows have " + std::to_string(rows.matrix.cols()) +
                             " columns, expected " + std::to_string(nv));
    if (rows.lower_bounds.size() != rows.matrix.rows())
        throw DimensionError("one bound per stacked row expected");
    if (!q_nom.allFinite() || !rows.lower_bounds.allFinite())
        throw NumericalError("QP data contains NaN or Inf");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(weights[i] > 0.0)) throw InvalidArgument("objective weights must be positive");

    const Eigen::Map<const Eigen::VectorXd> x_nom(q_nom.data(), nv);
    const Eigen::Index nr = rows.matrix.rows();

    QpSolution out;
    if (box.contains(q_nom)) {
        const Eigen::VectorXd ax = rows.matrix * x_nom;
        const double slack = nr > 0 ? (ax - rows.lower_bounds).minCoeff() : kInf;
        if (slack >= 0.0) {
            out.controls = q_nom;
            out.report.status = QpStatus::nominal_safe;
            return out;
        }
    }
    if (nr == 0) {
        out.controls = box.clip(q_nom);
        out.report.status = QpStatus::projected;
        return out;
    }

    // Box rows only for components with at least one finite bound.
    std::vector<Eigen::Index> boxed;
    for (Eigen::Index k = 0; k < nv; ++k) {
        const Eigen::Index c = k % m;
        if (std::isfinite(box.lower()[c]) || std::isfinite(box.upper()[c])) boxed.push_back(k);
    }
    const Eigen::Index nb = static_cast<Eigen::Index>(boxed.size());
    const Eigen::Index nc = nr + nb;

    Eigen::VectorXd lo(nc), up(nc);
    lo.head(nr) = rows.lower_bounds;
    up.head(nr).setConstant(kInf);
    for (Eigen::Index r = 0; r < nb; ++r) {
        lo[nr + r] = box.lower()[boxed[r] % m];
        up[nr + r] = box.upper()[boxed[r] % m];
    }

    Eigen::VectorXd pdiag(nv);
    for (Eigen::Index k = 0; k < nv; ++k) pdiag[k] = 2.0 * weights[k / m];
    const Eigen::VectorXd lin = -pdiag.cwiseProduct(x_nom);

    const double rho = opts.penalty;
    const double sigma = opts.regularization;
    const double alpha = opts.relaxation;

    const Eigen::SparseMatrix<double> at = rows.matrix.transpose();
    const Eigen::MatrixXd ata = at * rows.matrix;
    Eigen::LLT<Eigen::MatrixXd> llt;
    auto factor = [&] {
        Eigen::MatrixXd kkt = ata * rho;
        for (Eigen::Index k = 0; k < nv; ++k) kkt(k, k) += pdiag[k] + sigma;
        for (Eigen::Index r = 0; r < nb; ++r) kkt(boxed[r], boxed[r]) += rho;
        llt.compute(kkt);
        if (llt.info() != Eigen::Success) throw NumericalError("QP KKT factorization failed");
    };
    factor();

    auto apply_a = [&](const Eigen::VectorXd& x, Eigen::VectorXd& ax) {
        ax.head(nr) = rows.matrix * x;
        for (Eigen::Index r = 0; r < nb; ++r) ax[nr + r] = x[boxed[r]];
    };
    auto apply_at = [&](const Eigen::VectorXd& y, Eigen::VectorXd& aty) {
        aty = at * y.head(nr);
        for (Eigen::Index r = 0; r < nb; ++r) aty[boxed[r]] += y[nr + r];
    };

    Eigen::MatrixXd start = box.clip(q_nom);
    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(start.data(), nv);
    Eigen::VectorXd z(nc), y = Eigen::VectorXd::Zero(nc), y_prev(nc);
    apply_a(x, z);
    z = z.cwiseMax(lo).cwiseMin(up);

    Eigen::VectorXd rhs(nv), xt(nv), zt(nc), zh(nc), aty(nv), ax(nc), dy(nc), atdy(nv);
    Eigen::VectorXd best = x;
    double best_score = kInf, best_prim = kInf, best_dual = kInf;

    for (int it = 1; it <= opts.max_iterations; ++it) {
        apply_at(rho * z - y, aty);
        rhs = sigma * x - lin + aty;
        xt = llt.solve(rhs);
        apply_a(xt, zt);
        x = alpha * xt + (1.0 - alpha) * x;
        zh = alpha * zt + (1.0 - alpha) * z;
        y_prev = y;
        z = (zh + y / rho).cwiseMax(lo).cwiseMin(up);
        y += rho * (zh - z);

        if (it % opts.check_every != 0 && it != opts.max_iterations) continue;

        apply_a(x, ax);
        const double prim = (ax - z).lpNorm<Eigen::Infinity>();
        apply_at(y, aty);
        const double dual = (pdiag.cwiseProduct(x) + lin + aty).lpNorm<Eigen::Infinity>();
        if (std::max(prim, dual) < best_score) {
            best_score = std::max(prim, dual);
            best_prim = prim;
            best_dual = dual;
            best = x;
        }
        if (prim <= opts.tolerance && dual <= opts.tolerance) {
            out.controls = Eigen::Map<const Eigen::MatrixXd>(x.data(), m, n);
            out.report.status = QpStatus::projected;
            out.report.lambda = std::max(0.0, -y.head(nr).minCoeff());
            out.report.residual = std::max(prim, dual);
            out.report.iterations = it;
            return out;
        }

        // Primal infeasibility certificate on the last dual increment.
        dy = y - y_prev;
        const double dy_norm = dy.lpNorm<Eigen::Infinity>();
        if (dy_norm > 0.0) {
            const double eps = opts.infeasibility_tolerance * dy_norm;
            apply_at(dy, atdy);
            bool bounded = atdy.lpNorm<Eigen::Infinity>() <= eps;
            double support = 0.0;
            for (Eigen::Index r = 0; bounded && r < nc; ++r) {
                if (dy[r] > eps) {
                    if (std::isinf(up[r])) bounded = false;
                    else support += up[r] * dy[r];
                } else if (dy[r] < -eps) {
                    if (std::isinf(lo[r])) bounded = false;
                    else support += lo[r] * dy[r];
                }
            }
            if (bounded && support < -eps) {
                out.controls = Eigen::Map<const Eigen::MatrixXd>(x.data(), m, n);
                out.report.status = QpStatus::infeasible;
                out.report.lambda = kInf;
                out.report.residual = prim;
                out.report.iterations = it;
                return out;
            }
        }
    }
    throw QpNotConverged(Eigen::Map<const Eigen::MatrixXd>(best.data(), m, n), best_prim,
                         best_dual, opts.max_iterations);
}

}  // namespace mfcbf

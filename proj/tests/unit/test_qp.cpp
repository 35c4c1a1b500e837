#include "doctest.h"

#include <limits>
#include <random>

#include "mfcbf/error.hpp"
#include "mfcbf/qp.hpp"

using namespace mfcbf;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConstraintRow make_row(const MatrixXd& c, double b, VectorXd w = {}) {
    ConstraintRow r;
    r.coeffs = c;
    r.rhs = b;
    r.weights = w.size() ? w : VectorXd::Constant(c.cols(), 1.0 / c.cols());
    return r;
}

StackedRows stack(const MatrixXd& dense, const VectorXd& lb) {
    StackedRows s;
    s.matrix = dense.sparseView();
    s.lower_bounds = lb;
    return s;
}

ControlBox box2(double lo, double hi) {
    return ControlBox(VectorXd::Constant(2, lo), VectorXd::Constant(2, hi));
}

}  // namespace

TEST_CASE("control box") {
    const ControlBox b = box2(-1, 1);
    CHECK(b.contains(MatrixXd::Constant(2, 3, 0.5)));
    CHECK_FALSE(b.contains(MatrixXd::Constant(2, 3, 1.5)));
    CHECK(b.clip(MatrixXd::Constant(2, 1, 4.0)) == MatrixXd::Constant(2, 1, 1.0));
    CHECK(ControlBox::unbounded(3).contains(MatrixXd::Constant(3, 2, 1e300)));
    CHECK_THROWS_AS(ControlBox(VectorXd::Constant(2, 1.0), VectorXd::Constant(2, 0.0)), InvalidArgument);
    CHECK_THROWS_AS(ControlBox(VectorXd::Zero(2), VectorXd::Zero(3)), DimensionError);
}

TEST_CASE("half-space projection examples") {
    SUBCASE("nominal already safe") {
        const MatrixXd q = MatrixXd::Constant(2, 1, 0.3);
        const QpSolution s = project_halfspace_box(q, make_row(MatrixXd::Constant(2, 1, 1.0), 0.1), box2(-1, 1));
        CHECK(s.report.status == QpStatus::nominal_safe);
        CHECK(s.report.lambda == 0.0);
        CHECK(s.controls == q);
    }
    SUBCASE("unbounded closed form") {
        const QpSolution s = project_halfspace_box(MatrixXd::Zero(2, 1),
                                                   make_row((MatrixXd(2, 1) << 1, 0).finished(), 1.0, VectorXd::Ones(1)),
                                                   ControlBox::unbounded(2));
        CHECK(s.report.status == QpStatus::projected);
        CHECK(s.controls(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(s.controls(1, 0)) <= 1e-15);
        CHECK(s.report.lambda == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("inside the box") {
        const QpSolution s = project_halfspace_box(MatrixXd::Zero(2, 1),
                                                   make_row(MatrixXd::Constant(2, 1, 1.0), 1.5), box2(-1, 1));
        CHECK(s.controls(0, 0) == doctest::Approx(0.75).epsilon(1e-10));
        CHECK(s.controls(1, 0) == doctest::Approx(0.75).epsilon(1e-10));
    }
    SUBCASE("infeasible") {
        const QpSolution s = project_halfspace_box(MatrixXd::Zero(2, 1),
                                                   make_row(MatrixXd::Constant(2, 1, 1.0), 4.0), box2(-1, 1));
        CHECK(s.report.status == QpStatus::infeasible);
        CHECK(s.report.achievable_sup == doctest::Approx(2.0));
        CHECK(s.report.lambda == kInf);
        CHECK(s.controls == MatrixXd::Constant(2, 1, 1.0));
    }
    SUBCASE("nan input") {
        MatrixXd q = MatrixXd::Zero(2, 1);
        q(1, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(project_halfspace_box(q, make_row(MatrixXd::Constant(2, 1, 1.0), 1.0), box2(-1, 1)),
                        NumericalError);
    }
}

TEST_CASE("projection is idempotent, monotone and minimal") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        const int n = 3;
        const MatrixXd c = MatrixXd::NullaryExpr(2, n, [&] { return g(rng); });
        const MatrixXd q0 = MatrixXd::NullaryExpr(2, n, [&] { return 0.5 * g(rng); });
        const double b = (c.array() * q0.array()).sum() + 0.5;
        const ConstraintRow row = make_row(c, b);
        const ControlBox box = box2(-1, 1);
        const QpSolution s = project_halfspace_box(q0, row, box);
        if (s.report.status == QpStatus::infeasible) continue;
        const QpSolution again = project_halfspace_box(s.controls, row, box);
        CHECK((again.controls - s.controls).lpNorm<Eigen::Infinity>() <= 1e-10);

        auto phi = [&](double lam) {
            MatrixXd q = q0;
            for (int i = 0; i < n; ++i) q.col(i) += lam * c.col(i) / row.weights[i];
            return (c.array() * box.clip(q).array()).sum();
        };
        double prev = phi(0.0);
        for (double lam = 0.05; lam < 5.0; lam += 0.05) {
            CHECK(phi(lam) >= prev - 1e-14);
            prev = phi(lam);
        }

        auto obj = [&](const MatrixXd& q) {
            double v = 0;
            for (int i = 0; i < n; ++i) v += row.weights[i] * (q.col(i) - q0.col(i)).squaredNorm();
            return v;
        };
        const double best = obj(s.controls);
        int feasible = 0;
        for (int k = 0; k < 10000; ++k) {
            const MatrixXd q = MatrixXd::NullaryExpr(2, n, [&] { return u(rng); });
            if ((c.array() * q.array()).sum() < b) continue;
            ++feasible;
            CHECK(best <= obj(q) + 1e-12);
        }
        CHECK(feasible > 0);
    }
}

TEST_CASE("dense QP examples") {
    SUBCASE("zero rows clips the nominal") {
        StackedRows r;
        r.matrix.resize(0, 2);
        r.lower_bounds.resize(0);
        const QpSolution s = solve_dense_qp(VectorXd::Ones(1), MatrixXd::Constant(2, 1, 3.0), r, box2(-1, 1));
        CHECK(s.controls == MatrixXd::Constant(2, 1, 1.0));
    }
    SUBCASE("separation row pushes symmetrically") {
        const StackedRows r = stack((MatrixXd(1, 2) << 1, -1).finished(), VectorXd::Constant(1, 0.2));
        const QpSolution s = solve_dense_qp(VectorXd::Ones(2), MatrixXd::Zero(1, 2), r, ControlBox::unbounded(1));
        CHECK(s.report.status == QpStatus::projected);
        CHECK(s.controls(0, 0) == doctest::Approx(0.1).epsilon(1e-8));
        CHECK(s.controls(0, 1) == doctest::Approx(-0.1).epsilon(1e-8));
        CHECK(s.report.residual <= 1e-8);
    }
    SUBCASE("nominal safe shortcut") {
        const StackedRows r = stack((MatrixXd(1, 2) << 1, -1).finished(), VectorXd::Constant(1, -1.0));
        const QpSolution s = solve_dense_qp(VectorXd::Ones(2), MatrixXd::Zero(1, 2), r, ControlBox::unbounded(1));
        CHECK(s.report.status == QpStatus::nominal_safe);
        CHECK(s.controls == MatrixXd::Zero(1, 2));
    }
    SUBCASE("infeasible rows are detected") {
        const StackedRows r = stack((MatrixXd(1, 2) << 1, 1).finished(), VectorXd::Constant(1, 4.0));
        const QpSolution s = solve_dense_qp(VectorXd::Ones(2), MatrixXd::Zero(1, 2), r,
                                            ControlBox(VectorXd::Constant(1, -1), VectorXd::Constant(1, 1)));
        CHECK(s.report.status == QpStatus::infeasible);
    }
    SUBCASE("iteration cap raises with the best iterate") {
        const StackedRows r = stack((MatrixXd(2, 2) << 1, -1, 1, 1).finished(), (VectorXd(2) << 0.2, 0.7).finished());
        DenseQpOptions o;
        o.max_iterations = 3;
        o.check_every = 1;
        try {
            solve_dense_qp(VectorXd::Ones(2), MatrixXd::Zero(1, 2), r, ControlBox::unbounded(1), o);
            FAIL("expected QpNotConverged");
        } catch (const QpNotConverged& e) {
            CHECK(e.iterations() == 3);
            CHECK(e.best().cols() == 2);
            CHECK(e.primal_residual() > 0.0);
        }
    }
    SUBCASE("bad shapes") {
        const StackedRows r = stack((MatrixXd(1, 3) << 1, -1, 0).finished(), VectorXd::Constant(1, 0.2));
        CHECK_THROWS_AS(solve_dense_qp(VectorXd::Ones(2), MatrixXd::Zero(1, 2), r, ControlBox::unbounded(1)),
                        DimensionError);
    }
}

TEST_CASE("both solvers agree on single-row instances") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const int n = 4, m = 2;
        const MatrixXd c = MatrixXd::NullaryExpr(m, n, [&] { return g(rng); });
        const MatrixXd q0 = MatrixXd::NullaryExpr(m, n, [&] { return 0.5 * g(rng); });
        const double b = (c.array() * q0.array()).sum() + 1.0;
        const ConstraintRow row = make_row(c, b);
        const ControlBox box = box2(-1, 1);
        const QpSolution a = project_halfspace_box(q0, row, box);
        if (a.report.status == QpStatus::infeasible) continue;
        const MatrixXd flat = Eigen::Map<const MatrixXd>(c.data(), 1, c.size());
        const QpSolution d = solve_dense_qp(row.weights, q0, stack(flat, VectorXd::Constant(1, b)), box);
        CHECK((a.controls - d.controls).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
}

TEST_CASE("status names") {
    CHECK(std::string(to_string(QpStatus::nominal_safe)) == "nominal_safe");
    CHECK(std::string(to_string(QpStatus::projected)) == "projected");
    CHECK(std::string(to_string(QpStatus::infeasible)) == "infeasible");
}

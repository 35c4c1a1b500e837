#include "doctest.h"

#include <random>

#include "mfcbf/barrier.hpp"
#include "mfcbf/error.hpp"
#include "oracles.hpp"

using namespace mfcbf;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const KernelSpec kGauss(KernelFamily::gaussian, 1.0);
const ClassKSpec kLin(ClassKFamily::linear, 1.0);

MatrixXd m1(double v) { return MatrixXd::Constant(1, 1, v); }

}  // namespace

TEST_CASE("class-K functions") {
    CHECK(ClassKSpec(ClassKFamily::linear, 2.0)(0.5) == 1.0);
    CHECK(ClassKSpec(ClassKFamily::cubic, 1.0)(-2.0) == -8.0);
    CHECK(ClassKSpec(ClassKFamily::cubic, 3.0)(0.0) == 0.0);
    CHECK(class_k(kLin, 0.0) == 0.0);
    CHECK_THROWS_AS(ClassKSpec(ClassKFamily::linear, 0.0), InvalidArgument);
    for (auto fam : {ClassKFamily::linear, ClassKFamily::cubic}) {
        const ClassKSpec a(fam, 1.7);
        double prev = a(-3.0);
        for (double x = -2.99; x <= 3.0; x += 0.01) {
            CHECK(a(x) > prev);
            prev = a(x);
        }
    }
    CHECK_THROWS_AS(BarrierSpec(BarrierMode::avoidance, 0.0, kLin, kGauss), InvalidArgument);
}

TEST_CASE("barrier values") {
    const BarrierSpec av(BarrierMode::avoidance, 0.5, kLin, kGauss);
    const BarrierSpec tr(BarrierMode::tracking, 0.5, kLin, kGauss);
    std::mt19937_64 rng(1);
    const EmpiricalMeasure rho(oracle::random_points(rng, 2, 5));
    CHECK(barrier_value(av, 0.0, rho, rho) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(barrier_value(tr, 0.0, rho, rho) == doctest::Approx(0.5).epsilon(1e-15));
    MatrixXd a(2, 1), b(2, 1);
    a << 0, 0;
    b << 1, 1;
    CHECK(barrier_value(av, 0.0, EmpiricalMeasure(a), EmpiricalMeasure(b)) ==
          doctest::Approx(0.5 - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("adversary term") {
    const BarrierSpec av(BarrierMode::avoidance, 0.5, kLin, kGauss);
    const EmpiricalMeasure x(m1(0.0)), y(m1(2.0));
    CHECK(adversary_term(av, x, y, m1(0.0)) == 0.0);
    CHECK(adversary_term(av, x, x, m1(3.0)) == doctest::Approx(0.0));
    const double t = adversary_term(av, x, y, m1(-1.0));
    CHECK(t == doctest::Approx(-2.0 * std::exp(-2.0)).epsilon(1e-14));
    const double h = 1e-6;
    const double fd = (barrier_value(av, 0, x, EmpiricalMeasure(m1(2.0 - h))) -
                       barrier_value(av, 0, x, EmpiricalMeasure(m1(2.0 + h)))) / (2 * h);
    CHECK(t == doctest::Approx(fd).epsilon(1e-8));
    CHECK_THROWS_AS(adversary_term(av, x, y, MatrixXd::Zero(1, 2)), DimensionError);
}

TEST_CASE("assembled row for the one-dimensional example") {
    const BarrierSpec av(BarrierMode::avoidance, 0.5, kLin, kGauss);
    const DynamicsSpec si(DynamicsModel::single_integrator, 1);
    const EmpiricalMeasure x(m1(0.0)), y(m1(2.0));
    const ConstraintRow row = assemble_constraint(av, si, 0.0, x, y, m1(-1.0));
    const double e2 = std::exp(-2.0);
    CHECK(row.coeffs(0, 0) == doctest::Approx(-2.0 * e2).epsilon(1e-14));
    // b = -adversary_term - alpha(H) with H = (1 - e^-2) - 0.5.
    const double b = 2.0 * e2 - ((1.0 - e2) - 0.5);
    CHECK(row.rhs == doctest::Approx(b).epsilon(1e-14));
    CHECK(row.rhs == doctest::Approx(-0.0939941).epsilon(1e-6));
    CHECK(row.drift_term == 0.0);
    CHECK_FALSE(row.degenerate);
    CHECK(dh_ds_analytic(row, m1(-1.0)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    // Fleeing at the adversary's speed holds H fixed along a simulated step.
    const double dt = 1e-4;
    const double h1 = barrier_value(av, dt, EmpiricalMeasure(m1(-dt)), EmpiricalMeasure(m1(2.0 - dt)));
    CHECK(std::abs(h1 - row.h_value) <= 1e-12);
}

TEST_CASE("coincident measures give a degenerate infeasible row") {
    const BarrierSpec av(BarrierMode::avoidance, 0.3, kLin, kGauss);
    const DynamicsSpec si(DynamicsModel::single_integrator, 2);
    std::mt19937_64 rng(2);
    const EmpiricalMeasure rho(oracle::random_points(rng, 2, 4));
    const ConstraintRow row = assemble_constraint(av, si, 0.0, rho, rho, MatrixXd::Zero(2, 4));
    CHECK(row.coeffs.lpNorm<Eigen::Infinity>() <= 1e-15);
    CHECK(row.rhs == doctest::Approx(0.3));
    CHECK(row.degenerate);
}

TEST_CASE("stationary adversary: zero control is safe iff H >= 0") {
    const BarrierSpec av(BarrierMode::avoidance, 0.2, kLin, kGauss);
    const DynamicsSpec si(DynamicsModel::single_integrator, 2);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const EmpiricalMeasure rho(oracle::random_points(rng, 2, 6));
        const EmpiricalMeasure tgt(oracle::random_points(rng, 2, 2, 2.0));
        const ConstraintRow row = assemble_constraint(av, si, 0.0, rho, tgt, MatrixXd::Zero(2, 2));
        CHECK((0.0 >= row.rhs) == (row.h_value >= 0.0));
    }
}

TEST_CASE("tracking rows are sign flips of avoidance rows") {
    const DynamicsSpec di(DynamicsModel::double_integrator, 2);
    std::mt19937_64 rng(4);
    const EmpiricalMeasure rho(oracle::random_points(rng, 4, 5)), tgt(oracle::random_points(rng, 4, 2));
    const MatrixXd v = oracle::random_points(rng, 4, 2);
    const BarrierSpec av(BarrierMode::avoidance, 0.1, kLin, kGauss);
    const BarrierSpec tr(BarrierMode::tracking, 0.1, kLin, kGauss);
    const ConstraintRow ra = assemble_constraint(av, di, 0.0, rho, tgt, v);
    const ConstraintRow rt = assemble_constraint(tr, di, 0.0, rho, tgt, v);
    CHECK(rt.coeffs == -ra.coeffs);
    CHECK(rt.drift_term == -ra.drift_term);
    CHECK(rt.adversary_term == -ra.adversary_term);
    CHECK(rt.h_value == -ra.h_value);
}

TEST_CASE("row membership matches the expanded inequality") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const auto model = t % 2 ? DynamicsModel::double_integrator : DynamicsModel::single_integrator;
        const DynamicsSpec dyn(model, 2);
        const int sd = dyn.state_dim();
        const BarrierSpec spec(t % 3 ? BarrierMode::avoidance : BarrierMode::tracking, 0.2,
                               ClassKSpec(ClassKFamily::cubic, 2.0), KernelSpec(KernelFamily::inverse_multiquadric, 1.2));
        const EmpiricalMeasure rho(oracle::random_points(rng, sd, 4)), tgt(oracle::random_points(rng, sd, 2));
        const ConstraintRow row = assemble_constraint(spec, dyn, 0.0, rho, tgt, oracle::random_points(rng, sd, 2));
        const MatrixXd q = oracle::random_points(rng, 2, 4);
        const double lhs = (row.coeffs.array() * q.array()).sum() - row.rhs;
        const double expanded = dh_ds_analytic(row, q) + row.alpha_value;
        CHECK(std::abs(lhs - expanded) <= 1e-10);
    }
}

TEST_CASE("analytic dH/ds matches a centered difference along the flow") {
    // Single integrator with constant controls and a constant adversary drift:
    // both measures move exactly linearly, so the centered difference is O(dt^2).
    std::mt19937_64 rng(6);
    const DynamicsSpec si(DynamicsModel::single_integrator, 2);
    const BarrierSpec spec(BarrierMode::avoidance, 0.1, kLin, kGauss);
    const MatrixXd x = oracle::random_points(rng, 2, 4), y = oracle::random_points(rng, 2, 2);
    const MatrixXd q = oracle::random_points(rng, 2, 4), v = oracle::random_points(rng, 2, 2);
    const ConstraintRow row = assemble_constraint(spec, si, 0.0, EmpiricalMeasure(x), EmpiricalMeasure(y), v);
    const double an = dh_ds_analytic(row, q);
    auto fd = [&](double dt) {
        const double hp = barrier_value(spec, dt, EmpiricalMeasure(x + dt * q), EmpiricalMeasure(y + dt * v));
        const double hm = barrier_value(spec, -dt, EmpiricalMeasure(x - dt * q), EmpiricalMeasure(y - dt * v));
        return (hp - hm) / (2 * dt);
    };
    const double e1 = std::abs(fd(1e-2) - an), e2 = std::abs(fd(5e-3) - an);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
    CHECK_THROWS_AS(dh_ds_analytic(row, MatrixXd::Zero(2, 3)), DimensionError);
}

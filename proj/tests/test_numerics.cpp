// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fris/numerics.hpp"
#include "fris/channel.hpp"
#include "fris/sensing.hpp"
#include "test_util.hpp"

using namespace fris;
using namespace fris::testutil;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("active_set_qp") {
    QpProblem qp;
    qp.delta = 2.0;
    qp.expansion_point = Vec2(1.0, 1.0);
    qp.gradient = Vec2(0.5, -0.5);

    // no rows: closed-form unconstrained optimum
    Vec2 got = active_set_qp(qp, qp.expansion_point);
    CHECK((got - (qp.expansion_point - qp.gradient / qp.delta)).norm() < 1e-12);

    // single active halfspace: projection onto it
    qp.gradient = Vec2(0.0, 3.0);  // pulls toward y = -0.5
    qp.rows = {{Vec2(0, 1), 0.0}};  // y >= 0
    got = active_set_qp(qp, qp.expansion_point);
    CHECK(std::abs(got[1]) < 1e-12);
    CHECK(std::abs(got[0] - 1.0) < 1e-12);

    // random instances vs fine-grid oracle
    Rng rng(51);
    std::uniform_real_distribution<double> ug(-2.0, 2.0);
    for (int inst = 0; inst < 5; ++inst) {
        QpProblem q2;
        q2.delta = 1.0;
        q2.expansion_point = Vec2(0.4, 0.6);
        q2.gradient = Vec2(ug(rng), ug(rng));
        q2.rows = {{Vec2(1, 0), 0.0}, {Vec2(0, 1), 0.0},
                   {Vec2(-1, 0), -1.0}, {Vec2(0, -1), -1.0},
                   {Vec2(1, 1).normalized(), 0.3}};
        Vec2 opt = active_set_qp(q2, Vec2(0.4, 0.6));
        auto obj = [&](const Vec2& p) {
            Vec2 d = p - q2.expansion_point;
            return q2.gradient.dot(d) + 0.5 * q2.delta * d.squaredNorm();
        };
        double best = 1e300;
        for (double x = 0; x <= 1.0 + 1e-12; x += 5e-4)
            for (double y = 0; y <= 1.0 + 1e-12; y += 5e-4) {
                Vec2 p(x, y);
                if ((p[0] + p[1]) / std::sqrt(2.0) < 0.3) continue;
                best = std::min(best, obj(p));
            }
        CHECK(obj(opt) <= best + 1e-6);
    }

    QpProblem infeasible_start;
    infeasible_start.rows = {{Vec2(1, 0), 10.0}};
    CHECK_THROWS(active_set_qp(infeasible_start, Vec2(0, 0)));
}

TEST_CASE("quasi_newton_minimize standard problems") {
    // convex quadratic
    MatR A(3, 3);
    A << 4, 1, 0, 1, 3, 0, 0, 0, 2;
    VecR b(3);
    b << 1, -2, 0.5;
    RealObjective quad = [&](const VecR& x, VecR& g) {
        g = A * x - b;
        return 0.5 * x.dot(A * x) - b.dot(x);
    };
    VecR x = quasi_newton_minimize(quad, VecR::Zero(3), 1e-10, 100);
    CHECK((A * x - b).norm() < 1e-8);

    // ||x||^4 from (1,1)
    RealObjective quart = [](const VecR& x, VecR& g) {
        double n2 = x.squaredNorm();
        g = 4.0 * n2 * x;
        return n2 * n2;
    };
    VecR x0(2);
    x0 << 1, 1;
    x = quasi_newton_minimize(quart, x0, 1e-9, 500);
    CHECK(x.norm() < 1e-3);

    // Rosenbrock from (-1.2, 1)
    RealObjective rosen = [](const VecR& v, VecR& g) {
        double x = v[0], y = v[1];
        g.resize(2);
        g[0] = -2 * (1 - x) - 400 * x * (y - x * x);
        g[1] = 200 * (y - x * x);
        return std::pow(1 - x, 2) + 100 * std::pow(y - x * x, 2);
    };
    VecR r0(2);
    r0 << -1.2, 1.0;
    x = quasi_newton_minimize(rosen, r0, 1e-9, 2000);
    CHECK((x - VecR::Ones(2)).norm() < 1e-5);
}

TEST_CASE("dominant_eigpair") {
    double lam;
    VecC u;
    dominant_eigpair(MatC::Identity(4, 4), lam, u);
    CHECK(lam == doctest::Approx(1.0));
    CHECK(std::abs(u.norm() - 1.0) < 1e-10);

    Rng rng(52);
    VecC v = random_complex(5, rng);
    dominant_eigpair(v * v.adjoint(), lam, u);
    CHECK(rel_err(lam, v.squaredNorm()) < 1e-9);
    CHECK(std::abs(std::abs(u.dot(v / v.norm())) - 1.0) < 1e-8);

    MatC B = random_complex_mat(6, 6, rng);
    MatC H = B * B.adjoint();
    dominant_eigpair(H, lam, u);
    CHECK((H * u - lam * u).norm() < 1e-9 * lam);
    Eigen::SelfAdjointEigenSolver<MatC> es(H);
    CHECK(rel_err(lam, es.eigenvalues().maxCoeff()) < 1e-8);

    bool zero = false;
    dominant_eigpair(MatC::Zero(3, 3), lam, u, &zero);
    CHECK(zero);
    CHECK(lam == 0.0);

    CHECK_THROWS_AS(dominant_eigpair(random_complex_mat(4, 4, rng), lam, u),
                    std::domain_error);
}

TEST_CASE("sphere_constrained_min basics") {
    Rng rng(53);
    const int n = 5;
    VecC c = random_complex(n, rng);
    double radius = c.norm();
    ComplexObjective dist2 = [&](const VecC& s, VecC& g) {
        g = s - c;  // d/d conj(s) of ||s - c||^2
        return (s - c).squaredNorm();
    };
    VecC got = sphere_constrained_min(dist2, radius, VecC::Ones(n), 2, rng, 1e-12, 2000);
    CHECK(std::abs(got.norm() - radius) < 1e-10 * radius);
    CHECK((got - c).norm() < 1e-5 * radius);

    // homogeneous objective: solution scales linearly with the radius
    MatC B = random_complex_mat(n, n, rng);
    MatC H = B * B.adjoint();
    ComplexObjective ray = [&](const VecC& s, VecC& g) {
        g = H * s;
        return (s.dot(H * s)).real();
    };
    Rng r1(99), r2(99);
    VecC s1 = sphere_constrained_min(ray, 1.0, VecC::Ones(n), 0, r1, 1e-12, 2000);
    VecC s2 = sphere_constrained_min(ray, 2.5, VecC::Ones(n), 0, r2, 1e-12, 2000);
    VecC g1, g2;
    CHECK(rel_err(ray(s2, g2), 2.5 * 2.5 * ray(s1, g1)) < 1e-6);
    // same minimizer direction up to the objective's global-phase freedom
    CHECK(std::abs(std::abs(s1.dot(s2)) / (s1.norm() * s2.norm()) - 1.0) < 1e-5);

    CHECK_THROWS_AS(sphere_constrained_min(dist2, 0.0, VecC::Ones(n), 0, rng),
                    std::domain_error);
}

TEST_CASE("sphere_constrained_min beats random search on a small matching instance") {
    SystemConfig cfg;
    cfg.N = 3;
    cfg.I_a = 31;
    cfg.target_angles = {{deg2rad(0.0), 0.0}};
    Rng rng(54);
    cfg.place_users(rng);
    PositionSet pos = rand_positions(cfg.N, cfg.A, cfg.DeltaD, rng);
    BeampatternGrid grid = make_grid(cfg);
    MatR pd = ideal_beampattern(cfg.target_angles, cfg.mainlobe_width_deg, grid);

    MatC Asv(cfg.N, cfg.I_a);
    for (int i = 0; i < cfg.I_a; ++i)
        Asv.col(i) = fris_steering(pos, grid.azimuths[i], 0.0, cfg.lambda);
    VecR pdv = pd.col(0);
    const double beta = 1.0;
    ComplexObjective f = [&](const VecC& s, VecC& g) {
        VecC z = Asv.adjoint() * s;
        VecR q = z.cwiseAbs2();
        VecR resid = q - beta * pdv;
        g = Asv * (2.0 * resid.cast<cdouble>().cwiseProduct(z));
        return resid.squaredNorm();
    };

    const double radius = 1.0;
    VecC got = sphere_constrained_min(f, radius, VecC::Ones(cfg.N), 4, rng, 1e-12, 5000);
    VecC g;
    double ours = f(got, g);

    double best = 1e300;
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int t = 0; t < 1000000; ++t) {
        VecC s(cfg.N);
        for (int i = 0; i < cfg.N; ++i) s[i] = cdouble(nd(rng), nd(rng));
        s *= radius / s.norm();
        best = std::min(best, f(s, g));
    }
    CHECK(ours <= best * 1.01 + 1e-12);
}

TEST_SUITE_END();

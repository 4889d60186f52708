// SPDX-License-Identifier: Apache-2.0
#include "fris/beamformer_opt.hpp"

#include <cmath>
#include <stdexcept>

#include "fris/numerics.hpp"

namespace fris {

namespace {

MatC kron(const MatC& a, const MatC& b) {
    MatC out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

VecC vec_of(const MatC& W) {
    return Eigen::Map<const VecC>(W.data(), W.size());
}

}  // namespace

BeamformerQuadratic build_w_quadratic(const MatC& G, const VecC& theta, const MatC& H_rc,
                                      const VecC& s_r, const VecC& s_c, double omega,
                                      double alpha, double P_t) {
    const int M = int(G.cols());
    const int K = int(H_rc.cols());
    MatC H_c = H_rc.adjoint() * theta.conjugate().asDiagonal() * G;  // K x M
    MatC scc = s_c.conjugate() * s_c.transpose();                    // K x K

    BeamformerQuadratic q;
    q.M = M;
    q.K = K;
    q.P_t = P_t;
    q.A2 = alpha * kron(scc, G.adjoint() * G) +
           (1.0 - alpha) * omega * omega * kron(scc, H_c.adjoint() * H_c);
    MatC B = alpha * (G.adjoint() * theta.asDiagonal() * s_r * s_c.adjoint()) +
             (1.0 - alpha) * omega * (H_c.adjoint() * s_c * s_c.adjoint());  // M x K
    q.b2 = vec_of(B);

    const int d = M * K;
    q.A2_real.resize(2 * d, 2 * d);
    q.A2_real.topLeftCorner(d, d) = q.A2.real();
    q.A2_real.bottomRightCorner(d, d) = q.A2.real();
    q.A2_real.topRightCorner(d, d) = -q.A2.imag();
    q.A2_real.bottomLeftCorner(d, d) = q.A2.imag();
    q.b2_real.resize(2 * d);
    q.b2_real.head(d) = q.b2.real();
    q.b2_real.tail(d) = q.b2.imag();
    return q;
}

double w_objective(const BeamformerQuadratic& q, const MatC& W) {
    VecC w = vec_of(W);
    return (w.dot(q.A2 * w)).real() - 2.0 * (q.b2.dot(w)).real();
}

MatC alm_optimize_w(const BeamformerQuadratic& q, const MatC& W_init, double alm_tol,
                    AlmState* state) {
    const int d = q.M * q.K;
    VecC w0c = vec_of(W_init);
    if (std::abs(w0c.squaredNorm() - q.P_t) > 1e-6 * std::max(1.0, q.P_t) + 1e-6)
        throw std::invalid_argument("alm_optimize_w: W_init not on the power sphere");
    w0c *= std::sqrt(q.P_t) / w0c.norm();

    VecR w(2 * d);
    w.head(d) = w0c.real();
    w.tail(d) = w0c.imag();

    auto f_quad = [&](const VecR& v) {
        return v.dot(q.A2_real * v) - 2.0 * q.b2_real.dot(v);
    };
    const double f_init = f_quad(w);

    double mu = 0.0;
    double gamma = 1.0;
    double feas = std::abs(w.squaredNorm() - q.P_t);
    const double grad_tol = 1e-10 * std::max(1.0, q.b2_real.norm() + q.A2_real.norm());

    // Always take at least one inner solve: a feasible warm start says nothing
    // about stationarity of the Lagrangian.
    int outer = 0;
    while (outer < 100) {
        RealObjective lag = [&](const VecR& v, VecR& g) {
            VecR av = q.A2_real * v;
            double c = v.squaredNorm() - q.P_t;
            g = 2.0 * av - 2.0 * q.b2_real + (2.0 * mu + 2.0 * gamma * c) * v;
            return v.dot(av) - 2.0 * q.b2_real.dot(v) + mu * c + 0.5 * gamma * c * c;
        };
        w = quasi_newton_minimize(lag, w, grad_tol, 300);
        double c = w.squaredNorm() - q.P_t;
        mu += gamma * c;
        feas = std::abs(c);
        ++outer;
        if (feas < alm_tol) break;
        gamma = std::min(gamma * 2.0, 1e8);
    }
    if (feas >= alm_tol) {
        throw std::runtime_error("alm_optimize_w: no convergence after 100 outer iterations"
                                 ", last feasibility " + std::to_string(feas));
    }
    if (state) {
        state->mu = mu;
        state->gamma = gamma;
        state->feasibility = feas;
        state->outer_iterations = outer;
    }

    // Snap to the sphere; keep the warm start if the quadratic got worse.
    w *= std::sqrt(q.P_t / w.squaredNorm());
    if (f_quad(w) > f_init + 1e-12 * std::max(1.0, std::abs(f_init))) {
        w.head(d) = w0c.real();
        w.tail(d) = w0c.imag();
    }

    VecC wc = w.head(d).cast<cdouble>() + cdouble(0, 1) * w.tail(d).cast<cdouble>();
    return Eigen::Map<const MatC>(wc.data(), q.M, q.K);
}

}  // namespace fris

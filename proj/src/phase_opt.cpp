// SPDX-License-Identifier: Apache-2.0
#include "fris/phase_opt.hpp"

#include "fris/numerics.hpp"

namespace fris {

PhaseQuadratic build_phase_quadratic(const MatC& G, const VecC& x, const MatC& H_rc,
                                     const VecC& s_r, const VecC& s_c, double omega,
                                     double alpha) {
    const int n = int(G.rows());
    VecC gx = G * x;
    MatC gxx = gx * gx.adjoint();  // G x x^H G^H

    PhaseQuadratic q;
    q.A1 = alpha * MatC(gxx.diagonal().asDiagonal());
    q.A1 += omega * omega * (1.0 - alpha) *
            gxx.cwiseProduct((H_rc.conjugate() * H_rc.transpose()));
    q.b1 = alpha * (gx.cwiseProduct(s_r.conjugate()));
    q.b1 += omega * (1.0 - alpha) * (gx.cwiseProduct((H_rc * s_c).conjugate()));
    (void)n;
    return q;
}

double phase_objective(const PhaseQuadratic& q, const VecC& theta) {
    return (theta.dot(q.A1 * theta)).real() - 2.0 * (q.b1.dot(theta)).real();
}

VecC optimize_phases(const PhaseQuadratic& q, const VecC& theta_init) {
    return unit_modulus_descent(q.A1, q.b1, theta_init, 1e-8, 200);
}

}  // namespace fris

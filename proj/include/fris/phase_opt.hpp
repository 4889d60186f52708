// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fris/types.hpp"

namespace fris {

/// Compact form of the phase subproblem: min th^H A1 th - 2 Re{b1^H th}
/// over unit-modulus th.
struct PhaseQuadratic {
    MatC A1;
    VecC b1;
};

PhaseQuadratic build_phase_quadratic(const MatC& G, const VecC& x, const MatC& H_rc,
                                     const VecC& s_r, const VecC& s_c, double omega,
                                     double alpha);

double phase_objective(const PhaseQuadratic& q, const VecC& theta);

// Riemannian descent on the unit-modulus torus; monotone, warm-startable.
VecC optimize_phases(const PhaseQuadratic& q, const VecC& theta_init);

}  // namespace fris

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "fris/types.hpp"

namespace fris {

enum class Constellation { QPSK, QAM16 };

int bits_per_symbol(Constellation c);
// Unit-average-energy alphabet, Gray-labeled by index.
const std::vector<cdouble>& constellation_points(Constellation c);

cdouble map_bits(Constellation c, unsigned bits);
// Minimum-distance demapping; returns the Gray label of the nearest point.
unsigned demap_symbol(Constellation c, cdouble y);

struct SymbolBlock {
    VecC s_c;                    // K symbols, unit average energy
    Constellation constellation = Constellation::QPSK;
    std::vector<uint8_t> bits;   // K * bits_per_symbol entries, one bit each
};

SymbolBlock generate_symbols(int K, Constellation c, Rng& rng);

// y_k = h_k^H Theta^H G x + n_k, returns omega * y.
VecC simulate_rx(const MatC& H_rc, const VecC& theta, const MatC& G, const VecC& x,
                 double sigma0_sq, double omega, Rng& rng);

// Closed analytic MSE ||s_c - omega H^H Theta^H G x||^2 + K omega^2 sigma0^2.
double comm_mse(const VecC& s_c, double omega, const MatC& H_rc, const VecC& theta,
                const MatC& G, const VecC& x, int K, double sigma0_sq);

// Closed-form MSE-optimal scalar estimator.
double optimal_estimator(const VecC& s_c, const MatC& H_rc, const VecC& theta,
                         const MatC& G, const VecC& x, int K, double sigma0_sq);

// Fixed transmit chain (W, theta, channels, omega); random payload blocks,
// per-user minimum-distance demapping. Returns BER per noise level.
std::vector<double> ber_experiment(const MatC& W, const VecC& theta, const MatC& G,
                                   const MatC& H_rc, double omega, Constellation c,
                                   const std::vector<double>& noise_levels_watts,
                                   int trials, Rng& rng);

}  // namespace fris

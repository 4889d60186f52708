// SPDX-License-Identifier: Apache-2.0
#include "fris/comm.hpp"

#include <cmath>
#include <stdexcept>

namespace fris {

namespace {

unsigned gray(unsigned v) { return v ^ (v >> 1); }

std::vector<cdouble> build_qpsk() {
    // Gray label b1 b0 -> (I, Q), one bit per axis.
    std::vector<cdouble> pts(4);
    const double s = 1.0 / std::sqrt(2.0);
    for (unsigned b = 0; b < 4; ++b) {
        double i = (b & 1u) ? -s : s;
        double q = (b & 2u) ? -s : s;
        pts[b] = {i, q};
    }
    return pts;
}

std::vector<cdouble> build_qam16() {
    // Gray-per-axis {-3,-1,1,3}/sqrt(10); label b3 b2 (I) | b1 b0 (Q).
    const double amp[4] = {-3, -1, 1, 3};
    const double s = 1.0 / std::sqrt(10.0);
    std::vector<cdouble> pts(16);
    for (unsigned bi = 0; bi < 4; ++bi)
        for (unsigned bq = 0; bq < 4; ++bq) {
            unsigned label = (bi << 2) | bq;
            // invert Gray coding: axis level index g with gray(g) == bits
            unsigned gi = 0, gq = 0;
            for (unsigned g = 0; g < 4; ++g) {
                if (gray(g) == bi) gi = g;
                if (gray(g) == bq) gq = g;
            }
            pts[label] = {amp[gi] * s, amp[gq] * s};
        }
    return pts;
}

}  // namespace

int bits_per_symbol(Constellation c) { return c == Constellation::QPSK ? 2 : 4; }

const std::vector<cdouble>& constellation_points(Constellation c) {
    static const std::vector<cdouble> qpsk = build_qpsk();
    static const std::vector<cdouble> qam16 = build_qam16();
    return c == Constellation::QPSK ? qpsk : qam16;
}

cdouble map_bits(Constellation c, unsigned bits) {
    return constellation_points(c).at(bits);
}

unsigned demap_symbol(Constellation c, cdouble y) {
    const auto& pts = constellation_points(c);
    unsigned best = 0;
    double bd = std::norm(y - pts[0]);
    for (unsigned i = 1; i < pts.size(); ++i) {
        double d = std::norm(y - pts[i]);
        if (d < bd) { bd = d; best = i; }
    }
    return best;
}

SymbolBlock generate_symbols(int K, Constellation c, Rng& rng) {
    if (K < 1) throw std::invalid_argument("generate_symbols: K must be >= 1");
    SymbolBlock blk;
    blk.constellation = c;
    blk.s_c.resize(K);
    const int bps = bits_per_symbol(c);
    blk.bits.resize(size_t(K) * bps);
    std::uniform_int_distribution<unsigned> u(0, (1u << bps) - 1);
    for (int k = 0; k < K; ++k) {
        unsigned label = u(rng);
        blk.s_c[k] = map_bits(c, label);
        for (int b = 0; b < bps; ++b)
            blk.bits[size_t(k) * bps + b] = uint8_t((label >> b) & 1u);
    }
    return blk;
}

VecC simulate_rx(const MatC& H_rc, const VecC& theta, const MatC& G, const VecC& x,
                 double sigma0_sq, double omega, Rng& rng) {
    VecC y = H_rc.adjoint() * (theta.conjugate().asDiagonal() * (G * x));
    for (int k = 0; k < y.size(); ++k)
        if (sigma0_sq > 0) y[k] += complex_gaussian(rng, sigma0_sq);
    return omega * y;
}

double comm_mse(const VecC& s_c, double omega, const MatC& H_rc, const VecC& theta,
                const MatC& G, const VecC& x, int K, double sigma0_sq) {
    VecC cascade = H_rc.adjoint() * (theta.conjugate().asDiagonal() * (G * x));
    return (s_c - omega * cascade).squaredNorm() + K * omega * omega * sigma0_sq;
}

double optimal_estimator(const VecC& s_c, const MatC& H_rc, const VecC& theta,
                         const MatC& G, const VecC& x, int K, double sigma0_sq) {
    VecC cascade = H_rc.adjoint() * (theta.conjugate().asDiagonal() * (G * x));
    double denom = cascade.squaredNorm() + K * sigma0_sq;
    if (denom <= 0.0)
        throw std::domain_error("optimal_estimator: zero cascade and zero noise");
    return (s_c.dot(cascade)).real() / denom;
}

std::vector<double> ber_experiment(const MatC& W, const VecC& theta, const MatC& G,
                                   const MatC& H_rc, double omega, Constellation c,
                                   const std::vector<double>& noise_levels_watts,
                                   int trials, Rng& rng) {
    if (trials < 1) throw std::domain_error("ber_experiment: trials must be >= 1");
    const int K = int(W.cols());
    const int bps = bits_per_symbol(c);
    // Noiseless per-user cascade is linear in the payload: precompute the
    // effective K x K matrix once.
    MatC cascade = H_rc.adjoint() * (theta.conjugate().asDiagonal() * (G * W));

    std::vector<double> ber(noise_levels_watts.size(), 0.0);
    for (size_t lvl = 0; lvl < noise_levels_watts.size(); ++lvl) {
        const double n0 = noise_levels_watts[lvl];
        long errors = 0;
        long total = long(trials) * K * bps;
        for (int t = 0; t < trials; ++t) {
            SymbolBlock blk = generate_symbols(K, c, rng);
            VecC y = cascade * blk.s_c;
            for (int k = 0; k < K; ++k) {
                cdouble noisy = y[k];
                if (n0 > 0) noisy += complex_gaussian(rng, n0);
                unsigned label = demap_symbol(c, omega * noisy);
                for (int b = 0; b < bps; ++b) {
                    uint8_t bit = uint8_t((label >> b) & 1u);
                    if (bit != blk.bits[size_t(k) * bps + b]) ++errors;
                }
            }
        }
        ber[lvl] = double(errors) / double(total);
    }
    return ber;
}

}  // namespace fris

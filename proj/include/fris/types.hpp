// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace fris {

using cdouble = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using VecR = Eigen::VectorXd;
using MatR = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Circularly-symmetric complex Gaussian with total variance `var`.
inline cdouble complex_gaussian(Rng& rng, double var) {
    std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

}  // namespace fris

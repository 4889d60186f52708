// SPDX-License-Identifier: Apache-2.0
#include "fris/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace fris {

namespace {

bool row_satisfied(const QpProblem::Row& r, const Vec2& p, double tol) {
    return r.normal.dot(p) >= r.offset - tol * std::max(1.0, std::abs(r.offset));
}

bool all_satisfied(const QpProblem& qp, const Vec2& p, double tol) {
    for (const auto& r : qp.rows)
        if (!row_satisfied(r, p, tol)) return false;
    return true;
}

}  // namespace

Vec2 active_set_qp(const QpProblem& qp, const Vec2& start) {
    if (qp.delta <= 0.0) throw std::invalid_argument("active_set_qp: delta must be > 0");
    const double tol = 1e-9;
    if (!all_satisfied(qp, start, 1e-7))
        throw std::runtime_error("active_set_qp: start point infeasible");

    auto objective = [&](const Vec2& p) {
        Vec2 d = p - qp.expansion_point;
        return qp.gradient.dot(d) + 0.5 * qp.delta * d.squaredNorm();
    };

    Vec2 unconstrained = qp.expansion_point - qp.gradient / qp.delta;
    if (all_satisfied(qp, unconstrained, tol)) return unconstrained;

    bool found = false;
    Vec2 best = start;
    double best_obj = objective(start);
    found = true;  // start is always feasible

    const int m = int(qp.rows.size());
    for (int i = 0; i < m; ++i) {
        const auto& r = qp.rows[i];
        double nn = r.normal.squaredNorm();
        if (nn <= 0.0) continue;
        Vec2 cand = unconstrained + ((r.offset - r.normal.dot(unconstrained)) / nn) * r.normal;
        if (all_satisfied(qp, cand, tol)) {
            double o = objective(cand);
            if (!found || o < best_obj) { best = cand; best_obj = o; found = true; }
        }
        for (int j = i + 1; j < m; ++j) {
            const auto& s = qp.rows[j];
            double det = r.normal.x() * s.normal.y() - r.normal.y() * s.normal.x();
            if (std::abs(det) < 1e-14) continue;
            Vec2 v((r.offset * s.normal.y() - s.offset * r.normal.y()) / det,
                   (r.normal.x() * s.offset - s.normal.x() * r.offset) / det);
            if (all_satisfied(qp, v, tol)) {
                double o = objective(v);
                if (!found || o < best_obj) { best = v; best_obj = o; found = true; }
            }
        }
    }
    if (!found) throw std::runtime_error("active_set_qp: no feasible candidate");
    return best;
}

VecR quasi_newton_minimize(const RealObjective& f, const VecR& x0, double tol,
                           int max_iters, SolveStats* stats) {
    const int mem = 10;
    VecR x = x0;
    VecR g(x.size());
    double fx = f(x, g);

    std::deque<VecR> s_hist, y_hist;
    std::deque<double> rho_hist;

    int it = 0;
    for (; it < max_iters; ++it) {
        double gnorm = g.norm();
        if (gnorm < tol) break;

        // L-BFGS two-loop recursion
        VecR q = g;
        std::vector<double> alpha(s_hist.size());
        for (int i = int(s_hist.size()) - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        double h0 = 1.0;
        if (!s_hist.empty()) {
            double yy = y_hist.back().squaredNorm();
            if (yy > 0) h0 = s_hist.back().dot(y_hist.back()) / yy;
        }
        VecR z = h0 * q;
        for (size_t i = 0; i < s_hist.size(); ++i) {
            double beta = rho_hist[i] * y_hist[i].dot(z);
            z += (alpha[i] - beta) * s_hist[i];
        }
        VecR dir = -z;
        double slope = g.dot(dir);
        if (slope >= 0) {  // fall back to steepest descent
            dir = -g;
            slope = -gnorm * gnorm;
        }

        // Armijo backtracking. When 60 halvings cannot produce descent the
        // iterate is at the numerical floor of f; stop instead of failing.
        double t = 1.0;
        const double c1 = 1e-4;
        VecR x_new(x.size()), g_new(x.size());
        double f_new = 0;
        bool stalled = false;
        for (int halvings = 0;; ++halvings) {
            if (halvings > 60) {
                stalled = true;
                break;
            }
            x_new = x + t * dir;
            f_new = f(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= fx + c1 * t * slope) break;
            t *= 0.5;
        }
        if (stalled) break;

        VecR s = x_new - x;
        VecR y = g_new - g;
        double sy = s.dot(y);
        if (sy > 1e-14 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (int(s_hist.size()) > mem) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = x_new;
        g = g_new;
        fx = f_new;
    }
    if (stats) {
        stats->iterations = it;
        stats->residual = g.norm();
        stats->converged = g.norm() < tol;
    }
    return x;
}

VecC unit_modulus_descent(const MatC& A1, const VecC& b1, const VecC& theta0,
                          double tol, int max_iters, SolveStats* stats) {
    const int n = int(theta0.size());
    for (int i = 0; i < n; ++i)
        if (std::abs(std::abs(theta0[i]) - 1.0) > 1e-10)
            throw std::domain_error("unit_modulus_descent: non-unit initialization");

    auto objective = [&](const VecC& th) {
        return (th.dot(A1 * th)).real() - 2.0 * (b1.dot(th)).real();
    };
    auto retract = [&](VecC th) {
        for (int i = 0; i < n; ++i) th[i] /= std::abs(th[i]);
        return th;
    };

    VecC theta = theta0;
    double fx = objective(theta);
    double step = 1.0 / std::max(A1.cwiseAbs().maxCoeff() * n + b1.norm(), 1e-12);

    int it = 0;
    double change = 0;
    for (; it < max_iters; ++it) {
        VecC g = A1 * theta - b1;  // d/d conj(theta)
        // Project out the radial component per circle.
        VecC gr(n);
        for (int i = 0; i < n; ++i) {
            double radial = (std::conj(g[i]) * theta[i]).real();
            gr[i] = g[i] - radial * theta[i];
        }
        double gnorm2 = gr.squaredNorm();
        if (gnorm2 < 1e-30) break;

        bool accepted = false;
        for (int h = 0; h <= 60; ++h) {
            VecC cand = retract(theta - step * gr);
            double fc = objective(cand);
            if (fc <= fx - 1e-4 * step * gnorm2) {
                change = std::abs(fx - fc);
                theta = cand;
                fx = fc;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        if (change <= tol * std::max(1.0, std::abs(fx))) { ++it; break; }
    }

    // Cyclic coordinate polish: for fixed other coordinates the per-circle
    // minimizer is closed-form, so this drives the iterate to a true
    // stationary point instead of stopping on a slow-progress ridge.
    for (int sweep = 0; sweep < 200; ++sweep) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            cdouble c = (A1.row(i) * theta).value() - A1(i, i) * theta[i];
            cdouble target = b1[i] - c;
            double mag = std::abs(target);
            if (mag < 1e-300) continue;
            cdouble next = target / mag;
            moved = std::max(moved, std::abs(next - theta[i]));
            theta[i] = next;
        }
        if (moved < 1e-13) break;
    }
    fx = objective(theta);

    if (stats) {
        stats->iterations = it;
        stats->residual = change;
        stats->converged = true;
    }
    return theta;
}

void dominant_eigpair(const MatC& H, double& lambda_max, VecC& u, bool* zero_flag) {
    const int n = int(H.rows());
    double scale = H.cwiseAbs().maxCoeff();
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
        throw std::domain_error("dominant_eigpair: matrix not Hermitian");
    if (zero_flag) *zero_flag = false;
    if (scale == 0.0) {
        lambda_max = 0.0;
        u = VecC::Zero(n);
        u[0] = 1.0;
        if (zero_flag) *zero_flag = true;
        return;
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(H);
    lambda_max = std::max(0.0, es.eigenvalues()[n - 1]);
    u = es.eigenvectors().col(n - 1);
}

VecC sphere_constrained_min(const ComplexObjective& f, double radius, const VecC& x0,
                            int restarts, Rng& rng, double tol, int max_iters,
                            SolveStats* stats) {
    if (radius <= 0.0) throw std::domain_error("sphere_constrained_min: radius must be > 0");
    const int n = int(x0.size());

    auto retract = [&](const VecC& x) { return VecC(radius * x.normalized()); };

    // The sphere is handled through the scale-invariant parametrization
    // s = radius * v / ||v||, which turns the problem into an unconstrained
    // one that L-BFGS can drive to stationarity; plain projected gradient
    // crawls on the ill-conditioned valleys these objectives have, and a
    // solution that is not stationary keeps drifting when callers re-refine
    // it from a warm start.
    auto run = [&](const VecC& v0, int& iters) {
        RealObjective wrap = [&](const VecR& vr, VecR& gr) {
            VecC v = vr.head(n).cast<cdouble>() +
                     cdouble(0, 1) * vr.tail(n).cast<cdouble>();
            double vn = v.norm();
            VecC s = (radius / vn) * v;
            VecC gs(n);
            double fx = f(s, gs);
            double c = gs.dot(v).real();
            VecC gv = (radius / vn) * (gs - (c / (vn * vn)) * v);
            gr.resize(2 * n);
            gr.head(n) = 2.0 * gv.real();
            gr.tail(n) = 2.0 * gv.imag();
            return fx;
        };
        VecC vstart = v0.normalized();
        VecR vr(2 * n);
        vr.head(n) = vstart.real();
        vr.tail(n) = vstart.imag();
        // Restarted L-BFGS: a single run can stall in the line search long
        // before stationarity on these flat valleys, while a rerun with fresh
        // curvature memory from the stall point keeps descending. Repeat
        // until the iterate stops moving.
        iters = 0;
        for (int round = 0; round < 25; ++round) {
            SolveStats ss;
            VecR next = quasi_newton_minimize(wrap, vr, tol, max_iters, &ss);
            iters += ss.iterations;
            double moved = (next - vr).norm();
            vr = next;
            if (ss.converged || moved <= 1e-12 * vr.norm()) break;
        }
        VecC v = vr.head(n).cast<cdouble>() + cdouble(0, 1) * vr.tail(n).cast<cdouble>();
        VecC s = retract(v);
        VecC gs(n);
        double fx = f(s, gs);
        return std::make_pair(s, fx);
    };

    int total_iters = 0, iters = 0;
    auto best = run(retract(x0), iters);
    total_iters += iters;
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int r = 0; r < restarts; ++r) {
        VecC s(n);
        for (int i = 0; i < n; ++i) s[i] = cdouble(nd(rng), nd(rng));
        auto cand = run(retract(s), iters);
        total_iters += iters;
        // A restart replaces the warm-started solution only on a clear win;
        // hopping between numerically tied local minima destabilizes callers
        // that warm-start from the previous answer.
        if (cand.second < best.second * (1.0 - 1e-3) - 1e-15) best = cand;
    }
    if (stats) {
        stats->iterations = total_iters;
        stats->residual = 0.0;
        stats->converged = true;
    }
    return best.first;
}

}  // namespace fris

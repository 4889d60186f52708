// SPDX-License-Identifier: Apache-2.0
#include "fris/position_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fris {

PositionContext build_position_context(const ChannelSet& ch, const VecC& theta,
                                       const VecC& x, const VecC& s_r, const VecC& s_c,
                                       double omega, double alpha, double lambda, int M) {
    const int N = int(theta.size());
    const int K = int(ch.Sigma_rc.size());

    PositionContext ctx;
    ctx.theta = theta;
    ctx.zeta_G = ch.zeta_G;
    ctx.alpha = alpha;
    ctx.omega = omega;
    ctx.lambda = lambda;
    ctx.angles = ch.angles;

    VecC a_t = ula_steering(ch.angles.phi_t, M);
    cdouble atx = a_t.dot(x);  // a_t^H x
    ctx.c_x = std::norm(atx);
    ctx.c0 = omega * omega * ch.zeta_G * ctx.c_x;

    ctx.a_t_row.resize(N);
    for (int n = 0; n < N; ++n)
        ctx.a_t_row[n] = atx * std::conj(s_r[n]) * std::conj(theta[n]);

    ctx.S.resize(N, K);
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < K; ++k)
            ctx.S(n, k) = std::conj(theta[n]) * atx * std::conj(s_c[k]) * ch.Sigma_rc[k];

    ctx.kappa_rx = std::sin(ch.angles.phi_r) * std::cos(ch.angles.psi_r);
    ctx.kappa_ry = std::sin(ch.angles.psi_r);
    ctx.kappa_cx.resize(K);
    ctx.kappa_cy.resize(K);
    ctx.dkx.resize(K);
    ctx.dky.resize(K);
    ctx.zeta.resize(K);
    for (int k = 0; k < K; ++k) {
        ctx.kappa_cx[k] = std::sin(ch.angles.phi_c[k]) * std::cos(ch.angles.psi_c[k]);
        ctx.kappa_cy[k] = std::sin(ch.angles.psi_c[k]);
        ctx.dkx[k] = ctx.kappa_rx - ctx.kappa_cx[k];
        ctx.dky[k] = ctx.kappa_ry - ctx.kappa_cy[k];
        ctx.zeta[k] = ch.Sigma_rc[k] * ch.Sigma_rc[k];
    }
    return ctx;
}

double f0_value(const PositionContext& ctx, const PositionSet& positions) {
    const int N = int(ctx.theta.size());
    const int K = int(ctx.zeta.size());
    const double sg = std::sqrt(ctx.zeta_G);

    VecC a_r = fris_steering(positions, ctx.angles.phi_r, ctx.angles.psi_r, ctx.lambda);

    cdouble lin = 0;
    for (int n = 0; n < N; ++n) lin += ctx.a_t_row[n] * a_r[n];
    double f = -2.0 * ctx.alpha * sg * lin.real();

    double quart = 0;
    cdouble cross = 0;
    for (int k = 0; k < K; ++k) {
        VecC a_ck = fris_steering(positions, ctx.angles.phi_c[k], ctx.angles.psi_c[k],
                                  ctx.lambda);
        cdouble v = 0;
        for (int n = 0; n < N; ++n) {
            cdouble rn = std::conj(a_ck[n]) * a_r[n];  // e^{j c (d_r - d_ck)}
            v += std::conj(ctx.theta[n]) * rn;
            cross += ctx.S(n, k) * rn;
        }
        quart += ctx.zeta[k] * std::norm(v);
    }
    f += (1.0 - ctx.alpha) * ctx.c0 * quart;
    f += -2.0 * (1.0 - ctx.alpha) * ctx.omega * sg * cross.real();
    return f;
}

SurrogateParams per_element_params(const PositionContext& ctx, int n,
                                   const PositionSet& positions) {
    const int N = int(ctx.theta.size());
    const int K = int(ctx.zeta.size());
    if (n < 0 || n >= N) throw std::invalid_argument("per_element_params: bad index");
    const double sg = std::sqrt(ctx.zeta_G);
    const double c = 2.0 * kPi / ctx.lambda;

    SurrogateParams sp;
    sp.n = n;
    sp.N = N;
    sp.K = K;
    sp.lambda = ctx.lambda;
    sp.kappa_rx = ctx.kappa_rx;
    sp.kappa_ry = ctx.kappa_ry;
    sp.dkx = ctx.dkx;
    sp.dky = ctx.dky;

    sp.nu_n = 2.0 * ctx.alpha * sg * std::abs(ctx.a_t_row[n]);
    sp.xi_n = std::arg(ctx.a_t_row[n]);

    sp.nu_tilde.resize(K);
    sp.xi_tilde = MatR::Zero(N, K);
    sp.nu_bar.resize(K);
    sp.xi_bar.resize(K);
    for (int k = 0; k < K; ++k) {
        sp.nu_tilde[k] = 2.0 * (1.0 - ctx.alpha) * ctx.c0 * ctx.zeta[k];
        sp.nu_bar[k] = 2.0 * (1.0 - ctx.alpha) * ctx.omega * sg * std::abs(ctx.S(n, k));
        sp.xi_bar[k] = std::arg(ctx.S(n, k));
        for (int i = 0; i < N; ++i) {
            if (i == n) continue;
            Vec2 pi = positions.at(i);
            double dr = path_difference(pi, ctx.angles.phi_r, ctx.angles.psi_r);
            double dc = path_difference(pi, ctx.angles.phi_c[k], ctx.angles.psi_c[k]);
            // [theta theta^H]_{i,n} e^{-j c (d_{r,i} - d_{c,k,i})}; unit modulus.
            cdouble ct = ctx.theta[i] * std::conj(ctx.theta[n]) *
                         std::exp(cdouble(0, -c * (dr - dc)));
            sp.xi_tilde(i, k) = std::arg(ct);
        }
    }
    return sp;
}

double f1_value(const SurrogateParams& sp, const Vec2& p_n) {
    const double c = 2.0 * kPi / sp.lambda;
    const double dr = p_n.x() * sp.kappa_rx + p_n.y() * sp.kappa_ry;

    double f = -sp.nu_n * std::cos(sp.xi_n + c * dr);
    for (int k = 0; k < sp.K; ++k) {
        double dd = p_n.x() * sp.dkx[k] + p_n.y() * sp.dky[k];
        for (int i = 0; i < sp.N; ++i) {
            if (i == sp.n) continue;
            f += sp.nu_tilde[k] * std::cos(sp.xi_tilde(i, k) + c * dd);
        }
        f -= sp.nu_bar[k] * std::cos(sp.xi_bar[k] + c * dd);
    }
    return f;
}

F1Derivatives f1_derivatives(const SurrogateParams& sp, const Vec2& p_n) {
    const double c = 2.0 * kPi / sp.lambda;
    const double c2 = c * c;
    F1Derivatives out;

    const double dr = p_n.x() * sp.kappa_rx + p_n.y() * sp.kappa_ry;
    {
        const double ph = sp.xi_n + c * dr;
        const double s = std::sin(ph), co = std::cos(ph);
        out.gradient.x() += sp.nu_n * c * sp.kappa_rx * s;
        out.gradient.y() += sp.nu_n * c * sp.kappa_ry * s;
        out.hessian(0, 0) += sp.nu_n * c2 * sp.kappa_rx * sp.kappa_rx * co;
        out.hessian(0, 1) += sp.nu_n * c2 * sp.kappa_rx * sp.kappa_ry * co;
        out.hessian(1, 1) += sp.nu_n * c2 * sp.kappa_ry * sp.kappa_ry * co;
    }
    for (int k = 0; k < sp.K; ++k) {
        const double dd = p_n.x() * sp.dkx[k] + p_n.y() * sp.dky[k];
        double sin_sum = 0, cos_sum = 0;
        for (int i = 0; i < sp.N; ++i) {
            if (i == sp.n) continue;
            sin_sum += std::sin(sp.xi_tilde(i, k) + c * dd);
            cos_sum += std::cos(sp.xi_tilde(i, k) + c * dd);
        }
        out.gradient.x() -= sp.nu_tilde[k] * c * sp.dkx[k] * sin_sum;
        out.gradient.y() -= sp.nu_tilde[k] * c * sp.dky[k] * sin_sum;
        out.hessian(0, 0) -= sp.nu_tilde[k] * c2 * sp.dkx[k] * sp.dkx[k] * cos_sum;
        out.hessian(0, 1) -= sp.nu_tilde[k] * c2 * sp.dkx[k] * sp.dky[k] * cos_sum;
        out.hessian(1, 1) -= sp.nu_tilde[k] * c2 * sp.dky[k] * sp.dky[k] * cos_sum;

        const double ph = sp.xi_bar[k] + c * dd;
        const double s = std::sin(ph), co = std::cos(ph);
        out.gradient.x() += sp.nu_bar[k] * c * sp.dkx[k] * s;
        out.gradient.y() += sp.nu_bar[k] * c * sp.dky[k] * s;
        out.hessian(0, 0) += sp.nu_bar[k] * c2 * sp.dkx[k] * sp.dkx[k] * co;
        out.hessian(0, 1) += sp.nu_bar[k] * c2 * sp.dkx[k] * sp.dky[k] * co;
        out.hessian(1, 1) += sp.nu_bar[k] * c2 * sp.dky[k] * sp.dky[k] * co;
    }
    out.hessian(1, 0) = out.hessian(0, 1);
    out.delta_n = std::max(out.hessian.norm(), 1e-6);
    return out;
}

double curvature_bound(const SurrogateParams& sp) {
    const double c2 = std::pow(2.0 * kPi / sp.lambda, 2);
    double bound = 4.0 * sp.nu_n;
    for (int k = 0; k < sp.K; ++k) {
        double kap = sp.dkx[k] * sp.dkx[k] + sp.dky[k] * sp.dky[k];
        bound += ((sp.N - 1) * sp.nu_tilde[k] + sp.nu_bar[k]) * kap;
    }
    return c2 * bound;
}

std::vector<QpProblem::Row> linearize_constraints(const Vec2& p_n_prev,
                                                  const std::vector<Vec2>& others,
                                                  double DeltaD, double A) {
    std::vector<QpProblem::Row> rows;
    rows.reserve(others.size() + 4);
    for (const Vec2& q : others) {
        Vec2 diff = p_n_prev - q;
        double dist = diff.norm();
        if (dist < 1e-9)
            throw std::domain_error("linearize_constraints: coincident elements");
        if (dist < DeltaD - 1e-9)
            throw std::invalid_argument(
                "linearize_constraints: expansion point violates spacing");
        Vec2 normal = diff / dist;
        rows.push_back({normal, DeltaD + normal.dot(q)});
    }
    rows.push_back({Vec2(1, 0), 0.0});
    rows.push_back({Vec2(-1, 0), -A});
    rows.push_back({Vec2(0, 1), 0.0});
    rows.push_back({Vec2(0, -1), -A});
    return rows;
}

Vec2 solve_position_qp(const SurrogateQP& sqp) {
    QpProblem qp;
    qp.delta = sqp.delta_n;
    qp.gradient = sqp.gradient;
    qp.expansion_point = sqp.expansion_point;
    qp.rows = sqp.rows;
    return active_set_qp(qp, sqp.expansion_point);
}

PositionSet circle_packing_init(int N, double A, double DeltaD) {
    if (N < 1) throw std::invalid_argument("circle_packing_init: N must be >= 1");
    PositionSet out;
    out.p.resize(N, 2);

    const int m = int(std::ceil(std::sqrt(double(N))));
    const double s = A / m;
    if (s >= DeltaD - 1e-12) {
        // Square cell-center lattice, row-major.
        int idx = 0;
        for (int j = 0; j < m && idx < N; ++j)
            for (int i = 0; i < m && idx < N; ++i, ++idx)
                out.p.row(idx) << (i + 0.5) * s, (j + 0.5) * s;
        return out;
    }

    // Hexagonal fallback at pitch DeltaD.
    const double margin = DeltaD / 2.0;
    const double row_h = DeltaD * std::sqrt(3.0) / 2.0;
    int idx = 0;
    for (int j = 0; idx < N; ++j) {
        double y = margin + j * row_h;
        if (y > A - margin + 1e-12) break;
        double x0 = margin + ((j % 2) ? DeltaD / 2.0 : 0.0);
        for (double x = x0; x <= A - margin + 1e-12 && idx < N; x += DeltaD, ++idx)
            out.p.row(idx) << x, y;
    }
    if (idx < N)
        throw std::runtime_error("circle_packing_init: region cannot hold N elements");
    return out;
}

PositionSet run_position_pass(const PositionContext& ctx, const PositionSet& start,
                              double A, double DeltaD, Rng& rng,
                              const PositionPassOptions& opts) {
    PositionSet pos = start;
    const int N = pos.size();

    // Nearly-coincident elements break the constraint linearization; nudge.
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if ((pos.at(i) - pos.at(j)).norm() < 1e-9) {
                std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
                double a = ang(rng);
                Vec2 step(std::cos(a), std::sin(a));
                Vec2 moved = pos.at(j) + 1e-6 * ctx.lambda * step;
                moved.x() = std::clamp(moved.x(), 0.0, A);
                moved.y() = std::clamp(moved.y(), 0.0, A);
                pos.p.row(j) = moved.transpose();
            }

    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    if (opts.random_order) std::shuffle(order.begin(), order.end(), rng);
    const double f_sweep_start = f0_value(ctx, pos);

    for (int n : order) {
        SurrogateParams sp = per_element_params(ctx, n, pos);

        std::vector<Vec2> others;
        others.reserve(N - 1);
        for (int i = 0; i < N; ++i)
            if (i != n) others.push_back(pos.at(i));

        // MM fixed-point iteration for this element: the surrogate constants
        // depend only on the other (fixed) elements, so re-expanding at each
        // accepted step is exact coordinate descent on the true objective.
        Vec2 p_cur = pos.at(n);
        for (int step = 0; step < opts.max_inner_steps; ++step) {
            F1Derivatives der = f1_derivatives(sp, p_cur);

            SurrogateQP sqp;
            sqp.gradient = der.gradient;
            sqp.delta_n = der.delta_n;
            sqp.expansion_point = p_cur;
            sqp.rows = linearize_constraints(p_cur, others, DeltaD, A);

            const double f_old = f1_value(sp, p_cur);
            Vec2 cand = p_cur;
            for (int d = 0; d <= opts.max_delta_doublings; ++d) {
                Vec2 trial = solve_position_qp(sqp);
                if (f1_value(sp, trial) <= f_old + opts.mono_tol) {
                    cand = trial;
                    break;
                }
                sqp.delta_n *= 2.0;  // surrogate was not an upper bound here
            }
            double moved = (cand - p_cur).norm();
            p_cur = cand;
            if (moved < opts.step_tol) break;
        }
        pos.p.row(n) = p_cur.transpose();
    }

    if (f_sweep_start - f0_value(ctx, pos) < opts.sweep_tol) break;
    }
    return pos;
}

}  // namespace fris

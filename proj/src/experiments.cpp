// SPDX-License-Identifier: Apache-2.0
#include "fris/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fris/comm.hpp"
#include "fris/sensing.hpp"

namespace fris {

namespace {

using nlohmann::json;

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

std::string alpha_variant(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "alpha=%g", alpha);
    return buf;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (const auto& l : lines) out << l << "\n";
}

// Reflected-signal beampattern of one solved state, in normalized dB.
VecR reflected_gain_db(const SolverState& st) {
    VecC s = st.theta.conjugate().asDiagonal() * (st.channels.G * (st.W * st.s_c));
    MatC R = s * s.adjoint();
    BeampatternGrid grid = make_grid(st.cfg);
    MatR ps = beampattern(R, st.positions, grid, st.cfg.lambda);
    VecR col = ps.col(0);
    double peak = std::max(col.maxCoeff(), 1e-300);
    VecR db(col.size());
    for (int i = 0; i < col.size(); ++i)
        db[i] = 10.0 * std::log10(std::max(col[i], 1e-300) / peak);
    return db;
}

}  // namespace

std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::vector<double> default_sweep(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::NSweep: return {16, 36, 64};
        case ExperimentKind::Beampattern: return {0.9, 0.5, 0.1};
        case ExperimentKind::Ber: return {-40, -60, -80};
        case ExperimentKind::RegionSweep: return {2, 4, 6};
        case ExperimentKind::Table1: return {25, 49, 64};
        case ExperimentKind::Convergence: return {};
    }
    return {};
}

std::vector<std::string> run_experiment(const ParsedConfig& cfg, int threads) {
    const ExperimentSpec& spec = cfg.experiment;
    SystemConfig base = cfg.system;
    base.seed = spec.seed;
    base.validate();
    spec.validate();

    std::vector<double> sweep =
        spec.sweep.empty() ? default_sweep(spec.kind) : spec.sweep;

    std::filesystem::create_directories(spec.out_dir);
    std::string csv_path =
        (std::filesystem::path(spec.out_dir) /
         (std::string(experiment_name(spec.kind)) + ".csv"))
            .string();
    std::vector<std::string> lines;
    int solver_failures = 0;

    switch (spec.kind) {
        case ExperimentKind::Convergence: {
            lines.push_back("iteration,epsilon,epsilon_r,epsilon_c,scheme");
            for (SchemeKind s : spec.schemes) {
                SolverState st = run_am(base, s);
                for (const StepTrace& tr : st.trace)
                    lines.push_back(std::to_string(tr.iteration) + "," +
                                    format_g9(tr.eps_after_p) + "," +
                                    format_g9(tr.epsilon_r_tilde) + "," +
                                    format_g9(tr.epsilon_c) + "," + scheme_name(s));
            }
            break;
        }
        case ExperimentKind::NSweep: {
            lines.push_back("N,scheme,mean_eps,std_eps,mean_time_s");
            for (double nv : sweep) {
                SystemConfig c = base;
                c.N = int(nv);
                for (SchemeKind s : spec.schemes) {
                    McReport rep = monte_carlo(c, s, spec.trials, threads);
                    solver_failures += rep.failures;
                    lines.push_back(std::to_string(c.N) + "," + scheme_name(s) + "," +
                                    format_g9(rep.mean_eps) + "," +
                                    format_g9(rep.std_eps) + "," +
                                    format_g9(rep.mean_time_s));
                }
            }
            break;
        }
        case ExperimentKind::Beampattern: {
            lines.push_back("azimuth_deg,gain_db,variant");
            for (double alpha : sweep) {
                SystemConfig c = base;
                c.alpha = alpha;
                SolverState st = run_am(c, SchemeKind::Proposed);
                VecR db = reflected_gain_db(st);
                BeampatternGrid grid = make_grid(c);
                for (int i = 0; i < db.size(); ++i)
                    lines.push_back(format_g9(rad2deg(grid.azimuths[i])) + "," +
                                    format_g9(db[i]) + "," + alpha_variant(alpha));
            }
            break;
        }
        case ExperimentKind::Ber: {
            lines.push_back("noise_dbm,modulation,alpha,mean_ber");
            std::vector<double> noise_w(sweep.size());
            for (size_t i = 0; i < sweep.size(); ++i) noise_w[i] = dbm_to_watts(sweep[i]);
            for (double alpha : {0.9, 0.1}) {
                SystemConfig c = base;
                c.alpha = alpha;
                McReport rep = monte_carlo(c, SchemeKind::Proposed, spec.trials,
                                           threads, /*keep_states=*/true);
                solver_failures += rep.failures;
                for (Constellation mod : {Constellation::QPSK, Constellation::QAM16}) {
                    const int bps = bits_per_symbol(mod);
                    const int blocks = (100000 + c.K * bps - 1) / (c.K * bps);
                    std::vector<double> acc(sweep.size(), 0.0);
                    int ok = 0;
                    for (int t = 0; t < spec.trials; ++t) {
                        if (rep.per_trial[t].failed) continue;
                        const SolverState& st = rep.states[t];
                        Rng rng(trial_seed(spec.seed, 700000 + t));
                        std::vector<double> ber = ber_experiment(
                            st.W, st.theta, st.channels.G, st.channels.H_rc, st.omega,
                            mod, noise_w, blocks, rng);
                        for (size_t i = 0; i < ber.size(); ++i) acc[i] += ber[i];
                        ++ok;
                    }
                    for (size_t i = 0; i < sweep.size(); ++i)
                        lines.push_back(
                            format_g9(sweep[i]) + "," +
                            std::string(mod == Constellation::QPSK ? "QPSK" : "16QAM") +
                            "," + format_g9(alpha) + "," +
                            format_g9(ok > 0 ? acc[i] / ok : 0.0));
                }
            }
            break;
        }
        case ExperimentKind::RegionSweep: {
            lines.push_back("A_over_lambda,scheme,mean_eps");
            for (double ratio : sweep) {
                SystemConfig c = base;
                c.A = ratio * c.lambda;
                for (SchemeKind s : spec.schemes) {
                    McReport rep = monte_carlo(c, s, spec.trials, threads);
                    solver_failures += rep.failures;
                    lines.push_back(format_g9(ratio) + "," + scheme_name(s) + "," +
                                    format_g9(rep.mean_eps));
                }
            }
            break;
        }
        case ExperimentKind::Table1: {
            lines.push_back("scheme,N,mean_eps,time_s");
            for (SchemeKind s : spec.schemes) {
                for (double nv : sweep) {
                    SystemConfig c = base;
                    c.N = int(nv);
                    McReport rep = monte_carlo(c, s, spec.trials, threads);
                    solver_failures += rep.failures;
                    lines.push_back(std::string(scheme_name(s)) + "," +
                                    std::to_string(c.N) + "," +
                                    format_g9(rep.mean_eps) + "," +
                                    format_g9(rep.mean_time_s));
                }
            }
            break;
        }
    }

    write_lines(csv_path, lines);

    json manifest;
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    manifest["config_hash"] = hash_buf;
    manifest["seed"] = spec.seed;
    manifest["version"] = kVersion;
    manifest["experiment"] = experiment_name(spec.kind);
    json schemes = json::array();
    for (SchemeKind s : spec.schemes) schemes.push_back(scheme_name(s));
    manifest["schemes"] = schemes;
    manifest["trials"] = spec.trials;
    manifest["solver_failures"] = solver_failures;
    manifest["files"] = json::array({csv_path});

    std::string manifest_path =
        (std::filesystem::path(spec.out_dir) / "manifest.json").string();
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw std::runtime_error("cannot open output file: " + manifest_path);
    mf << manifest.dump(2) << "\n";

    return {csv_path, manifest_path};
}

}  // namespace fris

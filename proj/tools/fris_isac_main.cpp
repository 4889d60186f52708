// SPDX-License-Identifier: Apache-2.0
//
// fris-isac: experiment driver. Talks to the solver exclusively through the
// public C API.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "fris_isac.h"

namespace {

int thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    int threads = hw ? int(hw) : 1;
    if (const char* env = std::getenv("FRIS_ISAC_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v < 4096) threads = int(v);
    }
    return threads;
}

struct ConfigGuard {
    fris_config* cfg = nullptr;
    ~ConfigGuard() { fris_config_free(cfg); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fRIS-aided ISAC joint beamforming / element-position solver"};
    app.require_subcommand(1);

    std::string config_path, experiment, schemes, out_dir;
    int trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;

    CLI::App* run = app.add_subcommand("run", "run an experiment");
    run->add_option("--config", config_path, "config file (JSON)")->required();
    run->add_option("--experiment", experiment,
                    "convergence|n-sweep|beampattern|ber|region-sweep|table1");
    run->add_option("--scheme", schemes, "comma-separated scheme list");
    run->add_option("--trials", trials, "Monte Carlo trials");
    run->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--out", out_dir, "output directory");

    CLI::App* validate = app.add_subcommand("validate", "validate a config file");
    validate->add_option("--config", config_path, "config file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : FRIS_ERR_CONFIG;
    }

    char err[512] = {0};
    ConfigGuard guard;
    int rc = fris_config_load(config_path.c_str(), &guard.cfg, err, sizeof(err));
    if (rc != FRIS_OK) {
        std::fprintf(stderr, "fris-isac: %s: %s\n", fris_strerror(rc), err);
        return FRIS_ERR_CONFIG;
    }

    if (validate->parsed()) {
        rc = fris_config_validate(guard.cfg, err, sizeof(err));
        if (rc != FRIS_OK) {
            std::fprintf(stderr, "fris-isac: %s: %s\n", fris_strerror(rc), err);
            return FRIS_ERR_CONFIG;
        }
        std::printf("ok: config hash %016llx\n",
                    static_cast<unsigned long long>(fris_config_hash(guard.cfg)));
        return 0;
    }

    if (!experiment.empty())
        rc = fris_config_set_experiment(guard.cfg, experiment.c_str(), err, sizeof(err));
    if (rc == FRIS_OK && !schemes.empty())
        rc = fris_config_set_schemes(guard.cfg, schemes.c_str(), err, sizeof(err));
    if (rc == FRIS_OK && trials > 0)
        rc = fris_config_set_trials(guard.cfg, trials, err, sizeof(err));
    if (rc == FRIS_OK && seed_set) rc = fris_config_set_seed(guard.cfg, seed);
    if (rc == FRIS_OK && !out_dir.empty())
        rc = fris_config_set_out_dir(guard.cfg, out_dir.c_str(), err, sizeof(err));
    if (rc == FRIS_OK) rc = fris_config_validate(guard.cfg, err, sizeof(err));
    if (rc != FRIS_OK) {
        std::fprintf(stderr, "fris-isac: %s: %s\n", fris_strerror(rc), err);
        return FRIS_ERR_CONFIG;
    }

    rc = fris_run(guard.cfg, thread_count(), err, sizeof(err));
    if (rc != FRIS_OK) {
        std::fprintf(stderr, "fris-isac: %s: %s\n", fris_strerror(rc), err);
        return rc;
    }
    return 0;
}

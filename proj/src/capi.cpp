// SPDX-License-Identifier: Apache-2.0
#include "fris_isac.h"

#include <cstring>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fris/config.hpp"
#include "fris/experiments.hpp"

struct fris_config {
    fris::ParsedConfig parsed;
};

namespace {

void set_err(char* errbuf, size_t len, const std::string& msg) {
    if (!errbuf || len == 0) return;
    std::strncpy(errbuf, msg.c_str(), len - 1);
    errbuf[len - 1] = '\0';
}

// invalid_argument is a configuration problem; everything else a solver one.
template <typename Fn>
int guarded(char* errbuf, size_t len, Fn&& fn) {
    try {
        fn();
        return FRIS_OK;
    } catch (const std::invalid_argument& e) {
        set_err(errbuf, len, e.what());
        return FRIS_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_err(errbuf, len, e.what());
        return FRIS_ERR_SOLVER;
    }
}

}  // namespace

extern "C" {

const char* fris_version(void) { return fris::kVersion; }

const char* fris_strerror(int code) {
    switch (code) {
        case FRIS_OK: return "ok";
        case FRIS_ERR_CONFIG: return "configuration error";
        case FRIS_ERR_SOLVER: return "solver failure";
        case FRIS_ERR_INVALID_ARG: return "invalid argument";
        default: return "unknown error";
    }
}

int fris_config_load(const char* path, fris_config** out,
                     char* errbuf, size_t errbuf_len) {
    if (!path || !out) {
        set_err(errbuf, errbuf_len, "null argument");
        return FRIS_ERR_INVALID_ARG;
    }
    *out = nullptr;
    return guarded(errbuf, errbuf_len, [&] {
        auto* cfg = new fris_config{fris::parse_config_file(path)};
        *out = cfg;
    });
}

int fris_config_parse(const char* json_text, fris_config** out,
                      char* errbuf, size_t errbuf_len) {
    if (!json_text || !out) {
        set_err(errbuf, errbuf_len, "null argument");
        return FRIS_ERR_INVALID_ARG;
    }
    *out = nullptr;
    return guarded(errbuf, errbuf_len, [&] {
        auto* cfg = new fris_config{fris::parse_config_text(json_text)};
        *out = cfg;
    });
}

void fris_config_free(fris_config* cfg) { delete cfg; }

int fris_config_set_experiment(fris_config* cfg, const char* kind,
                               char* errbuf, size_t errbuf_len) {
    if (!cfg || !kind) {
        set_err(errbuf, errbuf_len, "null argument");
        return FRIS_ERR_INVALID_ARG;
    }
    return guarded(errbuf, errbuf_len, [&] {
        cfg->parsed.experiment.kind = fris::experiment_from_name(kind);
    });
}

int fris_config_set_schemes(fris_config* cfg, const char* comma_list,
                            char* errbuf, size_t errbuf_len) {
    if (!cfg || !comma_list) {
        set_err(errbuf, errbuf_len, "null argument");
        return FRIS_ERR_INVALID_ARG;
    }
    return guarded(errbuf, errbuf_len, [&] {
        std::vector<fris::SchemeKind> schemes;
        std::stringstream ss(comma_list);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) schemes.push_back(fris::scheme_from_name(item));
        if (schemes.empty())
            throw std::invalid_argument("schemes: empty scheme list");
        cfg->parsed.experiment.schemes = std::move(schemes);
    });
}

int fris_config_set_trials(fris_config* cfg, int trials,
                           char* errbuf, size_t errbuf_len) {
    if (!cfg) {
        set_err(errbuf, errbuf_len, "null argument");
        return FRIS_ERR_INVALID_ARG;
    }
    if (trials < 1) {
        set_err(errbuf, errbuf_len, "trials: must be >= 1");
        return FRIS_ERR_CONFIG;
    }
    cfg->parsed.experiment.trials = trials;
    return FRIS_OK;
}

int fris_config_set_seed(fris_config* cfg, uint64_t seed) {
    if (!cfg) return FRIS_ERR_INVALID_ARG;
    cfg->parsed.experiment.seed = seed;
    cfg->parsed.system.seed = seed;
    return FRIS_OK;
}

int fris_config_set_out_dir(fris_config* cfg, const char* dir,
                            char* errbuf, size_t errbuf_len) {
    if (!cfg || !dir) {
        set_err(errbuf, errbuf_len, "null argument");
        return FRIS_ERR_INVALID_ARG;
    }
    if (!*dir) {
        set_err(errbuf, errbuf_len, "out: empty output directory");
        return FRIS_ERR_CONFIG;
    }
    cfg->parsed.experiment.out_dir = dir;
    return FRIS_OK;
}

int fris_config_validate(const fris_config* cfg, char* errbuf, size_t errbuf_len) {
    if (!cfg) {
        set_err(errbuf, errbuf_len, "null argument");
        return FRIS_ERR_INVALID_ARG;
    }
    return guarded(errbuf, errbuf_len, [&] {
        cfg->parsed.system.validate();
        cfg->parsed.experiment.validate();
    });
}

uint64_t fris_config_hash(const fris_config* cfg) {
    if (!cfg) return 0;
    return fris::config_hash(cfg->parsed);
}

int fris_run(const fris_config* cfg, int threads, char* errbuf, size_t errbuf_len) {
    if (!cfg) {
        set_err(errbuf, errbuf_len, "null argument");
        return FRIS_ERR_INVALID_ARG;
    }
    return guarded(errbuf, errbuf_len, [&] {
        fris::run_experiment(cfg->parsed, threads < 1 ? 1 : threads);
    });
}

}  // extern "C"

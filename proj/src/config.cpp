// SPDX-License-Identifier: Apache-2.0
#include "fris/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fris {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config field '" + key + "': " + what);
}

double require_number(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_power_value(v.get<std::string>(), key);
    fail(key, "expected a number or a dB-suffixed string");
}

int require_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
}

Vec3 require_vec3(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 3) fail(key, "expected an array of 3 numbers");
    return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

}  // namespace

double parse_power_value(const std::string& text, const std::string& key) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            s.end());
    auto ends_with = [&](const std::string& suf) {
        if (s.size() < suf.size()) return false;
        for (size_t i = 0; i < suf.size(); ++i)
            if (std::tolower((unsigned char)s[s.size() - suf.size() + i]) !=
                std::tolower((unsigned char)suf[i]))
                return false;
        return true;
    };
    size_t pos = 0;
    double v = 0;
    bool dbm = ends_with("dbm");
    bool db = !dbm && ends_with("db");
    std::string num = dbm ? s.substr(0, s.size() - 3) : db ? s.substr(0, s.size() - 2) : s;
    try {
        v = std::stod(num, &pos);
    } catch (const std::exception&) {
        fail(key, "cannot parse numeric value '" + text + "'");
    }
    if (pos != num.size()) fail(key, "trailing characters in '" + text + "'");
    if (dbm) return std::pow(10.0, v / 10.0) * 1e-3;  // dBm -> W
    if (db) return std::pow(10.0, v / 10.0);          // dB -> linear
    return v;
}

void SystemConfig::validate() const {
    auto check = [](bool ok, const char* key, const char* what) {
        if (!ok) fail(key, what);
    };
    check(M >= 1, "M", "must be >= 1");
    check(N >= 1, "N", "must be >= 1");
    check(K >= 0, "K", "must be >= 0");
    check(T >= 0, "T", "must be >= 0");
    check(lambda > 0, "lambda", "must be > 0");
    check(P_t > 0, "P_t", "must be > 0 (watts, linear)");
    check(sigma0_sq > 0, "sigma0_sq", "must be > 0 (watts, linear)");
    check(alpha >= 0.0 && alpha <= 1.0, "alpha", "must lie in [0,1]");
    check(A > 0, "A", "must be > 0");
    check(DeltaD > 0, "DeltaD", "must be > 0");
    check(DeltaD <= A, "DeltaD", "must not exceed region side A");
    check(eta > 0, "eta", "must be > 0");
    // Packing feasibility: hexagonal density bound for discs of radius DeltaD/2.
    const double c_pack = 0.9069;
    double disc_area = kPi * (DeltaD / 2.0) * (DeltaD / 2.0);
    check(double(N) * disc_area <= c_pack * A * A, "N",
          "packing infeasible: N*pi*(DeltaD/2)^2 exceeds c_pack*A^2");
    check(I_a >= 1, "I_a", "must be >= 1");
    check(I_e >= 1, "I_e", "must be >= 1");
    check(az_min_deg <= az_max_deg, "az_range_deg", "min must be <= max");
    check(el_min_deg <= el_max_deg, "el_range_deg", "min must be <= max");
    check(am_tol > 0, "am_tol", "must be > 0");
    check(alm_tol > 0, "alm_tol", "must be > 0");
    check(dps_spacing > 0 && dps_spacing <= A, "dps_spacing", "must lie in (0, A]");
    check(int(target_angles.size()) == T, "target_angles_deg", "length must equal T");
    check(user_pos.empty() || int(user_pos.size()) == K, "user_pos",
          "length must equal K");
    check(user_radius >= 0, "user_radius", "must be >= 0");
    check(mainlobe_width_deg > 0, "mainlobe_width_deg", "must be > 0");
    for (const auto& ta : target_angles) {
        check(rad2deg(ta[0]) >= az_min_deg && rad2deg(ta[0]) <= az_max_deg,
              "target_angles_deg", "target azimuth outside grid range");
    }
}

void SystemConfig::place_users(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    user_pos.resize(K);
    for (int k = 0; k < K; ++k) {
        double r = user_radius * std::sqrt(u(rng));
        double a = 2.0 * kPi * u(rng);
        user_pos[k] = user_center + Vec3(r * std::cos(a), r * std::sin(a), 0.0);
    }
}

const char* scheme_name(SchemeKind s) {
    switch (s) {
        case SchemeKind::Proposed: return "proposed";
        case SchemeKind::Conven: return "conven";
        case SchemeKind::DPS: return "dps";
        case SchemeKind::Rand: return "rand";
    }
    return "?";
}

SchemeKind scheme_from_name(const std::string& name) {
    std::string lo = name;
    for (char& c : lo) c = char(std::tolower(static_cast<unsigned char>(c)));
    if (lo == "proposed") return SchemeKind::Proposed;
    if (lo == "conven") return SchemeKind::Conven;
    if (lo == "dps") return SchemeKind::DPS;
    if (lo == "rand") return SchemeKind::Rand;
    fail("schemes", "unknown scheme '" + name + "'");
}

const char* experiment_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::NSweep: return "n-sweep";
        case ExperimentKind::Beampattern: return "beampattern";
        case ExperimentKind::Ber: return "ber";
        case ExperimentKind::RegionSweep: return "region-sweep";
        case ExperimentKind::Table1: return "table1";
    }
    return "?";
}

ExperimentKind experiment_from_name(const std::string& name) {
    if (name == "convergence") return ExperimentKind::Convergence;
    if (name == "n-sweep") return ExperimentKind::NSweep;
    if (name == "beampattern") return ExperimentKind::Beampattern;
    if (name == "ber") return ExperimentKind::Ber;
    if (name == "region-sweep") return ExperimentKind::RegionSweep;
    if (name == "table1") return ExperimentKind::Table1;
    fail("experiment.kind", "unknown experiment '" + name + "'");
}

void ExperimentSpec::validate() const {
    if (trials < 1) fail("experiment.trials", "must be >= 1");
    if (schemes.empty()) fail("experiment.schemes", "must be non-empty");
    if (!sweep.empty()) {
        for (size_t i = 1; i < sweep.size(); ++i)
            if (sweep[i] < sweep[i - 1])
                fail("experiment.sweep", "values must be sorted ascending");
    }
    if (out_dir.empty()) fail("experiment.out", "must be non-empty");
}

namespace {

void parse_system(const json& j, SystemConfig& c) {
    for (const auto& [key, v] : j.items()) {
        if (key == "M") c.M = require_int(v, key);
        else if (key == "N") c.N = require_int(v, key);
        else if (key == "K") c.K = require_int(v, key);
        else if (key == "T") c.T = require_int(v, key);
        else if (key == "lambda") c.lambda = require_number(v, key);
        else if (key == "P_t") c.P_t = require_number(v, key);
        else if (key == "sigma0_sq") c.sigma0_sq = require_number(v, key);
        else if (key == "alpha") c.alpha = require_number(v, key);
        else if (key == "A") c.A = require_number(v, key);
        else if (key == "A_over_lambda") c.A = require_number(v, key) * c.lambda;
        else if (key == "DeltaD") c.DeltaD = require_number(v, key);
        else if (key == "eta") c.eta = require_number(v, key);
        else if (key == "bs_pos") c.bs_pos = require_vec3(v, key);
        else if (key == "fris_pos") c.fris_pos = require_vec3(v, key);
        else if (key == "user_center") c.user_center = require_vec3(v, key);
        else if (key == "user_radius") c.user_radius = require_number(v, key);
        else if (key == "user_pos") {
            if (!v.is_array()) fail(key, "expected an array of [x,y,z] triples");
            c.user_pos.clear();
            for (const auto& e : v) c.user_pos.push_back(require_vec3(e, key));
        } else if (key == "target_angles_deg") {
            if (!v.is_array()) fail(key, "expected an array of [az,el] pairs (degrees)");
            c.target_angles.clear();
            for (const auto& e : v) {
                if (!e.is_array() || e.size() != 2) fail(key, "each entry must be [az,el]");
                c.target_angles.push_back(
                    Vec2(deg2rad(e[0].get<double>()), deg2rad(e[1].get<double>())));
            }
        } else if (key == "mainlobe_width_deg") c.mainlobe_width_deg = require_number(v, key);
        else if (key == "I_a") c.I_a = require_int(v, key);
        else if (key == "I_e") c.I_e = require_int(v, key);
        else if (key == "az_range_deg") {
            if (!v.is_array() || v.size() != 2) fail(key, "expected [min,max]");
            c.az_min_deg = v[0].get<double>();
            c.az_max_deg = v[1].get<double>();
        } else if (key == "el_range_deg") {
            if (!v.is_array() || v.size() != 2) fail(key, "expected [min,max]");
            c.el_min_deg = v[0].get<double>();
            c.el_max_deg = v[1].get<double>();
        } else if (key == "am_tol") c.am_tol = require_number(v, key);
        else if (key == "alm_tol") c.alm_tol = require_number(v, key);
        else if (key == "dps_spacing") c.dps_spacing = require_number(v, key);
        else if (key == "shuffle_position_order") {
            if (!v.is_boolean()) fail(key, "expected a boolean");
            c.shuffle_position_order = v.get<bool>();
        } else if (key == "seed") {
            if (!v.is_number_unsigned() && !v.is_number_integer())
                fail(key, "expected an unsigned integer");
            c.seed = v.get<std::uint64_t>();
        } else if (key == "experiment") {
            // handled by caller
        } else {
            fail(key, "unknown key");
        }
    }
}

void parse_experiment(const json& j, ExperimentSpec& e) {
    for (const auto& [key, v] : j.items()) {
        if (key == "kind") e.kind = experiment_from_name(v.get<std::string>());
        else if (key == "schemes") {
            if (!v.is_array()) fail("experiment.schemes", "expected an array");
            e.schemes.clear();
            for (const auto& s : v) e.schemes.push_back(scheme_from_name(s.get<std::string>()));
        } else if (key == "sweep") {
            if (!v.is_array()) fail("experiment.sweep", "expected an array of numbers");
            e.sweep.clear();
            for (const auto& s : v) e.sweep.push_back(s.get<double>());
        } else if (key == "trials") e.trials = require_int(v, "experiment.trials");
        else if (key == "out") e.out_dir = v.get<std::string>();
        else if (key == "seed") e.seed = v.get<std::uint64_t>();
        else fail("experiment." + key, "unknown key");
    }
}

}  // namespace

ParsedConfig parse_config_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& ex) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");
    ParsedConfig cfg;
    // lambda first so A_over_lambda resolves against the configured wavelength
    if (j.contains("lambda")) cfg.system.lambda = require_number(j["lambda"], "lambda");
    parse_system(j, cfg.system);
    // Defaults tied to the wavelength unless explicitly overridden.
    if (!j.contains("A") && !j.contains("A_over_lambda")) cfg.system.A = 4.0 * cfg.system.lambda;
    if (!j.contains("DeltaD")) cfg.system.DeltaD = cfg.system.lambda / 2.0;
    if (!j.contains("dps_spacing")) cfg.system.dps_spacing = cfg.system.lambda / 4.0;
    if (!j.contains("alm_tol")) cfg.system.alm_tol = 1e-5 * cfg.system.P_t;
    if (j.contains("experiment")) parse_experiment(j["experiment"], cfg.experiment);
    if (!j.contains("experiment") || !j["experiment"].contains("seed"))
        cfg.experiment.seed = cfg.system.seed;
    cfg.system.validate();
    cfg.experiment.validate();
    return cfg;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string canonical_config_string(const ParsedConfig& cfg) {
    const SystemConfig& c = cfg.system;
    json j;
    j["M"] = c.M; j["N"] = c.N; j["K"] = c.K; j["T"] = c.T;
    j["lambda"] = c.lambda; j["P_t"] = c.P_t; j["sigma0_sq"] = c.sigma0_sq;
    j["alpha"] = c.alpha; j["A"] = c.A; j["DeltaD"] = c.DeltaD; j["eta"] = c.eta;
    j["bs_pos"] = {c.bs_pos[0], c.bs_pos[1], c.bs_pos[2]};
    j["fris_pos"] = {c.fris_pos[0], c.fris_pos[1], c.fris_pos[2]};
    j["user_center"] = {c.user_center[0], c.user_center[1], c.user_center[2]};
    j["user_radius"] = c.user_radius;
    j["target_angles"] = json::array();
    for (const auto& t : c.target_angles) j["target_angles"].push_back({t[0], t[1]});
    j["mainlobe_width_deg"] = c.mainlobe_width_deg;
    j["I_a"] = c.I_a; j["I_e"] = c.I_e;
    j["az_range_deg"] = {c.az_min_deg, c.az_max_deg};
    j["el_range_deg"] = {c.el_min_deg, c.el_max_deg};
    j["am_tol"] = c.am_tol; j["alm_tol"] = c.alm_tol; j["dps_spacing"] = c.dps_spacing;
    j["shuffle_position_order"] = c.shuffle_position_order;
    j["seed"] = c.seed;
    const ExperimentSpec& e = cfg.experiment;
    json je;
    je["kind"] = experiment_name(e.kind);
    je["schemes"] = json::array();
    for (auto s : e.schemes) je["schemes"].push_back(scheme_name(s));
    je["sweep"] = e.sweep;
    je["trials"] = e.trials;
    je["seed"] = e.seed;
    j["experiment"] = je;
    return j.dump();
}

std::uint64_t config_hash(const ParsedConfig& cfg) {
    // FNV-1a 64
    std::string s = canonical_config_string(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace fris

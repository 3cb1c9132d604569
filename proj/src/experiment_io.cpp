#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sr/experiment.hpp"

namespace sr {

namespace {

using nlohmann::json;

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

std::string fmt_double(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::BerSweep: return "ber_sweep";
        case ExperimentKind::RateSweep: return "rate_sweep";
        case ExperimentKind::Allocation: return "allocation";
        case ExperimentKind::RisScaling: return "ris_scaling";
        case ExperimentKind::FdsrSweep: return "fdsr_sweep";
    }
    return "unknown";
}

std::string to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::ML: return "ml";
        case DetectorKind::MRC: return "mrc";
        case DetectorKind::ZF: return "zf";
        case DetectorKind::MMSE: return "mmse";
        case DetectorKind::SicZf: return "sic_zf";
        case DetectorKind::SicMmse: return "sic_mmse";
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
    if (name == "ber_sweep") return ExperimentKind::BerSweep;
    if (name == "rate_sweep") return ExperimentKind::RateSweep;
    if (name == "allocation") return ExperimentKind::Allocation;
    if (name == "ris_scaling") return ExperimentKind::RisScaling;
    if (name == "fdsr_sweep") return ExperimentKind::FdsrSweep;
    throw ConfigError("unknown experiment: " + name);
}

DetectorKind detector_from_string(const std::string& name) {
    if (name == "ml") return DetectorKind::ML;
    if (name == "mrc") return DetectorKind::MRC;
    if (name == "zf") return DetectorKind::ZF;
    if (name == "mmse") return DetectorKind::MMSE;
    if (name == "sic_zf") return DetectorKind::SicZf;
    if (name == "sic_mmse") return DetectorKind::SicMmse;
    throw ConfigError("unknown detector: " + name);
}

Scheme scheme_from_string(const std::string& name, int& order) {
    order = 0;
    if (name == "BPSK" || name == "bpsk") return Scheme::BPSK;
    if (name == "QPSK" || name == "qpsk") return Scheme::QPSK;
    if (name.size() > 3 && (name.substr(name.size() - 3) == "QAM" || name.substr(name.size() - 3) == "qam")) {
        order = std::stoi(name.substr(0, name.size() - 3));
        return Scheme::MQAM;
    }
    throw ConfigError("unknown constellation: " + name + " (expected BPSK, QPSK or <M>QAM)");
}

void ExperimentConfig::validate() const {
    system.validate();
    if (rho < 0.0) throw ConfigError("config: rho must be >= 0");
    if (trials == 0) throw ConfigError("config: trials must be > 0");
    const bool needs_snr = experiment == ExperimentKind::BerSweep ||
                           experiment == ExperimentKind::RateSweep ||
                           experiment == ExperimentKind::FdsrSweep;
    if (needs_snr) {
        if (snr_db.empty()) throw ConfigError("config: snr_db grid is empty");
        if (!strictly_increasing(snr_db))
            throw ConfigError("config: snr_db grid must be strictly increasing");
    }
    const bool is_ber = experiment == ExperimentKind::BerSweep ||
                        experiment == ExperimentKind::FdsrSweep;
    if (is_ber && trials < 1000) throw ConfigError("config: BER experiments need trials >= 1000");
    if (experiment == ExperimentKind::BerSweep) {
        if (detectors.empty()) throw ConfigError("config: no detectors selected");
        if (compare_no_backscatter &&
            (detectors.size() != 1 || detectors[0] != DetectorKind::ML))
            throw ConfigError("config: compare_no_backscatter requires detectors = [ml]");
    }
    if (experiment == ExperimentKind::BerSweep || experiment == ExperimentKind::RateSweep) {
        if (K_list.empty() || M_r_list.empty())
            throw ConfigError("config: K_list and M_r_list must be nonempty");
        for (int k : K_list)
            if (k < 1) throw ConfigError("config: K_list entries must be >= 1");
        for (int m : M_r_list)
            if (m < 1) throw ConfigError("config: M_r_list entries must be >= 1");
    }
    if (experiment == ExperimentKind::RisScaling) {
        if (M_b_list.empty()) throw ConfigError("config: M_b_list is empty");
        for (int m : M_b_list)
            if (m < 1) throw ConfigError("config: M_b_list entries must be >= 1");
    }
    if (experiment == ExperimentKind::FdsrSweep) {
        if (fdsr.residual_factors.empty())
            throw ConfigError("config: fdsr.residual_factors is empty");
        for (double r : fdsr.residual_factors)
            if (r < 0.0 || r > 1.0)
                throw ConfigError("config: fdsr residual factors must be in [0, 1]");
    }
    for (double a : alpha_list)
        if (a < 0.0 || a > 1.0) throw ConfigError("config: alpha_list entries must be in [0, 1]");
    if (experiment == ExperimentKind::Allocation) {
        if (alloc.mode != "siso" && alloc.mode != "miso")
            throw ConfigError("config: allocation.mode must be 'siso' or 'miso'");
        if (alloc.states < 1) throw ConfigError("config: allocation.states must be >= 1");
        if (alloc.m_t < 1) throw ConfigError("config: allocation.m_t must be >= 1");
        if (alloc.primary_rate != "upper" && alloc.primary_rate != "lower")
            throw ConfigError("config: allocation.primary_rate must be 'upper' or 'lower'");
    }
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_results: cannot open " + path);
    out << "experiment,detector,K,M_r,snr_db,metric,value,stderr,trials,seed\n";
    for (const ResultRow& r : rows) {
        out << r.experiment << ',' << r.detector << ',' << r.K << ',' << r.M_r << ','
            << fmt_double(r.snr_db) << ',' << r.metric << ',' << fmt_double(r.value) << ','
            << fmt_double(r.stderr_) << ',' << r.trials << ',' << r.seed << '\n';
    }
    if (!out) throw std::runtime_error("write_results: write failed for " + path);
}

std::vector<ResultRow> read_results(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_results: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_results: empty file " + path);
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 10) throw std::runtime_error("read_results: malformed row in " + path);
        ResultRow r;
        r.experiment = f[0];
        r.detector = f[1];
        r.K = std::stoi(f[2]);
        r.M_r = std::stoi(f[3]);
        r.snr_db = f[4].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[4]);
        r.metric = f[5];
        r.value = f[6].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[6]);
        r.stderr_ = f[7].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f[7]);
        r.trials = std::stoull(f[8]);
        r.seed = std::stoull(f[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

cplx cplx_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError("config: complex values are numbers or [re, im] pairs");
}

template <typename T>
void maybe(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

void maybe_opt(const json& j, const char* key, std::optional<double>& target) {
    if (j.contains(key) && !j.at(key).is_null()) target = j.at(key).get<double>();
}

}  // namespace

ExperimentConfig load_config_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("experiment"))
            cfg.experiment = experiment_from_string(j.at("experiment").get<std::string>());
        maybe(j, "label", cfg.label);
        maybe(j, "seed", cfg.seed);
        maybe(j, "trials", cfg.trials);
        maybe(j, "threads", cfg.threads);
        maybe(j, "out", cfg.out);
        maybe(j, "rho", cfg.rho);
        maybe(j, "compare_no_backscatter", cfg.compare_no_backscatter);
        if (j.contains("system")) {
            const json& s = j.at("system");
            maybe(s, "p", cfg.system.p);
            maybe(s, "sigma2", cfg.system.sigma2);
            maybe(s, "K", cfg.system.K);
            maybe(s, "M_r", cfg.system.M_r);
            maybe(s, "alpha", cfg.system.alpha);
            maybe(s, "active_load", cfg.system.active_load);
        }
        cfg.system.seed = cfg.seed;
        if (j.contains("primary_constellation"))
            cfg.primary_scheme =
                scheme_from_string(j.at("primary_constellation").get<std::string>(), cfg.primary_order);
        if (j.contains("secondary_constellation"))
            cfg.secondary_scheme = scheme_from_string(
                j.at("secondary_constellation").get<std::string>(), cfg.secondary_order);
        if (j.contains("detector")) {
            cfg.detectors = {detector_from_string(j.at("detector").get<std::string>())};
        }
        if (j.contains("detectors")) {
            cfg.detectors.clear();
            for (const auto& d : j.at("detectors"))
                cfg.detectors.push_back(detector_from_string(d.get<std::string>()));
        }
        maybe(j, "snr_db", cfg.snr_db);
        maybe(j, "K_list", cfg.K_list);
        maybe(j, "M_r_list", cfg.M_r_list);
        maybe(j, "M_b_list", cfg.M_b_list);
        maybe(j, "alpha_list", cfg.alpha_list);
        if (j.contains("allocation")) {
            const json& a = j.at("allocation");
            maybe(a, "mode", cfg.alloc.mode);
            maybe(a, "states", cfg.alloc.states);
            maybe(a, "w_s", cfg.alloc.w_s);
            maybe(a, "w_c", cfg.alloc.w_c);
            maybe_opt(a, "peak_power", cfg.alloc.peak_power);
            maybe_opt(a, "avg_power", cfg.alloc.avg_power);
            maybe_opt(a, "power_budget", cfg.alloc.power_budget);
            maybe_opt(a, "min_primary_rate", cfg.alloc.min_primary_rate);
            maybe_opt(a, "min_secondary_rate", cfg.alloc.min_secondary_rate);
            maybe(a, "grid", cfg.alloc.grid);
            maybe(a, "primary_rate", cfg.alloc.primary_rate);
            maybe(a, "m_t", cfg.alloc.m_t);
        }
        if (j.contains("fdsr")) {
            const json& f = j.at("fdsr");
            if (f.contains("beta1")) cfg.fdsr.beta1 = cplx_from_json(f.at("beta1"));
            if (f.contains("beta2")) cfg.fdsr.beta2 = cplx_from_json(f.at("beta2"));
            maybe(f, "residual_factors", cfg.fdsr.residual_factors);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_string(ss.str());
}

std::string config_to_json_string(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = to_string(cfg.experiment);
    if (!cfg.label.empty()) j["label"] = cfg.label;
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["threads"] = cfg.threads;
    j["out"] = cfg.out;
    j["rho"] = cfg.rho;
    j["system"] = {{"p", cfg.system.p},      {"sigma2", cfg.system.sigma2},
                   {"K", cfg.system.K},      {"M_r", cfg.system.M_r},
                   {"alpha", cfg.system.alpha}, {"active_load", cfg.system.active_load}};
    auto scheme_name = [](Scheme s, int order) -> std::string {
        switch (s) {
            case Scheme::BPSK: return "BPSK";
            case Scheme::QPSK: return "QPSK";
            case Scheme::MQAM: return std::to_string(order) + "QAM";
        }
        return "BPSK";
    };
    j["primary_constellation"] = scheme_name(cfg.primary_scheme, cfg.primary_order);
    j["secondary_constellation"] = scheme_name(cfg.secondary_scheme, cfg.secondary_order);
    json dets = json::array();
    for (DetectorKind d : cfg.detectors) dets.push_back(to_string(d));
    j["detectors"] = dets;
    if (!cfg.snr_db.empty()) j["snr_db"] = cfg.snr_db;
    j["K_list"] = cfg.K_list;
    j["M_r_list"] = cfg.M_r_list;
    if (!cfg.M_b_list.empty()) j["M_b_list"] = cfg.M_b_list;
    if (!cfg.alpha_list.empty()) j["alpha_list"] = cfg.alpha_list;
    j["compare_no_backscatter"] = cfg.compare_no_backscatter;
    if (cfg.experiment == ExperimentKind::Allocation) {
        json a;
        a["mode"] = cfg.alloc.mode;
        a["states"] = cfg.alloc.states;
        a["w_s"] = cfg.alloc.w_s;
        a["w_c"] = cfg.alloc.w_c;
        if (cfg.alloc.peak_power) a["peak_power"] = *cfg.alloc.peak_power;
        if (cfg.alloc.avg_power) a["avg_power"] = *cfg.alloc.avg_power;
        if (cfg.alloc.power_budget) a["power_budget"] = *cfg.alloc.power_budget;
        if (cfg.alloc.min_primary_rate) a["min_primary_rate"] = *cfg.alloc.min_primary_rate;
        if (cfg.alloc.min_secondary_rate) a["min_secondary_rate"] = *cfg.alloc.min_secondary_rate;
        a["grid"] = cfg.alloc.grid;
        a["primary_rate"] = cfg.alloc.primary_rate;
        a["m_t"] = cfg.alloc.m_t;
        j["allocation"] = a;
    }
    if (cfg.experiment == ExperimentKind::FdsrSweep) {
        j["fdsr"] = {{"beta1", {cfg.fdsr.beta1.real(), cfg.fdsr.beta1.imag()}},
                     {"beta2", {cfg.fdsr.beta2.real(), cfg.fdsr.beta2.imag()}},
                     {"residual_factors", cfg.fdsr.residual_factors}};
    }
    return j.dump(2) + "\n";
}

}  // namespace sr

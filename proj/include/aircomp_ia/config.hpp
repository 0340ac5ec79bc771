#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/topology.hpp"

namespace aircomp_ia {

/// Flat key=value run configuration. Unknown keys are rejected so that a
/// typo cannot silently fall back to a default.
struct SimConfig {
    // Network.
    int clusters = 0;            // K (required)
    int txs_per_cluster = 0;     // r (required)
    std::vector<int> overlaps;   // required for K > 1

    // Scheme.
    int n = 1;
    std::string mode = "float";  // float | exact
    std::string scheme = "auto";  // auto | single_v | two_v

    // Transmission.
    unsigned p = 5;
    double power = 1.0;
    std::vector<double> snr_db;
    bool noise_free = false;
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    bool independent_payloads = false;

    // Channel law.
    double h_min = 0.5;
    double h_max = 2.0;
    std::uint32_t max_denominator = 65536;
    bool real_channels = false;

    // Tolerances and caps.
    double svd_tol = 1e-9;
    std::uint64_t max_columns = 1ull << 24;
    std::uint64_t exact_max_columns = 256;
    std::uint64_t max_block_rows = 8192;
    std::uint64_t containment_rows = 1024;
    std::uint64_t containment_columns = 256;

    // Command-specific knobs.
    std::vector<int> n_list = {1, 2, 3};
    std::vector<int> lemma_sizes = {2, 4, 6};
    std::uint64_t lemma_trials = 200;
    std::uint64_t lemma_seeds = 1;
    std::uint64_t tdma_trials = 50;
    bool dump_artifacts = false;

    std::string out_dir = ".";

    bool exact_mode() const { return mode == "exact"; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

template <class T>
T parse_number(const std::string& text, int line);

template <>
inline long long parse_number<long long>(const std::string& text, int line) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": expected an integer, got '" + text + "'");
    }
}

template <>
inline std::uint64_t parse_number<std::uint64_t>(const std::string& text, int line) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": expected an unsigned integer, got '" + text + "'");
    }
}

template <>
inline double parse_number<double>(const std::string& text, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": expected a number, got '" + text + "'");
    }
}

inline bool parse_bool(const std::string& text, int line) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ParseError("line " + std::to_string(line) + ": expected true/false, got '" + text + "'");
}

inline bool is_prime(unsigned v) {
    if (v < 2) return false;
    for (unsigned d = 2; d * d <= v; ++d) {
        if (v % d == 0) return false;
    }
    return true;
}

}  // namespace detail

/// Parses flat `key = value` text (lists comma-separated, `#` comments).
/// Throws ParseError with the offending line, ValidationError for unknown or
/// duplicated keys and for constraint violations.
inline SimConfig parse_config(const std::string& text) {
    SimConfig cfg;
    std::set<std::string> seen;
    bool have_clusters = false, have_txs = false, have_overlaps = false;

    const std::map<std::string, std::function<void(const std::string&, int)>> handlers = {
        {"K", [&](const std::string& v, int ln) { cfg.clusters = static_cast<int>(detail::parse_number<long long>(v, ln)); have_clusters = true; }},
        {"r", [&](const std::string& v, int ln) { cfg.txs_per_cluster = static_cast<int>(detail::parse_number<long long>(v, ln)); have_txs = true; }},
        {"overlaps", [&](const std::string& v, int ln) {
             cfg.overlaps.clear();
             for (const auto& item : detail::split_list(v)) {
                 cfg.overlaps.push_back(static_cast<int>(detail::parse_number<long long>(item, ln)));
             }
             have_overlaps = true;
         }},
        {"n", [&](const std::string& v, int ln) { cfg.n = static_cast<int>(detail::parse_number<long long>(v, ln)); }},
        {"mode", [&](const std::string& v, int) { cfg.mode = v; }},
        {"scheme", [&](const std::string& v, int) { cfg.scheme = v; }},
        {"p", [&](const std::string& v, int ln) { cfg.p = static_cast<unsigned>(detail::parse_number<long long>(v, ln)); }},
        {"power", [&](const std::string& v, int ln) { cfg.power = detail::parse_number<double>(v, ln); }},
        {"snr_db", [&](const std::string& v, int ln) {
             cfg.snr_db.clear();
             for (const auto& item : detail::split_list(v)) cfg.snr_db.push_back(detail::parse_number<double>(item, ln));
         }},
        {"noise_free", [&](const std::string& v, int ln) { cfg.noise_free = detail::parse_bool(v, ln); }},
        {"trials", [&](const std::string& v, int ln) { cfg.trials = detail::parse_number<std::uint64_t>(v, ln); }},
        {"seed", [&](const std::string& v, int ln) { cfg.seed = detail::parse_number<std::uint64_t>(v, ln); }},
        {"independent_payloads", [&](const std::string& v, int ln) { cfg.independent_payloads = detail::parse_bool(v, ln); }},
        {"h_min", [&](const std::string& v, int ln) { cfg.h_min = detail::parse_number<double>(v, ln); }},
        {"h_max", [&](const std::string& v, int ln) { cfg.h_max = detail::parse_number<double>(v, ln); }},
        {"max_denominator", [&](const std::string& v, int ln) { cfg.max_denominator = static_cast<std::uint32_t>(detail::parse_number<std::uint64_t>(v, ln)); }},
        {"real_channels", [&](const std::string& v, int ln) { cfg.real_channels = detail::parse_bool(v, ln); }},
        {"svd_tol", [&](const std::string& v, int ln) { cfg.svd_tol = detail::parse_number<double>(v, ln); }},
        {"max_columns", [&](const std::string& v, int ln) { cfg.max_columns = detail::parse_number<std::uint64_t>(v, ln); }},
        {"exact_max_columns", [&](const std::string& v, int ln) { cfg.exact_max_columns = detail::parse_number<std::uint64_t>(v, ln); }},
        {"max_block_rows", [&](const std::string& v, int ln) { cfg.max_block_rows = detail::parse_number<std::uint64_t>(v, ln); }},
        {"containment_rows", [&](const std::string& v, int ln) { cfg.containment_rows = detail::parse_number<std::uint64_t>(v, ln); }},
        {"containment_columns", [&](const std::string& v, int ln) { cfg.containment_columns = detail::parse_number<std::uint64_t>(v, ln); }},
        {"n_list", [&](const std::string& v, int ln) {
             cfg.n_list.clear();
             for (const auto& item : detail::split_list(v)) cfg.n_list.push_back(static_cast<int>(detail::parse_number<long long>(item, ln)));
         }},
        {"lemma_sizes", [&](const std::string& v, int ln) {
             cfg.lemma_sizes.clear();
             for (const auto& item : detail::split_list(v)) cfg.lemma_sizes.push_back(static_cast<int>(detail::parse_number<long long>(item, ln)));
         }},
        {"lemma_trials", [&](const std::string& v, int ln) { cfg.lemma_trials = detail::parse_number<std::uint64_t>(v, ln); }},
        {"lemma_seeds", [&](const std::string& v, int ln) { cfg.lemma_seeds = detail::parse_number<std::uint64_t>(v, ln); }},
        {"tdma_trials", [&](const std::string& v, int ln) { cfg.tdma_trials = detail::parse_number<std::uint64_t>(v, ln); }},
        {"dump_artifacts", [&](const std::string& v, int ln) { cfg.dump_artifacts = detail::parse_bool(v, ln); }},
        {"out_dir", [&](const std::string& v, int) { cfg.out_dir = v; }},
    };

    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line) + ": expected key = value");
        }
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        const auto handler = handlers.find(key);
        if (handler == handlers.end()) {
            throw ValidationError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ValidationError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
        }
        handler->second(value, line);
    }

    if (!have_clusters) throw ValidationError("missing required key 'K'");
    if (!have_txs) throw ValidationError("missing required key 'r'");
    if (cfg.clusters > 1 && !have_overlaps) throw ValidationError("missing required key 'overlaps'");
    return cfg;
}

/// Checks every module precondition the config feeds before any computation.
inline void validate_config(const SimConfig& cfg) {
    if (cfg.n < 1) throw ValidationError("n must be >= 1");
    if (cfg.mode != "float" && cfg.mode != "exact") throw ValidationError("mode must be float or exact");
    if (cfg.scheme != "auto" && cfg.scheme != "single_v" && cfg.scheme != "two_v") {
        throw ValidationError("scheme must be auto, single_v or two_v");
    }
    if (!detail::is_prime(cfg.p)) throw ValidationError("p must be prime");
    if (!(cfg.power > 0.0)) throw ValidationError("power must be positive");
    if (cfg.trials < 1) throw ValidationError("trials must be >= 1");
    if (!(cfg.h_min > 0.0) || !(cfg.h_min <= cfg.h_max)) {
        throw ValidationError("channel magnitudes need 0 < h_min <= h_max");
    }
    if (cfg.max_denominator < 1) throw ValidationError("max_denominator must be >= 1");
    if (!(cfg.svd_tol > 0.0 && cfg.svd_tol < 1.0)) throw ValidationError("svd_tol must lie in (0, 1)");
    if (cfg.n_list.empty()) throw ValidationError("n_list must not be empty");
    for (int n : cfg.n_list) {
        if (n < 1) throw ValidationError("every n in n_list must be >= 1");
    }
    for (int l : cfg.lemma_sizes) {
        if (l < 1 || l > 8) throw ValidationError("lemma sizes must lie in [1, 8]");
    }
    if (cfg.lemma_trials < 1) throw ValidationError("lemma_trials must be >= 1");
    if (cfg.lemma_seeds < 1) throw ValidationError("lemma_seeds must be >= 1");

    Topology topo;
    try {
        topo = build_topology(cfg.clusters, cfg.txs_per_cluster, cfg.overlaps);
    } catch (const Error& e) {
        throw ValidationError(e.what());
    }
    if (cfg.scheme == "single_v" && scheme_selector(topo) == Scheme::TwoV) {
        throw ValidationError("single_v cannot be forced when an overlap exceeds 1");
    }
}

inline Scheme effective_scheme(const SimConfig& cfg, const Topology& topo) {
    if (cfg.scheme == "single_v") return Scheme::SingleV;
    if (cfg.scheme == "two_v") return Scheme::TwoV;
    return scheme_selector(topo);
}

/// Canonical serialization: fixed key order, exact value images. Hash of this
/// text goes into every CSV so outputs are traceable to their inputs.
inline std::string canonical_config_text(const SimConfig& cfg) {
    std::ostringstream os;
    auto list_int = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    auto fmt_double = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << "K=" << cfg.clusters << "\n";
    os << "r=" << cfg.txs_per_cluster << "\n";
    os << "overlaps=" << list_int(cfg.overlaps) << "\n";
    os << "n=" << cfg.n << "\n";
    os << "mode=" << cfg.mode << "\n";
    os << "scheme=" << cfg.scheme << "\n";
    os << "p=" << cfg.p << "\n";
    os << "power=" << fmt_double(cfg.power) << "\n";
    os << "snr_db=";
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) os << (i ? "," : "") << fmt_double(cfg.snr_db[i]);
    os << "\n";
    os << "noise_free=" << (cfg.noise_free ? "true" : "false") << "\n";
    os << "trials=" << cfg.trials << "\n";
    os << "seed=" << cfg.seed << "\n";
    os << "independent_payloads=" << (cfg.independent_payloads ? "true" : "false") << "\n";
    os << "h_min=" << fmt_double(cfg.h_min) << "\n";
    os << "h_max=" << fmt_double(cfg.h_max) << "\n";
    os << "max_denominator=" << cfg.max_denominator << "\n";
    os << "real_channels=" << (cfg.real_channels ? "true" : "false") << "\n";
    os << "svd_tol=" << fmt_double(cfg.svd_tol) << "\n";
    os << "max_columns=" << cfg.max_columns << "\n";
    os << "exact_max_columns=" << cfg.exact_max_columns << "\n";
    os << "max_block_rows=" << cfg.max_block_rows << "\n";
    os << "containment_rows=" << cfg.containment_rows << "\n";
    os << "containment_columns=" << cfg.containment_columns << "\n";
    os << "n_list=" << list_int(cfg.n_list) << "\n";
    os << "lemma_sizes=" << list_int(cfg.lemma_sizes) << "\n";
    os << "lemma_trials=" << cfg.lemma_trials << "\n";
    os << "lemma_seeds=" << cfg.lemma_seeds << "\n";
    os << "tdma_trials=" << cfg.tdma_trials << "\n";
    os << "dump_artifacts=" << (cfg.dump_artifacts ? "true" : "false") << "\n";
    return os.str();
}

inline std::string config_hash(const SimConfig& cfg) {
    // FNV-1a over the canonical text.
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical_config_text(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace aircomp_ia

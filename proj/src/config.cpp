#include "padlin/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace padlin {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path, msg);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
}

double as_positive(const json& v, const std::string& path) {
    const double d = as_number(v, path);
    if (!(d > 0.0)) fail(path, "must be positive");
    return d;
}

double as_nonnegative(const json& v, const std::string& path) {
    const double d = as_number(v, path);
    if (d < 0.0) fail(path, "must be >= 0");
    return d;
}

std::uint64_t as_uint(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

std::vector<double> as_number_array(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

bool is_pow2(std::uint64_t v) { return v >= 1 && (v & (v - 1)) == 0; }

void parse_saleh(const json& v, SalehParams& out, const std::string& prefix) {
    if (!v.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, value] : v.items()) {
        const std::string path = join(prefix, key);
        if (key == "alpha_a")
            out.alpha_a = as_positive(value, path);
        else if (key == "beta_a")
            out.beta_a = as_positive(value, path);
        else if (key == "alpha_phi")
            out.alpha_phi = as_number(value, path);
        else if (key == "beta_phi")
            out.beta_phi = as_positive(value, path);
        else if (key == "pm_form") {
            const std::string s = as_string(value, path);
            if (s == "quadratic")
                out.pm_form = PmForm::canonical_quadratic;
            else if (s == "linear")
                out.pm_form = PmForm::linear_numerator;
            else
                fail(path, "expected \"quadratic\" or \"linear\"");
        } else
            fail(path, "unknown key");
    }
}

void parse_modem(const json& v, ModemSection& out, const std::string& prefix) {
    if (!v.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, value] : v.items()) {
        const std::string path = join(prefix, key);
        if (key == "m") {
            out.m = as_uint(value, path);
            if (!is_pow2(out.m) || out.m < 2)
                fail(path, "must be a power of two >= 2");
        } else if (key == "samples_per_symbol") {
            out.samples_per_symbol = as_uint(value, path); // 0 = pick default
        } else if (key == "energy_per_symbol") {
            out.energy_per_symbol = as_positive(value, path);
        } else
            fail(path, "unknown key");
    }
}

void parse_pd(const json& v, PdSection& out, const std::string& prefix) {
    if (!v.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, value] : v.items()) {
        const std::string path = join(prefix, key);
        if (key == "enabled")
            out.enabled = as_bool(value, path);
        else if (key == "mode") {
            const std::string s = as_string(value, path);
            if (s == "analytic")
                out.mode = PdMode::analytic;
            else if (s == "lut")
                out.mode = PdMode::lut;
            else
                fail(path, "expected \"analytic\" or \"lut\"");
        } else if (key == "clamp") {
            const std::string s = as_string(value, path);
            if (s == "clamp")
                out.clamp = ClampPolicy::clamp_to_saturation;
            else if (s == "reject")
                out.clamp = ClampPolicy::reject;
            else
                fail(path, "expected \"clamp\" or \"reject\"");
        } else if (key == "lut_size") {
            out.lut_size = as_uint(value, path);
            if (out.lut_size < 2) fail(path, "need at least two entries");
        } else
            fail(path, "unknown key");
    }
}

void parse_link(const json& v, LinkSection& out, const std::string& prefix) {
    if (!v.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, value] : v.items()) {
        const std::string path = join(prefix, key);
        if (key == "hpa_enabled")
            out.hpa_enabled = as_bool(value, path);
        else if (key == "ibo_db")
            out.ibo_db = as_nonnegative(value, path);
        else if (key == "ebno_db")
            out.ebno_db = as_number_array(value, path);
        else if (key == "symbols_per_point") {
            out.symbols_per_point = as_uint(value, path);
            if (out.symbols_per_point == 0) fail(path, "must be >= 1");
        } else if (key == "seed")
            out.seed = as_uint(value, path);
        else if (key == "drive_level")
            out.drive_level = as_positive(value, path);
        else if (key == "threads") {
            out.threads = unsigned(as_uint(value, path));
            if (out.threads == 0) fail(path, "must be >= 1");
        } else
            fail(path, "unknown key");
    }
}

void parse_sweep(const json& v, SweepConfig& out, const std::string& prefix) {
    if (!v.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, value] : v.items()) {
        const std::string path = join(prefix, key);
        if (key == "variable") {
            const std::string s = as_string(value, path);
            if (s == "ebno")
                out.variable = SweepVariable::ebno;
            else if (s == "ibo")
                out.variable = SweepVariable::ibo;
            else
                fail(path, "expected \"ebno\" or \"ibo\"");
        } else if (key == "values")
            out.values = as_number_array(value, path);
        else
            fail(path, "unknown key");
    }
}

void parse_bounds(const json& v, BoundsConfig& out, const std::string& prefix) {
    if (!v.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, value] : v.items()) {
        const std::string path = join(prefix, key);
        if (key == "n_values") {
            if (!value.is_array() || value.empty())
                fail(path, "expected a non-empty array");
            out.n_values.clear();
            for (std::size_t i = 0; i < value.size(); ++i) {
                const std::string p = path + "[" + std::to_string(i) + "]";
                const std::uint64_t n = as_uint(value[i], p);
                if (!is_pow2(n)) fail(p, "must be a power of two >= 1");
                out.n_values.push_back(std::size_t(n));
            }
        } else if (key == "d_min_sq")
            out.d_min_sq = as_positive(value, path);
        else if (key == "q_form") {
            const std::string s = as_string(value, path);
            if (s == "exact")
                out.q_form = QForm::exact;
            else if (s == "exp_bound")
                out.q_form = QForm::exp_bound;
            else
                fail(path, "expected \"exact\" or \"exp_bound\"");
        } else
            fail(path, "unknown key");
    }
}

void parse_psd(const json& v, PsdConfig& out, const std::string& prefix) {
    if (!v.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, value] : v.items()) {
        const std::string path = join(prefix, key);
        if (key == "m") {
            out.m = as_uint(value, path);
            if (!is_pow2(out.m) || out.m < 2)
                fail(path, "must be a power of two >= 2");
        } else if (key == "samples_per_symbol")
            out.samples_per_symbol = as_uint(value, path);
        else if (key == "symbols") {
            out.symbols = as_uint(value, path);
            if (out.symbols == 0) fail(path, "must be >= 1");
        } else if (key == "cutoff")
            out.cutoff = as_positive(value, path);
        else if (key == "band_edge")
            out.band_edge = as_nonnegative(value, path);
        else if (key == "segment") {
            out.segment = as_uint(value, path);
            if (out.segment < 8 || out.segment % 2 != 0)
                fail(path, "must be even and >= 8");
        } else if (key == "overlap") {
            out.overlap = as_nonnegative(value, path);
            if (out.overlap >= 1.0) fail(path, "must be < 1");
        } else if (key == "drive")
            out.drive = as_positive(value, path);
        else
            fail(path, "unknown key");
    }
}

void parse_trace(const json& v, TraceConfig& out, const std::string& prefix) {
    if (!v.is_object()) fail(prefix, "expected an object");
    for (const auto& [key, value] : v.items()) {
        const std::string path = join(prefix, key);
        if (key == "points") {
            out.points = as_uint(value, path);
            if (out.points < 2) fail(path, "need at least two points");
        } else if (key == "u_max")
            out.u_max = as_positive(value, path);
        else
            fail(path, "unknown key");
    }
}

json parse_text(const std::string& text) {
    const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isspace(c) != 0;
    });
    if (blank) return json::object();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail("$", e.what());
    }
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

ModemConfig ExperimentConfig::modem_config() const {
    return ModemConfig{modem.m, modem.samples_per_symbol, modem.energy_per_symbol};
}

LinkConfig ExperimentConfig::link_config() const {
    LinkConfig l;
    l.modem = modem_config();
    if (link.hpa_enabled) l.hpa = HpaConfig{saleh, link.ibo_db};
    if (pd.enabled) {
        if (!link.hpa_enabled)
            fail("pd.enabled", "predistortion requires link.hpa_enabled");
        l.pd = PdConfig{pd.mode, pd.clamp, pd.lut_size};
    }
    l.ebno_db_grid = link.ebno_db;
    l.symbols_per_point = link.symbols_per_point;
    l.seed = link.seed;
    l.drive_level = link.drive_level;
    l.validate();
    return l;
}

ExperimentConfig parse_config(const std::string& json_text) {
    const json j = parse_text(json_text);
    if (!j.is_object()) fail("$", "configuration must be a JSON object");
    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "saleh")
            parse_saleh(value, cfg.saleh, "saleh");
        else if (key == "modem")
            parse_modem(value, cfg.modem, "modem");
        else if (key == "pd")
            parse_pd(value, cfg.pd, "pd");
        else if (key == "link")
            parse_link(value, cfg.link, "link");
        else if (key == "sweep")
            parse_sweep(value, cfg.sweep, "sweep");
        else if (key == "bounds")
            parse_bounds(value, cfg.bounds, "bounds");
        else if (key == "psd")
            parse_psd(value, cfg.psd, "psd");
        else if (key == "trace")
            parse_trace(value, cfg.trace, "trace");
        else
            fail(key, "unknown key");
    }
    if (cfg.pd.enabled && !cfg.link.hpa_enabled)
        fail("pd.enabled", "predistortion requires link.hpa_enabled");
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json j;
    j["saleh"] = {
        {"alpha_a", cfg.saleh.alpha_a},
        {"beta_a", cfg.saleh.beta_a},
        {"alpha_phi", cfg.saleh.alpha_phi},
        {"beta_phi", cfg.saleh.beta_phi},
        {"pm_form",
         cfg.saleh.pm_form == PmForm::canonical_quadratic ? "quadratic" : "linear"},
    };
    j["modem"] = {
        {"m", cfg.modem.m},
        {"samples_per_symbol", cfg.modem.samples_per_symbol},
        {"energy_per_symbol", cfg.modem.energy_per_symbol},
    };
    j["pd"] = {
        {"enabled", cfg.pd.enabled},
        {"mode", cfg.pd.mode == PdMode::analytic ? "analytic" : "lut"},
        {"clamp",
         cfg.pd.clamp == ClampPolicy::clamp_to_saturation ? "clamp" : "reject"},
        {"lut_size", cfg.pd.lut_size},
    };
    j["link"] = {
        {"hpa_enabled", cfg.link.hpa_enabled},
        {"ibo_db", cfg.link.ibo_db},
        {"ebno_db", cfg.link.ebno_db},
        {"symbols_per_point", cfg.link.symbols_per_point},
        {"seed", cfg.link.seed},
        {"drive_level", cfg.link.drive_level},
        {"threads", cfg.link.threads},
    };
    j["sweep"] = {
        {"variable", cfg.sweep.variable == SweepVariable::ebno ? "ebno" : "ibo"},
    };
    // empty means "use the built-in grid for the variable"; the parser
    // rejects an explicit empty list, so the canonical form omits the key
    if (!cfg.sweep.values.empty()) j["sweep"]["values"] = cfg.sweep.values;
    j["bounds"] = {
        {"n_values", cfg.bounds.n_values},
        {"d_min_sq", cfg.bounds.d_min_sq},
        {"q_form", cfg.bounds.q_form == QForm::exact ? "exact" : "exp_bound"},
    };
    j["psd"] = {
        {"m", cfg.psd.m},
        {"samples_per_symbol", cfg.psd.samples_per_symbol},
        {"symbols", cfg.psd.symbols},
        {"cutoff", cfg.psd.cutoff},
        {"band_edge", cfg.psd.band_edge},
        {"segment", cfg.psd.segment},
        {"overlap", cfg.psd.overlap},
        {"drive", cfg.psd.drive},
    };
    j["trace"] = {
        {"points", cfg.trace.points},
        {"u_max", cfg.trace.u_max},
    };
    return j.dump(2) + "\n";
}

std::uint64_t config_fingerprint(const ExperimentConfig& cfg) {
    return fnv1a(serialize_config(cfg));
}

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides) {
    json j = parse_text(json_text);
    if (!j.is_object()) fail("$", "configuration must be a JSON object");
    for (const std::string& item : overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            fail(item, "expected key.path=value");
        const std::string path = item.substr(0, eq);
        const std::string value_text = item.substr(eq + 1);
        json value;
        try {
            value = json::parse(value_text);
        } catch (const json::parse_error&) {
            value = value_text; // unquoted strings pass through literally
        }
        json* cur = &j;
        std::size_t start = 0;
        while (true) {
            const std::size_t dot = path.find('.', start);
            const std::string seg = path.substr(
                start, dot == std::string::npos ? std::string::npos : dot - start);
            if (seg.empty()) fail(path, "empty path segment");
            if (dot == std::string::npos) {
                (*cur)[seg] = value;
                break;
            }
            json& next = (*cur)[seg];
            if (!next.is_object()) {
                if (!next.is_null()) fail(path, "path crosses a non-object value");
                next = json::object();
            }
            cur = &next;
            start = dot + 1;
        }
    }
    return j.dump(2) + "\n";
}

} // namespace padlin

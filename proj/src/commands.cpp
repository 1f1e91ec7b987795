#include "padlin/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#ifndef PADLIN_VERSION
#define PADLIN_VERSION "0.0.0"
#endif

namespace padlin {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kDbFloor = -400.0; // stands in for log10(0) in CSV output

std::string format_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double db10_floored(double v) {
    if (!(v > 0.0)) return kDbFloor;
    return std::max(10.0 * std::log10(v), kDbFloor);
}

fs::path prepare_dir(const std::string& out_dir) {
    if (out_dir.empty())
        throw ConfigError("--out", "output directory must not be empty");
    fs::path dir{out_dir};
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& file) {
    std::ofstream os(file);
    if (!os)
        throw std::runtime_error("cannot open " + file.string() + " for writing");
    return os;
}

void finish(std::ofstream& os, const fs::path& file) {
    os.flush();
    if (!os) throw std::runtime_error("failed writing " + file.string());
}

json meta_base(const ExperimentConfig& cfg, const std::string& command) {
    json m;
    m["tool"] = "padlin";
    m["version"] = PADLIN_VERSION;
    m["command"] = command;
    m["config_fingerprint"] = config_fingerprint(cfg);
    m["seed"] = cfg.link.seed;
    m["config"] = json::parse(serialize_config(cfg));
    return m;
}

std::string write_meta(const json& meta, const fs::path& dir) {
    const fs::path file = dir / "meta.json";
    std::ofstream os = open_out(file);
    os << meta.dump(2) << "\n";
    finish(os, file);
    return file.string();
}

// Eb/N0 grid for table-producing commands: explicit sweep values when the
// sweep is over Eb/N0, otherwise the link's grid.
std::vector<double> ebno_grid(const ExperimentConfig& cfg) {
    if (cfg.sweep.variable == SweepVariable::ebno && !cfg.sweep.values.empty())
        return cfg.sweep.values;
    return cfg.link.ebno_db;
}

ModemConfig psd_modem(const PsdConfig& p) {
    const std::size_t sps = p.samples_per_symbol
                                ? p.samples_per_symbol
                                : ModemConfig::default_samples_per_symbol(p.m);
    return ModemConfig{p.m, sps, 1.0};
}

// The regrowth experiment's stimulus: a band-limited constant-envelope
// signal (filtering gives it modulus ripple) scaled so its peak hits
// drive * output_max.
ComplexEnvelope psd_stimulus(const ExperimentConfig& cfg) {
    const ModemConfig modem = psd_modem(cfg.psd);
    const std::size_t k = modem.bits_per_symbol();
    CounterStream bits_rng{derive_key(cfg.link.seed, 0, 0, 3)};
    std::vector<std::uint8_t> bits(cfg.psd.symbols * k);
    for (std::size_t i = 0; i < cfg.psd.symbols; ++i) {
        const std::uint64_t draw = bits_rng.next_u64();
        for (std::size_t j = 0; j < k; ++j)
            bits[i * k + j] = std::uint8_t((draw >> (k - 1 - j)) & 1);
    }
    const ComplexEnvelope tx = modulate(map_bits(bits, modem), modem);
    const ComplexEnvelope shaped = bandlimit(tx, cfg.psd.cutoff);
    const double peak = cfg.psd.drive * saturation(cfg.saleh).output_max;
    return scale_to_peak(shaped, peak);
}

std::string write_psd_csv(const PsdEstimate& est, const fs::path& file) {
    std::ofstream os = open_out(file);
    os << "freq,density_db\n";
    for (std::size_t i = 0; i < est.frequencies.size(); ++i)
        os << format_g(est.frequencies[i]) << ","
           << format_g(db10_floored(est.density[i])) << "\n";
    finish(os, file);
    return file.string();
}

} // namespace

std::vector<std::string> run_trace_hpa(const ExperimentConfig& cfg,
                                       const std::string& out_dir) {
    cfg.saleh.validate();
    const fs::path dir = prepare_dir(out_dir);
    const fs::path file = dir / "trace_hpa.csv";
    std::ofstream os = open_out(file);
    os << "u,am_am,am_pm\n";
    const double step = cfg.trace.u_max / double(cfg.trace.points - 1);
    for (std::size_t i = 0; i < cfg.trace.points; ++i) {
        const double u = step * double(i);
        os << format_g(u) << "," << format_g(am_am(u, cfg.saleh)) << ","
           << format_g(am_pm(u, cfg.saleh)) << "\n";
    }
    finish(os, file);

    json meta = meta_base(cfg, "trace-hpa");
    const SaturationPoint sat = saturation(cfg.saleh);
    meta["saturation"] = {{"input_sat", sat.input_sat},
                          {"output_max", sat.output_max}};
    return {file.string(), write_meta(meta, dir)};
}

std::vector<std::string> run_trace_pd(const ExperimentConfig& cfg,
                                      const std::string& out_dir) {
    cfg.saleh.validate();
    const fs::path dir = prepare_dir(out_dir);
    const SaturationPoint sat = saturation(cfg.saleh);

    const fs::path file = dir / "trace_pd.csv";
    std::ofstream os = open_out(file);
    os << "u,am_am_inverse,pm_correction\n";
    const double step = sat.output_max / double(cfg.trace.points - 1);
    for (std::size_t i = 0; i < cfg.trace.points; ++i) {
        // the last grid point is output_max exactly, not step*points rounding
        const double u = i + 1 == cfg.trace.points ? sat.output_max
                                                   : step * double(i);
        os << format_g(u) << ","
           << format_g(am_am_inverse(u, cfg.saleh, cfg.pd.clamp)) << ","
           << format_g(pm_correction(u, cfg.saleh, cfg.pd.clamp)) << "\n";
    }
    finish(os, file);

    const fs::path lut_file = dir / "lut.csv";
    std::ofstream lut_os = open_out(lut_file);
    write_csv(build_lut(cfg.saleh, cfg.pd.lut_size), lut_os);
    finish(lut_os, lut_file);

    json meta = meta_base(cfg, "trace-pd");
    meta["saturation"] = {{"input_sat", sat.input_sat},
                          {"output_max", sat.output_max}};
    return {file.string(), lut_file.string(), write_meta(meta, dir)};
}

std::vector<std::string> run_bounds(const ExperimentConfig& cfg,
                                    const std::string& out_dir) {
    const fs::path dir = prepare_dir(out_dir);
    const std::vector<double> grid = ebno_grid(cfg);

    const fs::path file = dir / "bounds.csv";
    std::ofstream os = open_out(file);
    os << "ebno_db,n,ber_bound,ser_bound\n";
    for (double ebno : grid)
        for (std::size_t n : cfg.bounds.n_values) {
            const BerBoundParams p{n, cfg.bounds.d_min_sq};
            os << format_g(ebno) << "," << n << ","
               << format_g(ber_bound(p, ebno, cfg.bounds.q_form)) << ","
               << format_g(ser_bound(p, ebno, cfg.bounds.q_form)) << "\n";
        }
    finish(os, file);

    return {file.string(), write_meta(meta_base(cfg, "bounds"), dir)};
}

std::vector<std::string> run_compare(const ExperimentConfig& cfg,
                                     const std::string& out_dir) {
    const fs::path dir = prepare_dir(out_dir);
    const std::vector<double> grid = ebno_grid(cfg);

    const fs::path file = dir / "compare.csv";
    std::ofstream os = open_out(file);
    os << "ebno_db,n,ber_bound,mpsk_ber,mqam_ber\n";
    for (double ebno : grid)
        for (std::size_t n : cfg.bounds.n_values) {
            const BerBoundParams p{n, cfg.bounds.d_min_sq};
            const std::size_t m = 4 * n; // same alphabet size for everyone
            const double mpsk = baseline_ber(BaselineScheme::mpsk, m, ebno);
            const std::size_t bits = std::size_t(std::lround(std::log2(double(m))));
            const double mqam =
                bits % 2 == 0 ? baseline_ber(BaselineScheme::mqam, m, ebno)
                              : std::numeric_limits<double>::quiet_NaN();
            os << format_g(ebno) << "," << n << ","
               << format_g(ber_bound(p, ebno, cfg.bounds.q_form)) << ","
               << format_g(mpsk) << "," << format_g(mqam) << "\n";
        }
    finish(os, file);

    return {file.string(), write_meta(meta_base(cfg, "compare"), dir)};
}

std::vector<std::string> run_simulate(const ExperimentConfig& cfg,
                                      const std::string& out_dir) {
    const LinkConfig link = cfg.link_config();
    const fs::path dir = prepare_dir(out_dir);

    std::vector<double> values = cfg.sweep.values;
    if (values.empty())
        values = cfg.sweep.variable == SweepVariable::ebno
                     ? cfg.link.ebno_db
                     : std::vector<double>{5.0, 7.0, 9.0};

    const std::vector<BerCurve> curves =
        sweep(link, cfg.sweep.variable, values, cfg.link.threads);

    std::vector<std::string> files;
    json curve_meta = json::array();
    for (const BerCurve& curve : curves) {
        const fs::path file = dir / ("ber_" + curve.label + ".csv");
        std::ofstream os = open_out(file);
        LinkConfig curve_link = link;
        if (cfg.sweep.variable == SweepVariable::ibo && curve_link.hpa) {
            // recover this curve's back-off from its position in the sweep
            const std::size_t idx = files.size();
            curve_link.hpa->ibo_db = values[idx];
        }
        write_csv(curve, curve_link, os);
        finish(os, file);
        files.push_back(file.string());
        curve_meta.push_back({{"label", curve.label},
                              {"file", file.filename().string()},
                              {"fingerprint", curve.config_fingerprint},
                              {"complete", curve.complete},
                              {"abort_reason", curve.abort_reason}});
    }

    json meta = meta_base(cfg, "simulate");
    meta["curves"] = curve_meta;
    files.push_back(write_meta(meta, dir));
    return files;
}

std::vector<std::string> run_psd(const ExperimentConfig& cfg,
                                 const std::string& out_dir) {
    cfg.saleh.validate();
    const ModemConfig modem = psd_modem(cfg.psd);
    if (cfg.psd.segment > cfg.psd.symbols * modem.samples_per_symbol)
        throw ConfigError("psd.segment", "longer than the generated signal");
    const fs::path dir = prepare_dir(out_dir);

    const ComplexEnvelope stimulus = psd_stimulus(cfg);

    PredistorterSpec spec;
    spec.params = cfg.saleh;
    spec.mode = cfg.pd.mode;
    spec.clamp = cfg.pd.clamp;
    if (spec.mode == PdMode::lut)
        spec.lut = build_lut(cfg.saleh, cfg.pd.lut_size);

    const ComplexEnvelope through_hpa = apply_hpa(stimulus, cfg.saleh);
    const ComplexEnvelope through_pd_hpa = cascade_pd_hpa(stimulus, spec);

    const PsdEstimate psd_lin = psd_welch(stimulus, cfg.psd.segment, cfg.psd.overlap);
    const PsdEstimate psd_hpa = psd_welch(through_hpa, cfg.psd.segment, cfg.psd.overlap);
    const PsdEstimate psd_pd = psd_welch(through_pd_hpa, cfg.psd.segment, cfg.psd.overlap);

    std::vector<std::string> files;
    files.push_back(write_psd_csv(psd_lin, dir / "psd_linear.csv"));
    files.push_back(write_psd_csv(psd_hpa, dir / "psd_hpa.csv"));
    files.push_back(write_psd_csv(psd_pd, dir / "psd_hpa_pd.csv"));

    json meta = meta_base(cfg, "psd");
    meta["oob_db"] = {
        {"linear", oob_power_ratio(psd_lin, cfg.psd.band_edge)},
        {"hpa", oob_power_ratio(psd_hpa, cfg.psd.band_edge)},
        {"hpa_pd", oob_power_ratio(psd_pd, cfg.psd.band_edge)},
    };
    meta["papr_db"] = {
        {"stimulus", measure_power(stimulus).papr_db},
        {"hpa", measure_power(through_hpa).papr_db},
        {"hpa_pd", measure_power(through_pd_hpa).papr_db},
    };
    files.push_back(write_meta(meta, dir));
    return files;
}

std::vector<std::string> run_command(const std::string& command,
                                     const ExperimentConfig& cfg,
                                     const std::string& out_dir) {
    if (command == "trace-hpa") return run_trace_hpa(cfg, out_dir);
    if (command == "trace-pd") return run_trace_pd(cfg, out_dir);
    if (command == "bounds") return run_bounds(cfg, out_dir);
    if (command == "compare") return run_compare(cfg, out_dir);
    if (command == "simulate") return run_simulate(cfg, out_dir);
    if (command == "psd") return run_psd(cfg, out_dir);
    throw ConfigError(command, "unknown command");
}

} // namespace padlin

#pragma once

#include "padlin/analysis.hpp"
#include "padlin/sim.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace padlin {

// Configuration problem tied to a dotted key path ("saleh.beta_a").
struct ConfigError : std::runtime_error {
    std::string path;
    ConfigError(std::string p, const std::string& msg)
        : std::runtime_error(p + ": " + msg), path(std::move(p)) {}
};

struct SweepConfig {
    SweepVariable variable = SweepVariable::ebno;
    std::vector<double> values; // empty: ebno -> link grid, ibo -> {5,7,9}
};

struct BoundsConfig {
    std::vector<std::size_t> n_values = {1, 4, 16};
    double d_min_sq = 2.0;
    QForm q_form = QForm::exact;
};

// Self-contained spectral-regrowth experiment: a band-limited constant-
// envelope signal (the filter gives it modulus ripple) is hard-driven
// through the amplifier with and without predistortion.
struct PsdConfig {
    std::size_t m = 4;
    std::size_t samples_per_symbol = 8;
    std::size_t symbols = 4096;
    double cutoff = 0.9;     // lowpass edge, symbol-rate units
    double band_edge = 2.0;  // out-of-band boundary for the reported ratios
    std::size_t segment = 1024;
    double overlap = 0.5;
    double drive = 1.2;      // peak modulus as a fraction of output_max
};

struct TraceConfig {
    std::size_t points = 1001;
    double u_max = 2.0;
};

struct LinkSection {
    bool hpa_enabled = true;
    double ibo_db = 5.0;
    std::vector<double> ebno_db = {0, 2, 4, 6, 8, 10, 12, 14};
    std::size_t symbols_per_point = 100000;
    std::uint64_t seed = 12345;
    double drive_level = 0.9;
    unsigned threads = 1;
};

struct PdSection {
    bool enabled = false;
    PdMode mode = PdMode::analytic;
    ClampPolicy clamp = ClampPolicy::clamp_to_saturation;
    std::size_t lut_size = 1024;
};

struct ModemSection {
    std::size_t m = 16;
    std::size_t samples_per_symbol = 0; // 0 = default for m
    double energy_per_symbol = 1.0;
};

struct ExperimentConfig {
    SalehParams saleh;
    ModemSection modem;
    PdSection pd;
    LinkSection link;
    SweepConfig sweep;
    BoundsConfig bounds;
    PsdConfig psd;
    TraceConfig trace;

    ModemConfig modem_config() const;
    LinkConfig link_config() const; // assembles and validates the sim view
};

// Strict JSON parse: unknown keys are rejected, every value is validated,
// missing keys take defaults. Empty or whitespace-only text is the
// all-defaults configuration.
ExperimentConfig parse_config(const std::string& json_text);

// Canonical serialization (sorted keys, every field explicit). Feeding it
// back through parse_config reproduces the same document.
std::string serialize_config(const ExperimentConfig& cfg);

// FNV-1a over the canonical serialization; stamped into output metadata so
// result files are traceable to the exact configuration.
std::uint64_t config_fingerprint(const ExperimentConfig& cfg);

// Apply "dotted.path=value" overrides (the CLI's --set) onto a JSON text;
// values parse as JSON scalars/arrays, falling back to strings.
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides);

} // namespace padlin

#pragma once

#include "padlin/modem.hpp"
#include "padlin/predistort.hpp"
#include "padlin/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace padlin {

struct HpaConfig {
    SalehParams params;
    double ibo_db = 5.0;
};

struct PdConfig {
    PdMode mode = PdMode::analytic;
    ClampPolicy clamp = ClampPolicy::clamp_to_saturation;
    std::size_t lut_size = 1024;
};

// One end-to-end link: modulator, optional amplifier at a fixed back-off,
// optional predistorter in front of it, AWGN at each grid point.
struct LinkConfig {
    ModemConfig modem;
    std::optional<HpaConfig> hpa;
    std::optional<PdConfig> pd; // requires hpa
    std::vector<double> ebno_db_grid = {0, 2, 4, 6, 8, 10, 12, 14};
    std::size_t symbols_per_point = 100000;
    std::uint64_t seed = 12345;
    double drive_level = 0.9; // peak modulus into the PD/HPA chain, as a
                              // fraction of the amplifier's output_max

    void validate() const;
};

// Complex AWGN calibrated for the sqrt(2E/T) envelope convention:
// per-sample complex variance P_avg * samples_per_symbol / (2 * Es/N0),
// split evenly between real and imaginary parts, which puts the matched
// correlation SNR at the textbook 2*Es/N0. +inf passes the signal through.
ComplexEnvelope add_awgn(const ComplexEnvelope& env, double esno_db,
                         CounterStream& noise);

struct PointCounts {
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t symbols = 0;
    std::uint64_t symbol_errors = 0;

    double ber() const { return bits ? double(bit_errors) / double(bits) : 0.0; }
    double ser() const { return symbols ? double(symbol_errors) / double(symbols) : 0.0; }
    PointCounts& operator+=(const PointCounts& o);
};

struct BerPoint {
    double ebno_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t symbols = 0;
    std::uint64_t symbol_errors = 0;
    double ber = 0.0;
    double ser = 0.0;
};

struct BerCurve {
    std::string label;
    std::vector<BerPoint> points;
    std::uint64_t config_fingerprint = 0;
    bool complete = true;
    std::string abort_reason;
};

// Symbols are processed in fixed blocks; each block is an independent
// mini-transmission (own bit stream, own noise stream, phase start at 0),
// keyed by (seed, point index, block index). Counts therefore merge exactly
// under any block split, ordering, or worker count.
inline constexpr std::size_t kSymbolsPerBlock = 1000;

std::size_t blocks_per_point(const LinkConfig& cfg);

// Run a contiguous range of a point's blocks. Block indices address the
// point's global block layout, so sub-ranges merged together equal the
// full-point run bit for bit.
PointCounts run_blocks(const LinkConfig& cfg, double ebno_db,
                       std::size_t point_index, std::size_t first_block,
                       std::size_t n_blocks);

PointCounts run_point(const LinkConfig& cfg, double ebno_db,
                      std::size_t point_index = 0, unsigned threads = 1);

enum class SweepVariable { ebno, ibo };

// ebno: one curve across `values`. ibo: one curve per value, each across
// cfg.ebno_db_grid; point indices depend only on grid position, so curves
// for different back-offs (or with the predistorter toggled) see identical
// bit and noise draws.
std::vector<BerCurve> sweep(const LinkConfig& cfg, SweepVariable variable,
                            const std::vector<double>& values,
                            unsigned threads = 1);

std::uint64_t link_fingerprint(const LinkConfig& cfg);

// columns ebno_db,bits,bit_errors,ber,symbols,symbol_errors,ser,bound;
// bound is the bit-error union bound at N = M/4 (nan when M < 4)
void write_csv(const BerCurve& curve, const LinkConfig& cfg, std::ostream& os);

} // namespace padlin

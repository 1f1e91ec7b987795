#include "padlin/sim.hpp"

#include "padlin/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace padlin {

namespace {

std::string format_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string curve_label(const LinkConfig& cfg) {
    if (!cfg.hpa) return "linear";
    std::string label = "hpa_ibo" + format_g(cfg.hpa->ibo_db);
    if (cfg.pd) label += "_pd";
    return label;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

BerPoint to_point(double ebno_db, const PointCounts& c) {
    BerPoint p;
    p.ebno_db = ebno_db;
    p.bits = c.bits;
    p.bit_errors = c.bit_errors;
    p.symbols = c.symbols;
    p.symbol_errors = c.symbol_errors;
    p.ber = c.ber();
    p.ser = c.ser();
    return p;
}

} // namespace

void LinkConfig::validate() const {
    modem.validate();
    if (pd && !hpa)
        throw std::invalid_argument("LinkConfig: predistortion requires the amplifier");
    if (hpa) {
        hpa->params.validate();
        if (hpa->ibo_db < 0.0)
            throw std::invalid_argument("LinkConfig: back-off must be >= 0 dB");
    }
    if (pd && pd->mode == PdMode::lut && pd->lut_size < 2)
        throw std::invalid_argument("LinkConfig: table needs at least two entries");
    if (ebno_db_grid.empty())
        throw std::invalid_argument("LinkConfig: empty Eb/N0 grid");
    if (symbols_per_point == 0)
        throw std::invalid_argument("LinkConfig: symbols_per_point must be >= 1");
    if (!(drive_level > 0.0))
        throw std::invalid_argument("LinkConfig: drive_level must be positive");
}

ComplexEnvelope add_awgn(const ComplexEnvelope& env, double esno_db,
                         CounterStream& noise) {
    if (std::isinf(esno_db) && esno_db > 0.0) return env;
    if (std::isnan(esno_db))
        throw std::invalid_argument("add_awgn: Es/N0 must not be NaN");
    const double avg = measure_power(env).average_power;
    if (avg == 0.0) return env;
    // Per-sample variance P*S/(2*EsN0): with the sqrt(2E/T) amplitude
    // convention the complex envelope carries twice the symbol energy, so the
    // matched-correlation SNR comes out at the textbook 2Es/N0 and the
    // d^2 = 2 minimum-distance family is exact for this sampled system.
    const double esno = std::pow(10.0, esno_db / 10.0);
    const double sigma =
        std::sqrt(avg * double(env.samples_per_symbol) / (2.0 * esno));
    ComplexEnvelope out = env;
    for (cplx& x : out.samples) x += sigma * noise.next_gaussian_pair();
    return out;
}

PointCounts& PointCounts::operator+=(const PointCounts& o) {
    bits += o.bits;
    bit_errors += o.bit_errors;
    symbols += o.symbols;
    symbol_errors += o.symbol_errors;
    return *this;
}

std::size_t blocks_per_point(const LinkConfig& cfg) {
    return (cfg.symbols_per_point + kSymbolsPerBlock - 1) / kSymbolsPerBlock;
}

PointCounts run_blocks(const LinkConfig& cfg, double ebno_db,
                       std::size_t point_index, std::size_t first_block,
                       std::size_t n_blocks) {
    cfg.validate();
    const std::size_t total = blocks_per_point(cfg);
    if (first_block > total || n_blocks > total - first_block)
        throw std::invalid_argument("run_blocks: block range beyond the point");

    const std::size_t k = cfg.modem.bits_per_symbol();
    const double esno_db = ebno_db + 10.0 * std::log10(double(k));

    std::optional<PredistorterSpec> pd_spec;
    if (cfg.pd) {
        PredistorterSpec spec;
        spec.params = cfg.hpa->params;
        spec.mode = cfg.pd->mode;
        spec.clamp = cfg.pd->clamp;
        if (spec.mode == PdMode::lut)
            spec.lut = build_lut(spec.params, cfg.pd->lut_size);
        pd_spec = std::move(spec);
    }

    PointCounts counts;
    for (std::size_t b = first_block; b < first_block + n_blocks; ++b) {
        const std::size_t done = b * kSymbolsPerBlock;
        const std::size_t syms =
            std::min(kSymbolsPerBlock, cfg.symbols_per_point - done);

        CounterStream bits_rng{derive_key(cfg.seed, point_index, b, 1)};
        std::vector<std::uint8_t> bits(syms * k);
        for (std::size_t i = 0; i < syms; ++i) {
            const std::uint64_t draw = bits_rng.next_u64();
            for (std::size_t j = 0; j < k; ++j)
                bits[i * k + j] = std::uint8_t((draw >> (k - 1 - j)) & 1);
        }
        const SymbolSequence sent = map_bits(bits, cfg.modem);
        const ComplexEnvelope tx = modulate(sent, cfg.modem);

        ComplexEnvelope channel_in;
        if (cfg.hpa) {
            const SaturationPoint sat = saturation(cfg.hpa->params);
            const ComplexEnvelope driven =
                scale_to_peak(tx, cfg.drive_level * sat.output_max);
            const double source_power = measure_power(driven).average_power;
            const OperatingPoint op = OperatingPoint::from_ibo(
                cfg.hpa->params, cfg.hpa->ibo_db, source_power);
            channel_in = pd_spec ? cascade_pd_hpa(driven, *pd_spec, op)
                                 : apply_hpa(driven, op);
        } else {
            channel_in = tx;
        }

        CounterStream noise_rng{derive_key(cfg.seed, point_index, b, 2)};
        const ComplexEnvelope rx = add_awgn(channel_in, esno_db, noise_rng);
        const SymbolSequence detected = demodulate(rx, cfg.modem);
        const std::vector<std::uint8_t> rx_bits = unmap_bits(detected, cfg.modem);

        counts.symbols += syms;
        counts.bits += syms * k;
        for (std::size_t i = 0; i < syms; ++i)
            if (detected[i] != sent[i]) ++counts.symbol_errors;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (rx_bits[i] != bits[i]) ++counts.bit_errors;
    }
    return counts;
}

PointCounts run_point(const LinkConfig& cfg, double ebno_db,
                      std::size_t point_index, unsigned threads) {
    cfg.validate();
    const std::size_t total = blocks_per_point(cfg);
    if (threads <= 1 || total <= 1)
        return run_blocks(cfg, ebno_db, point_index, 0, total);

    const unsigned workers = unsigned(std::min<std::size_t>(threads, total));
    std::vector<PointCounts> slots(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t first = std::min<std::size_t>(w * chunk, total);
        const std::size_t count = std::min(chunk, total - first);
        pool.emplace_back([&, w, first, count] {
            try {
                slots[w] = run_blocks(cfg, ebno_db, point_index, first, count);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    PointCounts sum;
    for (const PointCounts& s : slots) sum += s;
    return sum;
}

std::vector<BerCurve> sweep(const LinkConfig& cfg, SweepVariable variable,
                            const std::vector<double>& values,
                            unsigned threads) {
    cfg.validate();
    if (values.empty())
        throw std::invalid_argument("sweep: no values to sweep");

    const auto run_curve = [threads](const LinkConfig& link,
                                     const std::vector<double>& grid) {
        BerCurve curve;
        curve.label = curve_label(link);
        curve.config_fingerprint = link_fingerprint(link);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            try {
                curve.points.push_back(
                    to_point(grid[i], run_point(link, grid[i], i, threads)));
            } catch (const std::exception& e) {
                curve.complete = false;
                curve.abort_reason = e.what();
                break;
            }
        }
        return curve;
    };

    std::vector<BerCurve> curves;
    if (variable == SweepVariable::ebno) {
        curves.push_back(run_curve(cfg, values));
    } else {
        if (!cfg.hpa)
            throw std::invalid_argument("sweep: back-off sweep requires the amplifier");
        for (double ibo : values) {
            LinkConfig link = cfg;
            link.hpa->ibo_db = ibo;
            curves.push_back(run_curve(link, cfg.ebno_db_grid));
        }
    }
    return curves;
}

std::uint64_t link_fingerprint(const LinkConfig& cfg) {
    std::string text = "m=" + std::to_string(cfg.modem.m) +
                       ";sps=" + std::to_string(cfg.modem.samples_per_symbol) +
                       ";es=" + format_g(cfg.modem.energy_per_symbol);
    if (cfg.hpa) {
        text += ";hpa=" + format_g(cfg.hpa->params.alpha_a) + "," +
                format_g(cfg.hpa->params.beta_a) + "," +
                format_g(cfg.hpa->params.alpha_phi) + "," +
                format_g(cfg.hpa->params.beta_phi) + "," +
                (cfg.hpa->params.pm_form == PmForm::canonical_quadratic
                     ? "quadratic"
                     : "linear") +
                ";ibo=" + format_g(cfg.hpa->ibo_db);
    }
    if (cfg.pd) {
        text += ";pd=";
        text += cfg.pd->mode == PdMode::analytic ? "analytic" : "lut";
        text += cfg.pd->clamp == ClampPolicy::clamp_to_saturation ? ",clamp"
                                                                  : ",reject";
        if (cfg.pd->mode == PdMode::lut)
            text += "," + std::to_string(cfg.pd->lut_size);
    }
    text += ";grid=";
    for (double v : cfg.ebno_db_grid) text += format_g(v) + ",";
    text += ";n=" + std::to_string(cfg.symbols_per_point) +
            ";seed=" + std::to_string(cfg.seed) +
            ";drive=" + format_g(cfg.drive_level);
    return fnv1a(text);
}

void write_csv(const BerCurve& curve, const LinkConfig& cfg, std::ostream& os) {
    os << "ebno_db,bits,bit_errors,ber,symbols,symbol_errors,ser,bound\n";
    const bool bounded = cfg.modem.m >= 4;
    BerBoundParams bp;
    if (bounded) bp.n = cfg.modem.m / 4;
    char buf[256];
    for (const BerPoint& p : curve.points) {
        const double bound = bounded
                                 ? ber_bound(bp, p.ebno_db)
                                 : std::numeric_limits<double>::quiet_NaN();
        std::snprintf(buf, sizeof buf,
                      "%.12g,%llu,%llu,%.12g,%llu,%llu,%.12g,%.12g\n",
                      p.ebno_db, (unsigned long long)p.bits,
                      (unsigned long long)p.bit_errors, p.ber,
                      (unsigned long long)p.symbols,
                      (unsigned long long)p.symbol_errors, p.ser, bound);
        os << buf;
    }
}

} // namespace padlin

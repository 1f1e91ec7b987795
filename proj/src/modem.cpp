#include "padlin/modem.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace padlin {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

bool is_pow2(std::size_t v) { return v >= 1 && (v & (v - 1)) == 0; }

std::size_t log2_exact(std::size_t v) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < v) ++k;
    return k;
}

// index whose binary-reflected Gray code equals c
std::size_t gray_inverse(std::size_t c) {
    std::size_t g = c;
    for (std::size_t shift = 1; shift < 8 * sizeof(std::size_t); shift <<= 1)
        g ^= g >> shift;
    return g;
}

int mod4(int v) { return ((v % 4) + 4) % 4; }

void check_symbol(int a, std::size_t m) {
    const int top = int(m) - 1;
    if (a % 2 == 0 || a < -top || a > top)
        throw std::invalid_argument("symbol levels must be odd and within +-(M-1)");
}

} // namespace

ModemConfig::ModemConfig(std::size_t m_, std::size_t sps, double energy)
    : m(m_),
      samples_per_symbol(sps ? sps : default_samples_per_symbol(m_)),
      energy_per_symbol(energy) {
    validate();
}

std::size_t ModemConfig::bits_per_symbol() const { return log2_exact(m); }

double ModemConfig::amplitude() const {
    return std::sqrt(2.0 * energy_per_symbol);
}

std::size_t ModemConfig::default_samples_per_symbol(std::size_t m) {
    // smallest power of two strictly above the widest tone's frequency
    // (m-1)*h, never below 8
    std::size_t s = 8;
    while (double(s) <= double(m - 1) * h) s <<= 1;
    return s;
}

void ModemConfig::validate() const {
    if (!is_pow2(m) || m < 2)
        throw std::invalid_argument("ModemConfig: m must be a power of two >= 2");
    if (samples_per_symbol < 2)
        throw std::invalid_argument("ModemConfig: samples_per_symbol must be >= 2");
    if (double(samples_per_symbol) <= double(m - 1) * h)
        throw std::invalid_argument(
            "ModemConfig: samples_per_symbol must exceed (m-1)/2 to keep the "
            "widest tone below Nyquist");
    if (!(energy_per_symbol > 0.0))
        throw std::invalid_argument("ModemConfig: energy_per_symbol must be positive");
}

double PhaseState::radians() const { return mod4(qturns) * kHalfPi; }

PhaseState PhaseState::advanced(int symbol) const {
    return PhaseState{mod4(qturns + symbol)};
}

PhaseState PhaseState::from_radians(double theta) {
    const double q = theta / kHalfPi;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9 ||
        std::abs(r) > double(std::numeric_limits<int>::max()))
        throw std::invalid_argument(
            "PhaseState::from_radians: not a multiple of pi/2");
    return PhaseState{mod4(int(r))};
}

SymbolSequence map_bits(const std::vector<std::uint8_t>& bits, const ModemConfig& cfg) {
    cfg.validate();
    const std::size_t k = cfg.bits_per_symbol();
    if (bits.size() % k != 0)
        throw std::invalid_argument("map_bits: bit count must be a multiple of "
                                    "bits per symbol");
    SymbolSequence out(bits.size() / k);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint8_t b = bits[i * k + j];
            if (b > 1) throw std::invalid_argument("map_bits: bits must be 0 or 1");
            c = (c << 1) | b;
        }
        const std::size_t g = gray_inverse(c);
        out[i] = 2 * int(g) - int(cfg.m - 1);
    }
    return out;
}

std::vector<std::uint8_t> unmap_bits(const SymbolSequence& symbols,
                                     const ModemConfig& cfg) {
    cfg.validate();
    const std::size_t k = cfg.bits_per_symbol();
    std::vector<std::uint8_t> out(symbols.size() * k);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        check_symbol(symbols[i], cfg.m);
        const std::size_t g = std::size_t(symbols[i] + int(cfg.m - 1)) / 2;
        const std::size_t c = g ^ (g >> 1);
        for (std::size_t j = 0; j < k; ++j)
            out[i * k + j] = std::uint8_t((c >> (k - 1 - j)) & 1);
    }
    return out;
}

ComplexEnvelope modulate(const SymbolSequence& symbols, const ModemConfig& cfg,
                         PhaseState initial) {
    cfg.validate();
    const std::size_t s = cfg.samples_per_symbol;
    const double amp = cfg.amplitude();
    std::vector<cplx> samples;
    samples.reserve(symbols.size() * s);
    PhaseState theta = initial;
    for (int a : symbols) {
        check_symbol(a, cfg.m);
        const double base = theta.radians();
        const double slope = kHalfPi * double(a) / double(s);
        for (std::size_t j = 0; j < s; ++j) {
            const double phase = base + slope * double(j);
            samples.emplace_back(amp * std::cos(phase), amp * std::sin(phase));
        }
        theta = theta.advanced(a);
    }
    return ComplexEnvelope{std::move(samples), s, 1.0};
}

PhaseState final_phase_state(const SymbolSequence& symbols, PhaseState initial) {
    PhaseState theta{mod4(initial.qturns)};
    for (int a : symbols) theta = theta.advanced(a);
    return theta;
}

SymbolSequence demodulate(const ComplexEnvelope& env, const ModemConfig& cfg,
                          PhaseState initial) {
    cfg.validate();
    const std::size_t s = cfg.samples_per_symbol;
    if (env.samples_per_symbol != s)
        throw std::invalid_argument(
            "demodulate: envelope sample rate does not match the modem");
    const std::size_t n = env.num_symbols();
    const std::size_t m = cfg.m;

    // conjugated unit tones for every level, one symbol period long
    std::vector<int> levels(m);
    for (std::size_t l = 0; l < m; ++l) levels[l] = 2 * int(l) - int(m - 1);
    std::vector<std::vector<cplx>> tone_conj(m, std::vector<cplx>(s));
    for (std::size_t l = 0; l < m; ++l) {
        const double slope = kHalfPi * double(levels[l]) / double(s);
        for (std::size_t j = 0; j < s; ++j) {
            const double phase = slope * double(j);
            tone_conj[l][j] = cplx{std::cos(phase), -std::sin(phase)};
        }
    }

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::array<double, 4> metric{kNegInf, kNegInf, kNegInf, kNegInf};
    metric[std::size_t(mod4(initial.qturns))] = 0.0;
    std::vector<std::array<std::int16_t, 4>> back(n);

    for (std::size_t i = 0; i < n; ++i) {
        // tone correlations for this symbol period
        std::vector<cplx> corr(m, cplx{0.0, 0.0});
        const cplx* r = env.samples.data() + i * s;
        for (std::size_t l = 0; l < m; ++l) {
            cplx acc{0.0, 0.0};
            const cplx* t = tone_conj[l].data();
            for (std::size_t j = 0; j < s; ++j) acc += r[j] * t[j];
            corr[l] = acc;
        }
        std::array<double, 4> next{kNegInf, kNegInf, kNegInf, kNegInf};
        std::array<std::int16_t, 4>& bp = back[i];
        bp = {0, 0, 0, 0};
        for (std::size_t l = 0; l < m; ++l) {
            const int a = levels[l];
            for (int q = 0; q < 4; ++q) {
                if (metric[std::size_t(q)] == kNegInf) continue;
                // Re(corr * e^{-j q pi/2}) without trig
                double bm;
                switch (q) {
                    case 0: bm = corr[l].real(); break;
                    case 1: bm = corr[l].imag(); break;
                    case 2: bm = -corr[l].real(); break;
                    default: bm = -corr[l].imag(); break;
                }
                const double cand = metric[std::size_t(q)] + bm;
                const std::size_t to = std::size_t(mod4(q + a));
                if (cand > next[to]) {
                    next[to] = cand;
                    bp[to] = std::int16_t(a);
                }
            }
        }
        metric = next;
    }

    int state = 0;
    double best = kNegInf;
    for (int q = 0; q < 4; ++q)
        if (metric[std::size_t(q)] > best) {
            best = metric[std::size_t(q)];
            state = q;
        }

    SymbolSequence out(n);
    for (std::size_t i = n; i-- > 0;) {
        const int a = back[i][std::size_t(state)];
        out[i] = a;
        state = mod4(state - a);
    }
    return out;
}

} // namespace padlin

#pragma once

#include "padlin/signal.hpp"

#include <cstdint>
#include <vector>

namespace padlin {

// M-ary continuous-phase modulation with a full-response linear phase ramp
// and modulation index 1/2: symbol a advances the carrier phase by a*pi/2
// over one symbol period, so the phase state after any symbol is a multiple
// of pi/2. Symbols are the odd integers {+-1, +-3, ..., +-(M-1)}.
struct ModemConfig {
    std::size_t m = 16;
    std::size_t samples_per_symbol = 8;
    double energy_per_symbol = 1.0;

    static constexpr double h = 0.5; // modulation index, fixed

    ModemConfig() = default;
    // sps == 0 picks the default for m
    explicit ModemConfig(std::size_t m_, std::size_t sps = 0, double energy = 1.0);

    std::size_t bits_per_symbol() const;
    double amplitude() const; // sqrt(2E/T), the constant sample modulus

    // 8 up to M=16, 16 at M=32, then the smallest power of two that keeps
    // the widest tone below Nyquist
    static std::size_t default_samples_per_symbol(std::size_t m);

    void validate() const;
};

using SymbolSequence = std::vector<int>;

// Phase state on the quarter-turn lattice {0, pi/2, pi, 3pi/2}, held as an
// integer so accumulation over symbols is exact.
struct PhaseState {
    int qturns = 0;

    double radians() const;
    PhaseState advanced(int symbol) const; // symbol * pi/2 added, mod 2pi
    static PhaseState from_radians(double theta);
    bool operator==(const PhaseState&) const = default;
};

// Binary-reflected Gray mapping between bit groups and symbol levels:
// group value c -> index g with g^(g>>1) == c -> level 2g-(M-1).
SymbolSequence map_bits(const std::vector<std::uint8_t>& bits, const ModemConfig& cfg);
std::vector<std::uint8_t> unmap_bits(const SymbolSequence& symbols, const ModemConfig& cfg);

ComplexEnvelope modulate(const SymbolSequence& symbols, const ModemConfig& cfg,
                         PhaseState initial = {});

// Phase state after transmitting `symbols` from `initial`; lets callers
// modulate independent blocks with the right entry state.
PhaseState final_phase_state(const SymbolSequence& symbols, PhaseState initial = {});

// Maximum-likelihood sequence detection over the four phase states, branch
// metric Re<r, candidate>. Coherent: the initial phase state is known.
SymbolSequence demodulate(const ComplexEnvelope& env, const ModemConfig& cfg,
                          PhaseState initial = {});

} // namespace padlin

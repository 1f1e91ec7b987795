#pragma once

#include "padlin/signal.hpp"

#include <cstddef>
#include <vector>

namespace padlin {

// Gaussian tail probability, 0.5*erfc(x/sqrt(2)); good to full double
// precision for any real x.
double q_exact(double x);

// Chernoff-style overestimate (1/2)exp(-x^2/2), valid for x >= 0.
double q_exp_bound(double x);

enum class QForm { exact, exp_bound };

// Union-bound parameters for the M = 4N constant-envelope family.
struct BerBoundParams {
    std::size_t n = 4;      // frequency count; signal set size is M = 4N
    double d_min_sq = 2.0;  // normalized minimum squared distance

    void validate() const;  // n >= 1 and a power of two, d_min_sq > 0
};

// Symbol error union bound (M-2)*Q(sqrt(d^2 * Es/N0)) with
// Es/N0 = (Eb/N0)*(2+log2 N), clipped to [0, 1].
double ser_bound(const BerBoundParams& p, double ebno_db, QForm q = QForm::exact);

// Bit error union bound (2N-1)*Q(sqrt(d^2 * (Eb/N0) * (2+log2 N))),
// clipped to [0, 0.5].
double ber_bound(const BerBoundParams& p, double ebno_db, QForm q = QForm::exact);

enum class BaselineScheme { mpsk, mqam };

// Standard coherent Gray-coded approximations used for comparison curves.
// mqam requires square constellations (even log2 M).
double baseline_ber(BaselineScheme scheme, std::size_t m, double ebno_db);

// Averaged-periodogram estimate over the full complex band. Frequencies are
// in units of the symbol rate, ascending, spanning [-S/2, S/2) with DC in
// the middle; density is power per unit normalized frequency, so
// sum(density)*resolution equals the average power.
struct PsdEstimate {
    std::vector<double> frequencies;
    std::vector<double> density;
    double resolution = 0.0;
};

// Hann-windowed averaged periodogram. segment must be even and >= 8;
// overlap in [0, 1).
PsdEstimate psd_welch(const ComplexEnvelope& env, std::size_t segment,
                      double overlap = 0.5);

// 10*log10(power at |f| >= band_edge / total power). band_edge = 0 gives
// exactly 0 dB; band_edge outside the estimate's span is invalid.
double oob_power_ratio(const PsdEstimate& psd, double band_edge);

// Brick-wall lowpass: zero every spectral bin with |f| > max_abs_freq
// (frequencies in symbol-rate units). Used to shape test signals whose
// envelope must vary for nonlinearity experiments.
ComplexEnvelope bandlimit(const ComplexEnvelope& env, double max_abs_freq);

} // namespace padlin

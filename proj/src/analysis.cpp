#include "padlin/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace padlin {

namespace {

// FFTW plan creation/destruction is not thread safe; execution of distinct
// plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftPlan {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t n = 0;

    FftPlan(std::size_t size, int sign) : n(size) {
        in = fftw_alloc_complex(size);
        out = fftw_alloc_complex(size);
        if (!in || !out) {
            fftw_free(in);
            fftw_free(out);
            throw std::bad_alloc();
        }
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(int(size), in, out, sign, FFTW_ESTIMATE);
        if (!plan) {
            fftw_free(in);
            fftw_free(out);
            throw std::runtime_error("FFT planning failed");
        }
    }
    ~FftPlan() {
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
        fftw_free(in);
        fftw_free(out);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void execute() { fftw_execute(plan); }
};

bool is_pow2(std::size_t v) { return v >= 1 && (v & (v - 1)) == 0; }

double ebno_linear(double ebno_db) { return std::pow(10.0, ebno_db / 10.0); }

double q_value(double x, QForm q) {
    return q == QForm::exact ? q_exact(x) : q_exp_bound(x);
}

} // namespace

double q_exact(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_exp_bound(double x) {
    if (x < 0.0)
        throw std::invalid_argument("q_exp_bound: argument must be >= 0");
    return 0.5 * std::exp(-0.5 * x * x);
}

void BerBoundParams::validate() const {
    if (!is_pow2(n))
        throw std::invalid_argument("BerBoundParams: n must be a power of two >= 1");
    if (!(d_min_sq > 0.0))
        throw std::invalid_argument("BerBoundParams: d_min_sq must be positive");
}

double ser_bound(const BerBoundParams& p, double ebno_db, QForm q) {
    p.validate();
    const double m = 4.0 * double(p.n);
    const double bits = std::log2(m);
    const double arg = std::sqrt(p.d_min_sq * ebno_linear(ebno_db) * bits);
    return std::clamp((m - 2.0) * q_value(arg, q), 0.0, 1.0);
}

double ber_bound(const BerBoundParams& p, double ebno_db, QForm q) {
    p.validate();
    const double bits = std::log2(4.0 * double(p.n));
    const double arg = std::sqrt(p.d_min_sq * ebno_linear(ebno_db) * bits);
    return std::clamp((2.0 * double(p.n) - 1.0) * q_value(arg, q), 0.0, 0.5);
}

double baseline_ber(BaselineScheme scheme, std::size_t m, double ebno_db) {
    if (!is_pow2(m) || m < 4)
        throw std::invalid_argument("baseline_ber: m must be a power of two >= 4");
    const double k = std::log2(double(m));
    const double eb = ebno_linear(ebno_db);
    if (scheme == BaselineScheme::mpsk) {
        const double arg = std::sqrt(2.0 * k * eb) * std::sin(std::numbers::pi / double(m));
        return std::clamp((2.0 / k) * q_exact(arg), 0.0, 1.0);
    }
    if (std::size_t(k) % 2 != 0)
        throw std::invalid_argument("baseline_ber: mqam needs a square "
                                    "constellation (even log2 m)");
    const double root = std::sqrt(double(m));
    const double arg = std::sqrt(3.0 * k * eb / (double(m) - 1.0));
    return std::clamp((4.0 / k) * (1.0 - 1.0 / root) * q_exact(arg), 0.0, 1.0);
}

PsdEstimate psd_welch(const ComplexEnvelope& env, std::size_t segment, double overlap) {
    if (env.samples.empty())
        throw std::invalid_argument("psd_welch: empty envelope");
    if (segment < 8 || segment % 2 != 0)
        throw std::invalid_argument("psd_welch: segment must be even and >= 8");
    if (segment > env.samples.size())
        throw std::invalid_argument("psd_welch: segment longer than the signal");
    if (!(overlap >= 0.0) || overlap >= 1.0)
        throw std::invalid_argument("psd_welch: overlap must lie in [0, 1)");

    const std::size_t n = env.samples.size();
    const std::size_t hop = std::max<std::size_t>(
        1, std::size_t(std::llround(double(segment) * (1.0 - overlap))));
    const std::size_t nseg = 1 + (n - segment) / hop;
    const double fs = double(env.samples_per_symbol) / env.symbol_period;

    // periodic Hann
    std::vector<double> window(segment);
    double wsum_sq = 0.0;
    for (std::size_t i = 0; i < segment; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(i) /
                                          double(segment)));
        wsum_sq += window[i] * window[i];
    }

    FftPlan fft(segment, FFTW_FORWARD);
    std::vector<double> acc(segment, 0.0);
    for (std::size_t t = 0; t < nseg; ++t) {
        const cplx* src = env.samples.data() + t * hop;
        for (std::size_t i = 0; i < segment; ++i) {
            fft.in[i][0] = src[i].real() * window[i];
            fft.in[i][1] = src[i].imag() * window[i];
        }
        fft.execute();
        for (std::size_t i = 0; i < segment; ++i)
            acc[i] += fft.out[i][0] * fft.out[i][0] + fft.out[i][1] * fft.out[i][1];
    }

    PsdEstimate est;
    est.resolution = fs / double(segment);
    est.frequencies.resize(segment);
    est.density.resize(segment);
    const double scale = 1.0 / (double(nseg) * wsum_sq * fs);
    const std::size_t half = segment / 2;
    for (std::size_t i = 0; i < segment; ++i) {
        // ascending order, DC in the middle
        const std::size_t src = (i + half) % segment;
        est.frequencies[i] = (double(i) - double(half)) * est.resolution;
        est.density[i] = acc[src] * scale;
    }
    return est;
}

double oob_power_ratio(const PsdEstimate& psd, double band_edge) {
    if (psd.density.empty() || psd.frequencies.size() != psd.density.size())
        throw std::invalid_argument("oob_power_ratio: malformed estimate");
    if (band_edge < 0.0)
        throw std::invalid_argument("oob_power_ratio: band edge must be >= 0");
    const double span = -psd.frequencies.front(); // half the sample rate
    if (band_edge > span)
        throw std::invalid_argument("oob_power_ratio: band edge beyond the "
                                    "estimate's frequency span");
    double total = 0.0, out = 0.0;
    for (std::size_t i = 0; i < psd.density.size(); ++i) {
        total += psd.density[i];
        if (std::abs(psd.frequencies[i]) >= band_edge) out += psd.density[i];
    }
    if (!(total > 0.0))
        throw std::invalid_argument("oob_power_ratio: estimate has no power");
    if (out == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(out / total);
}

ComplexEnvelope bandlimit(const ComplexEnvelope& env, double max_abs_freq) {
    if (env.samples.empty())
        throw std::invalid_argument("bandlimit: empty envelope");
    if (!(max_abs_freq >= 0.0))
        throw std::invalid_argument("bandlimit: cutoff must be >= 0");
    const std::size_t n = env.samples.size();
    const double fs = double(env.samples_per_symbol) / env.symbol_period;

    FftPlan fwd(n, FFTW_FORWARD);
    for (std::size_t i = 0; i < n; ++i) {
        fwd.in[i][0] = env.samples[i].real();
        fwd.in[i][1] = env.samples[i].imag();
    }
    fwd.execute();

    FftPlan inv(n, FFTW_BACKWARD);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = (i <= n / 2 ? double(i) : double(i) - double(n)) *
                         fs / double(n);
        const bool keep = std::abs(f) <= max_abs_freq;
        inv.in[i][0] = keep ? fwd.out[i][0] : 0.0;
        inv.in[i][1] = keep ? fwd.out[i][1] : 0.0;
    }
    inv.execute();

    ComplexEnvelope out = env;
    const double scale = 1.0 / double(n);
    for (std::size_t i = 0; i < n; ++i)
        out.samples[i] = cplx{inv.out[i][0] * scale, inv.out[i][1] * scale};
    return out;
}

} // namespace padlin

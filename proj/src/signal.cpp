#include "padlin/signal.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace padlin {

namespace {

// Neumaier-compensated sum of |x|^2
double sum_power(const std::vector<cplx>& v) {
    double s = 0.0, c = 0.0;
    for (const cplx& x : v) {
        const double t = x.real() * x.real() + x.imag() * x.imag();
        const double y = s + t;
        if (std::abs(s) >= std::abs(t))
            c += (s - y) + t;
        else
            c += (t - y) + s;
        s = y;
    }
    return s + c;
}

} // namespace

ComplexEnvelope::ComplexEnvelope(std::vector<cplx> s, std::size_t sps, double period)
    : samples(std::move(s)), samples_per_symbol(sps), symbol_period(period) {
    if (samples_per_symbol < 2)
        throw std::invalid_argument("ComplexEnvelope: samples_per_symbol must be >= 2");
    if (symbol_period <= 0.0)
        throw std::invalid_argument("ComplexEnvelope: symbol_period must be positive");
    if (samples.size() % samples_per_symbol != 0)
        throw std::invalid_argument(
            "ComplexEnvelope: sample count must be a whole number of symbols");
}

PowerReport measure_power(const ComplexEnvelope& env) {
    if (env.samples.empty())
        throw std::invalid_argument("measure_power: empty envelope");
    PowerReport r;
    r.average_power = sum_power(env.samples) / double(env.samples.size());
    for (const cplx& x : env.samples) {
        const double p = x.real() * x.real() + x.imag() * x.imag();
        if (p > r.peak_power) r.peak_power = p;
    }
    r.papr_db = r.average_power > 0.0
                    ? 10.0 * std::log10(r.peak_power / r.average_power)
                    : 0.0;
    return r;
}

static ComplexEnvelope scaled_copy(const ComplexEnvelope& env, double gain) {
    ComplexEnvelope out = env;
    for (cplx& x : out.samples) x *= gain;
    return out;
}

ComplexEnvelope scale_to_power(const ComplexEnvelope& env, double target_watts) {
    if (target_watts < 0.0)
        throw std::invalid_argument("scale_to_power: target must be >= 0");
    const PowerReport r = measure_power(env);
    if (r.average_power == 0.0) {
        if (target_watts > 0.0)
            throw std::invalid_argument("scale_to_power: zero-power input");
        return env;
    }
    return scaled_copy(env, std::sqrt(target_watts / r.average_power));
}

ComplexEnvelope scale_to_peak(const ComplexEnvelope& env, double target_peak) {
    if (target_peak < 0.0)
        throw std::invalid_argument("scale_to_peak: target must be >= 0");
    const PowerReport r = measure_power(env);
    if (r.peak_power == 0.0) {
        if (target_peak > 0.0)
            throw std::invalid_argument("scale_to_peak: zero-power input");
        return env;
    }
    return scaled_copy(env, target_peak / std::sqrt(r.peak_power));
}

void write_csv(const ComplexEnvelope& env, std::ostream& os) {
    os << "index,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < env.samples.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i,
                      env.samples[i].real(), env.samples[i].imag());
        os << buf;
    }
}

} // namespace padlin

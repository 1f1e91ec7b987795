#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace padlin {

using cplx = std::complex<double>;

// Baseband complex envelope, uniformly sampled at samples_per_symbol per
// symbol period. Length is always a whole number of symbols.
struct ComplexEnvelope {
    std::vector<cplx> samples;
    std::size_t samples_per_symbol = 2;
    double symbol_period = 1.0;

    ComplexEnvelope() = default;
    ComplexEnvelope(std::vector<cplx> s, std::size_t sps, double period = 1.0);

    std::size_t size() const { return samples.size(); }
    std::size_t num_symbols() const { return samples.size() / samples_per_symbol; }
};

struct PowerReport {
    double average_power = 0.0; // mean |x|^2
    double peak_power = 0.0;    // max |x|^2
    double papr_db = 0.0;       // 10*log10(peak/average), 0 for an all-zero signal
};

// Compensated-summation power measurement; relative error stays ~1e-15 even
// for multi-million-sample envelopes.
PowerReport measure_power(const ComplexEnvelope& env);

// Scale by a real nonnegative gain so average power equals target_watts.
// Sample phases are preserved.
ComplexEnvelope scale_to_power(const ComplexEnvelope& env, double target_watts);

// Scale by a real nonnegative gain so peak modulus equals target_peak.
ComplexEnvelope scale_to_peak(const ComplexEnvelope& env, double target_peak);

// Debug dump, columns index,re,im
void write_csv(const ComplexEnvelope& env, std::ostream& os);

} // namespace padlin

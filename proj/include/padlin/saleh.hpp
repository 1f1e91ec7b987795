#pragma once

#include "padlin/signal.hpp"

namespace padlin {

// Two circulating forms of the phase characteristic: the classical fit has a
// quadratic numerator, a common variant a linear one. Amplitude behaviour is
// identical either way.
enum class PmForm { canonical_quadratic, linear_numerator };

struct SalehParams {
    double alpha_a = 2.1587;
    double beta_a = 1.1517;
    double alpha_phi = 4.0033;
    double beta_phi = 9.1040;
    PmForm pm_form = PmForm::canonical_quadratic;

    void validate() const; // alpha_a > 0, beta_a > 0, beta_phi > 0
};

struct SaturationPoint {
    double input_sat;  // input modulus at the AM/AM maximum, 1/sqrt(beta_a)
    double output_max; // the maximum itself, alpha_a/(2 sqrt(beta_a))
};

// AM/AM: alpha_a*u / (1 + beta_a*u^2). Rises to output_max at input_sat,
// then compresses. u < 0 is rejected.
double am_am(double u, const SalehParams& p);

// AM/PM phase shift in radians at input modulus u.
double am_pm(double u, const SalehParams& p);

SaturationPoint saturation(const SalehParams& p);

// Pure input gain realizing a given input back-off, defined by
// 10*log10(P_sat_in / P_in) = ibo_db with P_sat_in = input_sat^2, for a
// source of the given measured average power.
double input_gain_for_ibo(double ibo_db, const SalehParams& p, double source_power);

// Amplifier operating condition: the model plus the linear drive gain that
// realizes ibo_db for a known source power.
struct OperatingPoint {
    SalehParams params;
    double ibo_db = 0.0;
    double input_gain = 1.0;

    static OperatingPoint from_ibo(const SalehParams& p, double ibo_db,
                                   double source_power);
};

// Memoryless complex response: x -> am_am(|x|) * exp(j(arg x + am_pm(|x|))).
// Computed in gain form, x * (alpha_a/(1+beta_a u^2)) * e^{j am_pm(u)}, which
// is finite at u = 0 and rotation-covariant.
cplx saleh_transfer(cplx x, const SalehParams& p);

// Apply the input gain, then the nonlinearity, per sample.
ComplexEnvelope apply_hpa(const ComplexEnvelope& env, const OperatingPoint& op);

// Raw nonlinearity at unit input gain.
ComplexEnvelope apply_hpa(const ComplexEnvelope& env, const SalehParams& p);

} // namespace padlin

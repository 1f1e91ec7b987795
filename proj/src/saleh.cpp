#include "padlin/saleh.hpp"

#include <cmath>
#include <stdexcept>

namespace padlin {

void SalehParams::validate() const {
    if (!(alpha_a > 0.0) || !(beta_a > 0.0))
        throw std::invalid_argument("SalehParams: amplitude coefficients must be positive");
    if (!(beta_phi > 0.0))
        throw std::invalid_argument("SalehParams: beta_phi must be positive");
    if (!std::isfinite(alpha_phi))
        throw std::invalid_argument("SalehParams: alpha_phi must be finite");
}

double am_am(double u, const SalehParams& p) {
    if (u < 0.0) throw std::invalid_argument("am_am: envelope must be >= 0");
    return p.alpha_a * u / (1.0 + p.beta_a * u * u);
}

double am_pm(double u, const SalehParams& p) {
    if (u < 0.0) throw std::invalid_argument("am_pm: envelope must be >= 0");
    const double den = 1.0 + p.beta_phi * u * u;
    if (p.pm_form == PmForm::linear_numerator)
        return p.alpha_phi * u / den;
    return p.alpha_phi * u * u / den;
}

SaturationPoint saturation(const SalehParams& p) {
    SaturationPoint s;
    s.input_sat = 1.0 / std::sqrt(p.beta_a);
    s.output_max = p.alpha_a / (2.0 * std::sqrt(p.beta_a));
    return s;
}

double input_gain_for_ibo(double ibo_db, const SalehParams& p, double source_power) {
    if (ibo_db < 0.0)
        throw std::invalid_argument("input_gain_for_ibo: back-off must be >= 0 dB");
    if (!(source_power > 0.0))
        throw std::invalid_argument("input_gain_for_ibo: source power must be positive");
    const double sat = saturation(p).input_sat;
    const double target_power = sat * sat * std::pow(10.0, -ibo_db / 10.0);
    return std::sqrt(target_power / source_power);
}

OperatingPoint OperatingPoint::from_ibo(const SalehParams& p, double ibo_db,
                                        double source_power) {
    p.validate();
    OperatingPoint op;
    op.params = p;
    op.ibo_db = ibo_db;
    op.input_gain = input_gain_for_ibo(ibo_db, p, source_power);
    return op;
}

cplx saleh_transfer(cplx x, const SalehParams& p) {
    const double u = std::abs(x);
    const double gain = p.alpha_a / (1.0 + p.beta_a * u * u);
    const double phi = am_pm(u, p);
    return x * gain * cplx{std::cos(phi), std::sin(phi)};
}

ComplexEnvelope apply_hpa(const ComplexEnvelope& env, const OperatingPoint& op) {
    ComplexEnvelope out = env;
    for (cplx& x : out.samples)
        x = saleh_transfer(x * op.input_gain, op.params);
    return out;
}

ComplexEnvelope apply_hpa(const ComplexEnvelope& env, const SalehParams& params) {
    params.validate();
    ComplexEnvelope out = env;
    for (cplx& x : out.samples)
        x = saleh_transfer(x, params);
    return out;
}

} // namespace padlin

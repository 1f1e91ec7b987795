#include "padlin/predistort.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace padlin {

namespace {

// Modulus gain of the rising-branch inverse, am_am_inverse(u)/u. The textbook
// root (1 - sqrt(1 - (u/output_max)^2)) / (...) cancels catastrophically for
// small u; multiplying through by the conjugate gives this form, which is
// exact down to u = 0 where it equals 1/alpha_a.
double inverse_gain(double u, const SalehParams& p) {
    const SaturationPoint s = saturation(p);
    const double ratio = u / s.output_max;
    const double rad = std::max(0.0, 1.0 - ratio * ratio);
    return 2.0 / (p.alpha_a * (1.0 + std::sqrt(rad)));
}

// Complex correction gain for a sample of modulus u under the spec's policy.
cplx pd_gain(double u, const PredistorterSpec& spec) {
    const SalehParams& p = spec.params;
    if (spec.mode == PdMode::lut) {
        const LutTable& t = *spec.lut;
        if (u > t.grid_max) {
            if (spec.clamp == ClampPolicy::reject)
                throw std::domain_error("predistorter: modulus beyond table range");
            // Pin the output to the saturation input, keep the table's
            // terminal phase.
            const double target = saturation(p).input_sat;
            const cplx last = t.gains.back();
            const double lm = std::abs(last);
            const cplx phase = lm > 0.0 ? last / lm : cplx{1.0, 0.0};
            return (target / u) * phase;
        }
        return t.gain_at(u);
    }
    const SaturationPoint s = saturation(p);
    if (u > s.output_max) {
        if (spec.clamp == ClampPolicy::reject)
            throw std::domain_error("predistorter: modulus beyond amplifier range");
        const double g = s.input_sat / u;
        const double phi = -am_pm(s.input_sat, p);
        return g * cplx{std::cos(phi), std::sin(phi)};
    }
    const double g = inverse_gain(u, p);
    const double phi = -am_pm(u * g, p);
    return g * cplx{std::cos(phi), std::sin(phi)};
}

ComplexEnvelope apply_pd_map(const ComplexEnvelope& env, const PredistorterSpec& spec) {
    spec.validate();
    ComplexEnvelope out = env;
    for (cplx& x : out.samples)
        x *= pd_gain(std::abs(x), spec);
    return out;
}

} // namespace

LutTable::LutTable(std::vector<cplx> g, double max)
    : gains(std::move(g)), grid_max(max) {
    if (gains.size() < 2)
        throw std::invalid_argument("LutTable: need at least two entries");
    if (!(grid_max > 0.0))
        throw std::invalid_argument("LutTable: grid_max must be positive");
}

cplx LutTable::gain_at(double u) const {
    if (u < 0.0)
        throw std::invalid_argument("LutTable::gain_at: modulus must be >= 0");
    if (gains.size() < 2 || !(grid_max > 0.0))
        throw std::logic_error("LutTable::gain_at: table not initialized");
    if (u >= grid_max) return gains.back();
    const double pos = u / grid_step();
    std::size_t k = std::size_t(pos);
    if (k > gains.size() - 2) k = gains.size() - 2;
    const double frac = pos - double(k);
    return gains[k] * (1.0 - frac) + gains[k + 1] * frac;
}

void PredistorterSpec::validate() const {
    params.validate();
    if (mode == PdMode::lut) {
        if (!lut.has_value())
            throw std::invalid_argument("PredistorterSpec: lut mode needs a table");
        if (lut->gains.size() < 2 || !(lut->grid_max > 0.0))
            throw std::invalid_argument("PredistorterSpec: table not initialized");
    }
}

double am_am_inverse(double u, const SalehParams& p, ClampPolicy clamp) {
    if (u < 0.0)
        throw std::invalid_argument("am_am_inverse: modulus must be >= 0");
    const SaturationPoint s = saturation(p);
    if (u > s.output_max) {
        if (clamp == ClampPolicy::reject)
            throw std::domain_error("am_am_inverse: modulus beyond amplifier range");
        return s.input_sat;
    }
    return u * inverse_gain(u, p);
}

double pm_correction(double u, const SalehParams& p, ClampPolicy clamp) {
    return -am_pm(am_am_inverse(u, p, clamp), p);
}

ComplexEnvelope apply_predistorter(const ComplexEnvelope& env,
                                   const PredistorterSpec& spec) {
    return apply_pd_map(env, spec);
}

ComplexEnvelope apply_postdistorter(const ComplexEnvelope& env,
                                    const PredistorterSpec& spec) {
    return apply_pd_map(env, spec);
}

ComplexEnvelope cascade_pd_hpa(const ComplexEnvelope& env,
                               const PredistorterSpec& spec,
                               const OperatingPoint& op) {
    spec.validate();
    ComplexEnvelope out = env;
    for (cplx& x : out.samples) {
        cplx y = x * op.input_gain;
        y *= pd_gain(std::abs(y), spec);
        x = saleh_transfer(y, spec.params);
    }
    return out;
}

ComplexEnvelope cascade_pd_hpa(const ComplexEnvelope& env,
                               const PredistorterSpec& spec) {
    OperatingPoint op;
    op.params = spec.params;
    op.ibo_db = 0.0;
    op.input_gain = 1.0;
    return cascade_pd_hpa(env, spec, op);
}

LutTable build_lut(const SalehParams& p, std::size_t size) {
    return build_lut(p, size, saturation(p).output_max);
}

LutTable build_lut(const SalehParams& p, std::size_t size, double grid_max) {
    p.validate();
    if (size < 2)
        throw std::invalid_argument("build_lut: need at least two entries");
    const SaturationPoint s = saturation(p);
    if (!(grid_max > 0.0) || grid_max > s.output_max * (1.0 + 1e-12))
        throw std::invalid_argument(
            "build_lut: grid_max must lie in (0, output_max]");
    std::vector<cplx> gains(size);
    const double step = grid_max / double(size - 1);
    for (std::size_t k = 0; k < size; ++k) {
        const double u = std::min(step * double(k), s.output_max);
        const double g = inverse_gain(u, p);
        const double phi = -am_pm(u * g, p);
        gains[k] = g * cplx{std::cos(phi), std::sin(phi)};
    }
    return LutTable{std::move(gains), grid_max};
}

AdaptResult adapt_lut(const LutTable& initial, const HpaResponse& hpa,
                      std::size_t iterations, double step) {
    if (initial.gains.size() < 2 || !(initial.grid_max > 0.0))
        throw std::invalid_argument("adapt_lut: table not initialized");
    if (!(step > 0.0))
        throw std::invalid_argument("adapt_lut: step must be positive");
    if (iterations == 0)
        throw std::invalid_argument("adapt_lut: need at least one pass");

    LutTable table = initial;
    const std::size_t n = table.size();
    const double small_probe = 1e-6 * table.grid_max;

    const auto cascade = [&](const cplx& g, double probe) -> cplx {
        const double mag = std::abs(g);
        const cplx rot = mag > 0.0 ? g / mag : cplx{1.0, 0.0};
        return rot * hpa(mag * probe);
    };

    AdaptResult result;
    double prev_residual = 0.0;
    std::size_t growths = 0;
    // A converged table jitters at the floating-point floor; growth only
    // counts above it, so extra passes after convergence are harmless.
    const double fp_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, table.grid_max);
    for (std::size_t pass = 0; pass < iterations; ++pass) {
        for (std::size_t k = 0; k < n; ++k) {
            const double u = table.grid_point(k);
            const double probe = u > 0.0 ? u : small_probe;
            const cplx c = cascade(table.gains[k], probe);
            table.gains[k] += step * (probe - c) / probe;
        }
        double residual = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double u = table.grid_point(k);
            if (u == 0.0) continue; // cascade(0) is 0 for any memoryless device
            const double err = std::abs(cascade(table.gains[k], u) - u);
            if (err > residual) residual = err;
        }
        if (pass > 0 && residual > prev_residual && residual > fp_floor) {
            if (++growths >= 3)
                throw AdaptationError(
                    "adapt_lut: residual grew over three consecutive passes");
        } else {
            growths = 0;
        }
        prev_residual = residual;
        result.iterations = pass + 1;
        result.residual = residual;
    }
    result.table = std::move(table);
    return result;
}

void write_csv(const LutTable& lut, std::ostream& os) {
    os << "u,re_gain,im_gain\n";
    char buf[128];
    for (std::size_t k = 0; k < lut.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", lut.grid_point(k),
                      lut.gains[k].real(), lut.gains[k].imag());
        os << buf;
    }
}

} // namespace padlin

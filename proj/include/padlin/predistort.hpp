#pragma once

#include "padlin/saleh.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace padlin {

enum class PdMode { analytic, lut };

// What to do with moduli beyond the amplifier's invertible range
// [0, output_max]: pin them to the saturation input, or refuse the sample.
enum class ClampPolicy { clamp_to_saturation, reject };

struct AdaptationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Complex correction gains on a uniform modulus grid [0, grid_max].
// Entry k applies to input modulus k*grid_max/(size-1); lookups interpolate
// linearly between entries.
struct LutTable {
    std::vector<cplx> gains;
    double grid_max = 0.0;

    LutTable() = default;
    LutTable(std::vector<cplx> g, double max);

    std::size_t size() const { return gains.size(); }
    double grid_step() const { return grid_max / double(gains.size() - 1); }
    double grid_point(std::size_t k) const { return grid_step() * double(k); }

    // Interpolated gain at modulus u. Beyond grid_max the clamp policy
    // either maps to the saturation point (see apply_predistorter) or throws.
    cplx gain_at(double u) const;
};

struct PredistorterSpec {
    SalehParams params;
    PdMode mode = PdMode::analytic;
    ClampPolicy clamp = ClampPolicy::clamp_to_saturation;
    std::optional<LutTable> lut; // present iff mode == lut

    void validate() const;
};

// Inverse of am_am on the rising branch: the smaller root, so
// am_am(am_am_inverse(u)) == u for u in [0, output_max]. Evaluated in a
// rationalized form that is stable down to u = 0.
double am_am_inverse(double u, const SalehParams& p,
                     ClampPolicy clamp = ClampPolicy::clamp_to_saturation);

// Phase pre-rotation that cancels the amplifier's AM/PM at the level the
// sample will reach: -am_pm(am_am_inverse(u)).
double pm_correction(double u, const SalehParams& p,
                     ClampPolicy clamp = ClampPolicy::clamp_to_saturation);

// Per sample: u=|x| is treated as the desired amplifier output modulus;
// emits am_am_inverse(u) * exp(j(arg x + pm_correction(u))).
ComplexEnvelope apply_predistorter(const ComplexEnvelope& env,
                                   const PredistorterSpec& spec);

// Same correction map applied after the amplifier: recovers the amplifier's
// input from its output below saturation.
ComplexEnvelope apply_postdistorter(const ComplexEnvelope& env,
                                    const PredistorterSpec& spec);

// input gain (from op), then predistorter, then the bare nonlinearity.
// Below saturation the gain->output chain is unit-gain linear.
ComplexEnvelope cascade_pd_hpa(const ComplexEnvelope& env,
                               const PredistorterSpec& spec,
                               const OperatingPoint& op);

// Unit-input-gain cascade.
ComplexEnvelope cascade_pd_hpa(const ComplexEnvelope& env,
                               const PredistorterSpec& spec);

// Analytic correction gains tabulated on [0, grid_max] (default: the
// amplifier's output_max). Entry 0 carries the small-signal gain 1/alpha_a.
LutTable build_lut(const SalehParams& p, std::size_t size);
LutTable build_lut(const SalehParams& p, std::size_t size, double grid_max);

struct AdaptResult {
    LutTable table;
    double residual = 0.0; // max_k |cascade(u_k) - u_k| after the last pass
    std::size_t iterations = 0;
};

// Amplifier response sampled by modulus: H(u) for u >= 0 returns the complex
// output of the device for a real positive input u; the full response to z
// is H(|z|) * exp(j arg z).
using HpaResponse = std::function<cplx(double)>;

// Fixed-point refinement of a LUT against an opaque amplifier: each pass
// probes cascade(u_k) = e^{j arg g_k} H(|g_k| u_k) and nudges g_k by
// step * (u_k - cascade(u_k)) / u_k. The u = 0 entry probes at a tiny
// modulus instead (its own probe carries no information). Three consecutive
// passes of growing residual above the floating-point floor raise
// AdaptationError; jitter at the floor after convergence does not count.
AdaptResult adapt_lut(const LutTable& initial, const HpaResponse& hpa,
                      std::size_t iterations, double step);

// columns u,re_gain,im_gain
void write_csv(const LutTable& lut, std::ostream& os);

} // namespace padlin

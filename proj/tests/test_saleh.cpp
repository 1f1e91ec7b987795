#include <doctest.h>

#include "padlin/saleh.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace padlin;

namespace {
// High-precision reference values for the canonical coefficient set
// (2.1587, 1.1517, 4.0033, 9.1040), computed independently with 30-digit
// arithmetic and frozen here.
constexpr double kInputSat = 0.931816328776189;   // 1/sqrt(beta_a)
constexpr double kOutputMax = 1.00575595446458;   // alpha_a/(2 sqrt(beta_a))
constexpr double kAmAmHalf = 0.838053458081798;   // am_am(0.5)
constexpr double kAmAmOne = 1.00325324162290;     // am_am(1.0)
constexpr double kAmPmHalf = 0.305502136752137;   // am_pm(0.5), quadratic form
constexpr double kAmPmOne = 0.396209422011085;    // am_pm(1.0), quadratic form
constexpr double kPmAsymptote = 0.439729789103691; // alpha_phi/beta_phi
constexpr double kGainIbo5 = 0.523998829158008;   // unit-power source, 5 dB
} // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(SalehParams{}.validate());
    CHECK_THROWS_AS((SalehParams{0.0, 1.0, 1.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SalehParams{1.0, -1.0, 1.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SalehParams{1.0, 1.0, 1.0, 0.0}.validate()), std::invalid_argument);
    // the phase numerator coefficient may be zero (no AM/PM) but not NaN
    CHECK_NOTHROW((SalehParams{1.0, 1.0, 0.0, 1.0}.validate()));
    const double nan = std::nan("");
    CHECK_THROWS_AS((SalehParams{1.0, 1.0, nan, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("amplitude response against frozen references") {
    const SalehParams p{};
    CHECK(am_am(0.0, p) == 0.0);
    CHECK(am_am(0.5, p) == doctest::Approx(kAmAmHalf).epsilon(1e-14));
    CHECK(am_am(1.0, p) == doctest::Approx(kAmAmOne).epsilon(1e-14));
    CHECK_THROWS_AS(am_am(-0.1, p), std::invalid_argument);
}

TEST_CASE("saturation point: location, value, one-sided monotonicity") {
    const SalehParams p{};
    const SaturationPoint s = saturation(p);
    CHECK(s.input_sat == doctest::Approx(kInputSat).epsilon(1e-14));
    CHECK(s.output_max == doctest::Approx(kOutputMax).epsilon(1e-14));
    // the curve attains the maximum exactly at input_sat
    CHECK(am_am(s.input_sat, p) == doctest::Approx(s.output_max).epsilon(1e-15));
    // rising before, compressing after
    for (double u = 0.05; u < s.input_sat - 0.05; u += 0.05)
        CHECK(am_am(u, p) < am_am(u + 0.05, p));
    for (double u = s.input_sat; u < 3.0; u += 0.1)
        CHECK(am_am(u, p) > am_am(u + 0.1, p));
}

TEST_CASE("phase response: both numerator forms and the large-signal limit") {
    const SalehParams quad{};
    CHECK(am_pm(0.0, quad) == 0.0);
    CHECK(am_pm(0.5, quad) == doctest::Approx(kAmPmHalf).epsilon(1e-14));
    CHECK(am_pm(1.0, quad) == doctest::Approx(kAmPmOne).epsilon(1e-14));
    CHECK(am_pm(1e6, quad) == doctest::Approx(kPmAsymptote).epsilon(1e-9));
    CHECK_THROWS_AS(am_pm(-1.0, quad), std::invalid_argument);

    SalehParams lin{};
    lin.pm_form = PmForm::linear_numerator;
    // at u = 0.5 the linear-numerator value is exactly twice the quadratic one
    CHECK(am_pm(0.5, lin) == doctest::Approx(2.0 * kAmPmHalf).epsilon(1e-14));
    // and the linear form decays to zero instead of a constant
    CHECK(am_pm(1e6, lin) < 1e-5);
}

TEST_CASE("back-off gain for a unit-power source") {
    const SalehParams p{};
    // 0 dB back-off drives the rms input exactly to the saturation input
    CHECK(input_gain_for_ibo(0.0, p, 1.0) == doctest::Approx(kInputSat).epsilon(1e-14));
    CHECK(input_gain_for_ibo(5.0, p, 1.0) == doctest::Approx(kGainIbo5).epsilon(1e-14));
    // scaling the source power by 4 halves the gain
    CHECK(input_gain_for_ibo(5.0, p, 4.0) ==
          doctest::Approx(0.5 * kGainIbo5).epsilon(1e-14));
    CHECK_THROWS_AS(input_gain_for_ibo(-1.0, p, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(input_gain_for_ibo(5.0, p, 0.0), std::invalid_argument);

    const OperatingPoint op = OperatingPoint::from_ibo(p, 5.0, 1.0);
    CHECK(op.ibo_db == 5.0);
    CHECK(op.input_gain == doctest::Approx(kGainIbo5).epsilon(1e-14));
}

TEST_CASE("complex transfer: modulus is am_am, added phase is am_pm, rotation-covariant") {
    const SalehParams p{};
    const cplx y = saleh_transfer(cplx(0.5, 0.0), p);
    CHECK(std::abs(y) == doctest::Approx(kAmAmHalf).epsilon(1e-14));
    CHECK(std::arg(y) == doctest::Approx(kAmPmHalf).epsilon(1e-14));

    // rotating the input rotates the output by the same angle
    const cplx rot = std::polar(1.0, 1.234);
    const cplx y2 = saleh_transfer(cplx(0.5, 0.0) * rot, p);
    CHECK(std::abs(y2 - y * rot) < 1e-15);

    // finite and exactly zero at the origin (gain form, no 0/0)
    CHECK(saleh_transfer(cplx(0.0, 0.0), p) == cplx(0.0, 0.0));
}

TEST_CASE("envelope-level application matches the per-sample transfer") {
    const SalehParams p{};
    const ComplexEnvelope env{{cplx(0.3, 0.1), cplx(-0.4, 0.9)}, 2};

    const ComplexEnvelope raw = apply_hpa(env, p);
    for (std::size_t i = 0; i < env.size(); ++i)
        CHECK(std::abs(raw.samples[i] - saleh_transfer(env.samples[i], p)) < 1e-15);

    const OperatingPoint op = OperatingPoint::from_ibo(p, 5.0, 1.0);
    const ComplexEnvelope driven = apply_hpa(env, op);
    for (std::size_t i = 0; i < env.size(); ++i)
        CHECK(std::abs(driven.samples[i] -
                       saleh_transfer(op.input_gain * env.samples[i], p)) < 1e-15);
}

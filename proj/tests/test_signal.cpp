#include <doctest.h>

#include "padlin/signal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace padlin;

TEST_CASE("envelope constructor enforces shape invariants") {
    const std::vector<cplx> four(4, cplx(1.0, 0.0));
    CHECK_NOTHROW(ComplexEnvelope(four, 2));
    CHECK_NOTHROW(ComplexEnvelope(four, 4, 0.5));
    CHECK_THROWS_AS(ComplexEnvelope(four, 1), std::invalid_argument);
    CHECK_THROWS_AS(ComplexEnvelope(four, 3), std::invalid_argument); // 4 % 3 != 0
    CHECK_THROWS_AS(ComplexEnvelope(four, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ComplexEnvelope(four, 2, -1.0), std::invalid_argument);

    const ComplexEnvelope env{four, 4};
    CHECK(env.size() == 4);
    CHECK(env.num_symbols() == 1);
    CHECK(env.symbol_period == 1.0);
}

TEST_CASE("power measurement: average, peak, papr") {
    // moduli 0 and 2 (the 2 on the imaginary axis): average power 2, peak 4
    const ComplexEnvelope env{{cplx(0.0, 0.0), cplx(0.0, 2.0)}, 2};
    const PowerReport r = measure_power(env);
    CHECK(r.average_power == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r.peak_power == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(r.papr_db == doctest::Approx(3.01029995663981).epsilon(1e-14));
}

TEST_CASE("power measurement edge cases") {
    const ComplexEnvelope zeros{std::vector<cplx>(6, cplx(0.0, 0.0)), 2};
    const PowerReport r = measure_power(zeros);
    CHECK(r.average_power == 0.0);
    CHECK(r.peak_power == 0.0);
    CHECK(r.papr_db == 0.0);

    CHECK_THROWS_AS(measure_power(ComplexEnvelope{}), std::invalid_argument);

    // constant modulus: papr exactly 0 dB
    const ComplexEnvelope flat{std::vector<cplx>(8, cplx(0.6, -0.8)), 2};
    CHECK(measure_power(flat).papr_db == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("power summation is compensated against magnitude disparity") {
    // One huge sample first, then a million tiny ones whose total contribution
    // (1.000001) is below one ulp of the running sum individually. A naive
    // accumulator loses all of it (relative error 1e-10); a compensated one
    // keeps it to ~1e-16.
    std::vector<cplx> s;
    s.reserve(1000002);
    s.emplace_back(1e5, 0.0);                          // power 1e10
    for (int i = 0; i < 1000001; ++i) s.emplace_back(1e-3, 0.0); // power 1e-6
    const ComplexEnvelope env{std::move(s), 2};
    const PowerReport r = measure_power(env);
    const double total = r.average_power * 1000002.0;
    CHECK(total == doctest::Approx(1e10 + 1.000001).epsilon(2.5e-11));
}

TEST_CASE("scale_to_power hits the target and preserves phases") {
    const ComplexEnvelope env{{cplx(1.0, 0.0), cplx(0.0, 3.0)}, 2};
    const ComplexEnvelope scaled = scale_to_power(env, 20.0); // avg was 5
    CHECK(scaled.samples[0].real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(scaled.samples[0].imag() == 0.0);
    CHECK(scaled.samples[1].real() == 0.0);
    CHECK(scaled.samples[1].imag() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(measure_power(scaled).average_power == doctest::Approx(20.0).epsilon(1e-13));
    CHECK(scaled.samples_per_symbol == env.samples_per_symbol);

    CHECK_THROWS_AS(scale_to_power(env, -1.0), std::invalid_argument);
}

TEST_CASE("scale_to_peak hits the target peak modulus") {
    const ComplexEnvelope env{{cplx(1.0, 0.0), cplx(0.0, 3.0)}, 2};
    const ComplexEnvelope scaled = scale_to_peak(env, 1.5);
    CHECK(std::abs(scaled.samples[0]) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(scaled.samples[1]) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(measure_power(scaled).peak_power == doctest::Approx(2.25).epsilon(1e-13));

    CHECK_THROWS_AS(scale_to_peak(env, -0.5), std::invalid_argument);
}

TEST_CASE("scaling a zero signal: target zero is a copy, anything else is an error") {
    const ComplexEnvelope zeros{std::vector<cplx>(4, cplx(0.0, 0.0)), 2};
    CHECK_NOTHROW(scale_to_power(zeros, 0.0));
    CHECK_NOTHROW(scale_to_peak(zeros, 0.0));
    CHECK(scale_to_power(zeros, 0.0).size() == 4);
    CHECK_THROWS_AS(scale_to_power(zeros, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_to_peak(zeros, 1.0), std::invalid_argument);
}

TEST_CASE("envelope csv dump: header plus one row per sample") {
    const ComplexEnvelope env{{cplx(1.0 / 3.0, -2.0), cplx(0.0, 0.5)}, 2};
    std::ostringstream os;
    write_csv(env, os);
    const std::string text = os.str();
    CHECK(text.rfind("index,re,im\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    // %.17g keeps full precision on round-trip
    CHECK(text.find("0.33333333333333331") != std::string::npos);
}

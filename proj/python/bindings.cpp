#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "padlin/commands.hpp"

#include <complex>
#include <vector>

namespace py = pybind11;
using namespace padlin;

namespace {

ComplexEnvelope make_envelope(const py::array_t<std::complex<double>>& samples,
                              std::size_t samples_per_symbol, double symbol_period) {
    const auto view = samples.unchecked<1>();
    std::vector<cplx> data(std::size_t(view.shape(0)));
    for (py::ssize_t i = 0; i < view.shape(0); ++i) data[std::size_t(i)] = view(i);
    return ComplexEnvelope{std::move(data), samples_per_symbol, symbol_period};
}

py::array_t<std::complex<double>> envelope_array(const ComplexEnvelope& env) {
    py::array_t<std::complex<double>> out(py::ssize_t(env.samples.size()));
    auto view = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < env.samples.size(); ++i)
        view(py::ssize_t(i)) = env.samples[i];
    return out;
}

} // namespace

PYBIND11_MODULE(padlin, m) {
    m.doc() = "Constant-envelope links through a nonlinear amplifier, with "
              "analytic and table predistortion";
    m.attr("__version__") = PADLIN_VERSION;

    py::class_<ComplexEnvelope>(m, "ComplexEnvelope")
        .def(py::init(&make_envelope), py::arg("samples"),
             py::arg("samples_per_symbol"), py::arg("symbol_period") = 1.0)
        .def_property_readonly("samples", &envelope_array)
        .def_readonly("samples_per_symbol", &ComplexEnvelope::samples_per_symbol)
        .def_readonly("symbol_period", &ComplexEnvelope::symbol_period)
        .def("__len__", &ComplexEnvelope::size)
        .def_property_readonly("num_symbols", &ComplexEnvelope::num_symbols);

    py::class_<PowerReport>(m, "PowerReport")
        .def_readonly("average_power", &PowerReport::average_power)
        .def_readonly("peak_power", &PowerReport::peak_power)
        .def_readonly("papr_db", &PowerReport::papr_db);

    m.def("measure_power", &measure_power, py::arg("env"));
    m.def("scale_to_power", &scale_to_power, py::arg("env"), py::arg("target_watts"));
    m.def("scale_to_peak", &scale_to_peak, py::arg("env"), py::arg("target_peak"));

    py::enum_<PmForm>(m, "PmForm")
        .value("canonical_quadratic", PmForm::canonical_quadratic)
        .value("linear_numerator", PmForm::linear_numerator);

    py::class_<SalehParams>(m, "SalehParams")
        .def(py::init<>())
        .def(py::init([](double aa, double ba, double ap, double bp, PmForm form) {
                 return SalehParams{aa, ba, ap, bp, form};
             }),
             py::arg("alpha_a") = 2.1587, py::arg("beta_a") = 1.1517,
             py::arg("alpha_phi") = 4.0033, py::arg("beta_phi") = 9.1040,
             py::arg("pm_form") = PmForm::canonical_quadratic)
        .def_readwrite("alpha_a", &SalehParams::alpha_a)
        .def_readwrite("beta_a", &SalehParams::beta_a)
        .def_readwrite("alpha_phi", &SalehParams::alpha_phi)
        .def_readwrite("beta_phi", &SalehParams::beta_phi)
        .def_readwrite("pm_form", &SalehParams::pm_form);

    py::class_<SaturationPoint>(m, "SaturationPoint")
        .def_readonly("input_sat", &SaturationPoint::input_sat)
        .def_readonly("output_max", &SaturationPoint::output_max);

    m.def("am_am", &am_am, py::arg("u"), py::arg("params"));
    m.def("am_pm", &am_pm, py::arg("u"), py::arg("params"));
    m.def("saturation", &saturation, py::arg("params"));
    m.def("input_gain_for_ibo", &input_gain_for_ibo, py::arg("ibo_db"),
          py::arg("params"), py::arg("source_power"));
    m.def("saleh_transfer", &saleh_transfer, py::arg("x"), py::arg("params"));

    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def_static("from_ibo", &OperatingPoint::from_ibo, py::arg("params"),
                    py::arg("ibo_db"), py::arg("source_power"))
        .def_readonly("ibo_db", &OperatingPoint::ibo_db)
        .def_readonly("input_gain", &OperatingPoint::input_gain);

    m.def("apply_hpa",
          py::overload_cast<const ComplexEnvelope&, const OperatingPoint&>(&apply_hpa),
          py::arg("env"), py::arg("op"));
    m.def("apply_hpa",
          py::overload_cast<const ComplexEnvelope&, const SalehParams&>(&apply_hpa),
          py::arg("env"), py::arg("params"));

    py::enum_<PdMode>(m, "PdMode")
        .value("analytic", PdMode::analytic)
        .value("lut", PdMode::lut);
    py::enum_<ClampPolicy>(m, "ClampPolicy")
        .value("clamp_to_saturation", ClampPolicy::clamp_to_saturation)
        .value("reject", ClampPolicy::reject);

    py::register_exception<AdaptationError>(m, "AdaptationError", PyExc_RuntimeError);

    py::class_<LutTable>(m, "LutTable")
        .def(py::init([](const std::vector<std::complex<double>>& gains, double max) {
                 return LutTable{std::vector<cplx>(gains.begin(), gains.end()), max};
             }),
             py::arg("gains"), py::arg("grid_max"))
        .def_property_readonly("gains",
                               [](const LutTable& t) {
                                   return std::vector<std::complex<double>>(
                                       t.gains.begin(), t.gains.end());
                               })
        .def_readonly("grid_max", &LutTable::grid_max)
        .def("__len__", &LutTable::size)
        .def("grid_point", &LutTable::grid_point, py::arg("k"))
        .def("gain_at", &LutTable::gain_at, py::arg("u"));

    py::class_<PredistorterSpec>(m, "PredistorterSpec")
        .def(py::init([](const SalehParams& p, PdMode mode, ClampPolicy clamp,
                         const std::optional<LutTable>& lut) {
                 return PredistorterSpec{p, mode, clamp, lut};
             }),
             py::arg("params"), py::arg("mode") = PdMode::analytic,
             py::arg("clamp") = ClampPolicy::clamp_to_saturation,
             py::arg("lut") = std::nullopt)
        .def_readwrite("params", &PredistorterSpec::params)
        .def_readwrite("mode", &PredistorterSpec::mode)
        .def_readwrite("clamp", &PredistorterSpec::clamp)
        .def_readwrite("lut", &PredistorterSpec::lut);

    m.def("am_am_inverse", &am_am_inverse, py::arg("u"), py::arg("params"),
          py::arg("clamp") = ClampPolicy::clamp_to_saturation);
    m.def("pm_correction", &pm_correction, py::arg("u"), py::arg("params"),
          py::arg("clamp") = ClampPolicy::clamp_to_saturation);
    m.def("apply_predistorter", &apply_predistorter, py::arg("env"), py::arg("spec"));
    m.def("apply_postdistorter", &apply_postdistorter, py::arg("env"), py::arg("spec"));
    m.def("cascade_pd_hpa",
          py::overload_cast<const ComplexEnvelope&, const PredistorterSpec&,
                            const OperatingPoint&>(&cascade_pd_hpa),
          py::arg("env"), py::arg("spec"), py::arg("op"));
    m.def("cascade_pd_hpa",
          py::overload_cast<const ComplexEnvelope&, const PredistorterSpec&>(
              &cascade_pd_hpa),
          py::arg("env"), py::arg("spec"));
    m.def("build_lut",
          py::overload_cast<const SalehParams&, std::size_t>(&build_lut),
          py::arg("params"), py::arg("size"));
    m.def("build_lut",
          py::overload_cast<const SalehParams&, std::size_t, double>(&build_lut),
          py::arg("params"), py::arg("size"), py::arg("grid_max"));

    py::class_<AdaptResult>(m, "AdaptResult")
        .def_readonly("table", &AdaptResult::table)
        .def_readonly("residual", &AdaptResult::residual)
        .def_readonly("iterations", &AdaptResult::iterations);

    m.def(
        "adapt_lut",
        [](const LutTable& initial, const std::function<cplx(double)>& hpa,
           std::size_t iterations, double step) {
            return adapt_lut(initial, hpa, iterations, step);
        },
        py::arg("initial"), py::arg("hpa"), py::arg("iterations"), py::arg("step"));

    py::class_<ModemConfig>(m, "ModemConfig")
        .def(py::init<std::size_t, std::size_t, double>(), py::arg("m"),
             py::arg("samples_per_symbol") = 0, py::arg("energy_per_symbol") = 1.0)
        .def_readonly("m", &ModemConfig::m)
        .def_readonly("samples_per_symbol", &ModemConfig::samples_per_symbol)
        .def_readonly("energy_per_symbol", &ModemConfig::energy_per_symbol)
        .def_property_readonly("bits_per_symbol", &ModemConfig::bits_per_symbol)
        .def_property_readonly("amplitude", &ModemConfig::amplitude);

    py::class_<PhaseState>(m, "PhaseState")
        .def(py::init<>())
        .def(py::init([](int qturns) { return PhaseState{qturns}; }), py::arg("qturns"))
        .def_readonly("qturns", &PhaseState::qturns)
        .def("radians", &PhaseState::radians)
        .def("advanced", &PhaseState::advanced, py::arg("symbol"))
        .def_static("from_radians", &PhaseState::from_radians, py::arg("theta"));

    m.def("map_bits", &map_bits, py::arg("bits"), py::arg("cfg"));
    m.def("unmap_bits", &unmap_bits, py::arg("symbols"), py::arg("cfg"));
    m.def("modulate", &modulate, py::arg("symbols"), py::arg("cfg"),
          py::arg("initial") = PhaseState{});
    m.def("final_phase_state", &final_phase_state, py::arg("symbols"),
          py::arg("initial") = PhaseState{});
    m.def("demodulate", &demodulate, py::arg("env"), py::arg("cfg"),
          py::arg("initial") = PhaseState{});

    m.def("q_exact", &q_exact, py::arg("x"));
    m.def("q_exp_bound", &q_exp_bound, py::arg("x"));
    py::enum_<QForm>(m, "QForm")
        .value("exact", QForm::exact)
        .value("exp_bound", QForm::exp_bound);

    py::class_<BerBoundParams>(m, "BerBoundParams")
        .def(py::init([](std::size_t n, double d) {
                 return BerBoundParams{n, d};
             }),
             py::arg("n") = 4, py::arg("d_min_sq") = 2.0)
        .def_readwrite("n", &BerBoundParams::n)
        .def_readwrite("d_min_sq", &BerBoundParams::d_min_sq);

    m.def("ser_bound", &ser_bound, py::arg("params"), py::arg("ebno_db"),
          py::arg("q") = QForm::exact);
    m.def("ber_bound", &ber_bound, py::arg("params"), py::arg("ebno_db"),
          py::arg("q") = QForm::exact);

    py::enum_<BaselineScheme>(m, "BaselineScheme")
        .value("mpsk", BaselineScheme::mpsk)
        .value("mqam", BaselineScheme::mqam);
    m.def("baseline_ber", &baseline_ber, py::arg("scheme"), py::arg("m"),
          py::arg("ebno_db"));

    py::class_<PsdEstimate>(m, "PsdEstimate")
        .def_readonly("frequencies", &PsdEstimate::frequencies)
        .def_readonly("density", &PsdEstimate::density)
        .def_readonly("resolution", &PsdEstimate::resolution);
    m.def("psd_welch", &psd_welch, py::arg("env"), py::arg("segment"),
          py::arg("overlap") = 0.5);
    m.def("oob_power_ratio", &oob_power_ratio, py::arg("psd"), py::arg("band_edge"));
    m.def("bandlimit", &bandlimit, py::arg("env"), py::arg("max_abs_freq"));

    py::class_<CounterStream>(m, "CounterStream")
        .def(py::init<std::uint64_t>(), py::arg("key"))
        .def("next_u64", &CounterStream::next_u64)
        .def("next_unit", &CounterStream::next_unit)
        .def("next_gaussian_pair", &CounterStream::next_gaussian_pair);
    m.def("derive_key", &derive_key, py::arg("master"), py::arg("a"), py::arg("b"),
          py::arg("c"));

    py::class_<HpaConfig>(m, "HpaConfig")
        .def(py::init([](const SalehParams& p, double ibo) {
                 return HpaConfig{p, ibo};
             }),
             py::arg("params") = SalehParams{}, py::arg("ibo_db") = 5.0)
        .def_readwrite("params", &HpaConfig::params)
        .def_readwrite("ibo_db", &HpaConfig::ibo_db);

    py::class_<PdConfig>(m, "PdConfig")
        .def(py::init([](PdMode mode, ClampPolicy clamp, std::size_t lut_size) {
                 return PdConfig{mode, clamp, lut_size};
             }),
             py::arg("mode") = PdMode::analytic,
             py::arg("clamp") = ClampPolicy::clamp_to_saturation,
             py::arg("lut_size") = 1024)
        .def_readwrite("mode", &PdConfig::mode)
        .def_readwrite("clamp", &PdConfig::clamp)
        .def_readwrite("lut_size", &PdConfig::lut_size);

    py::class_<LinkConfig>(m, "LinkConfig")
        .def(py::init<>())
        .def_readwrite("modem", &LinkConfig::modem)
        .def_readwrite("hpa", &LinkConfig::hpa)
        .def_readwrite("pd", &LinkConfig::pd)
        .def_readwrite("ebno_db_grid", &LinkConfig::ebno_db_grid)
        .def_readwrite("symbols_per_point", &LinkConfig::symbols_per_point)
        .def_readwrite("seed", &LinkConfig::seed)
        .def_readwrite("drive_level", &LinkConfig::drive_level);

    py::class_<PointCounts>(m, "PointCounts")
        .def_readonly("bits", &PointCounts::bits)
        .def_readonly("bit_errors", &PointCounts::bit_errors)
        .def_readonly("symbols", &PointCounts::symbols)
        .def_readonly("symbol_errors", &PointCounts::symbol_errors)
        .def("ber", &PointCounts::ber)
        .def("ser", &PointCounts::ser);

    py::class_<BerPoint>(m, "BerPoint")
        .def_readonly("ebno_db", &BerPoint::ebno_db)
        .def_readonly("bits", &BerPoint::bits)
        .def_readonly("bit_errors", &BerPoint::bit_errors)
        .def_readonly("symbols", &BerPoint::symbols)
        .def_readonly("symbol_errors", &BerPoint::symbol_errors)
        .def_readonly("ber", &BerPoint::ber)
        .def_readonly("ser", &BerPoint::ser);

    py::class_<BerCurve>(m, "BerCurve")
        .def_readonly("label", &BerCurve::label)
        .def_readonly("points", &BerCurve::points)
        .def_readonly("config_fingerprint", &BerCurve::config_fingerprint)
        .def_readonly("complete", &BerCurve::complete)
        .def_readonly("abort_reason", &BerCurve::abort_reason);

    m.def("add_awgn", &add_awgn, py::arg("env"), py::arg("esno_db"), py::arg("noise"));
    m.def("run_point", &run_point, py::arg("cfg"), py::arg("ebno_db"),
          py::arg("point_index") = 0, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    py::enum_<SweepVariable>(m, "SweepVariable")
        .value("ebno", SweepVariable::ebno)
        .value("ibo", SweepVariable::ibo);
    m.def("sweep", &sweep, py::arg("cfg"), py::arg("variable"), py::arg("values"),
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
}

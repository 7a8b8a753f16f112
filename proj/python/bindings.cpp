#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hessplit/error.hpp"
#include "hessplit/report.hpp"

namespace py = pybind11;
using namespace hessplit;

namespace {

LoadProfile make_profile(std::vector<double> samples, double dt, double t0, const std::string& site_id) {
    return LoadProfile(site_id, t0, dt, std::move(samples));
}

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

RunConfig config_from(const py::object& config) {
    if (config.is_none()) return {};
    const auto text = py::module_::import("json").attr("dumps")(config).cast<std::string>();
    return run_config_from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_hessplit, m) {
    m.doc() = "Load-profile classification and SC/VRFB dispatch simulation";
    m.attr("__version__") = kToolVersion;

    static py::exception<Error> error(m, "HessplitError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<LoadProfile>(m, "LoadProfile")
        .def(py::init(&make_profile), py::arg("samples"), py::arg("dt") = 1.0, py::arg("t0") = 0.0,
             py::arg("site_id") = "unnamed")
        .def_property_readonly("site_id", &LoadProfile::site_id)
        .def_property_readonly("dt", &LoadProfile::dt)
        .def_property_readonly("t0", &LoadProfile::t0)
        .def_property_readonly("samples",
                               [](const LoadProfile& p) { return std::vector<double>(p.samples().begin(), p.samples().end()); })
        .def("__len__", &LoadProfile::size)
        .def("to_csv", [](const LoadProfile& p) {
            std::ostringstream out;
            write_profile_csv(out, p);
            return out.str();
        });

    m.def(
        "parse_csv",
        [](const std::string& text, const std::string& site_id, bool clamp_negative) {
            std::istringstream in(text);
            CsvSpec spec;
            spec.site_id = site_id;
            spec.clamp_negative = clamp_negative;
            return parse_profile(in, spec);
        },
        py::arg("text"), py::arg("site_id") = "unnamed", py::arg("clamp_negative") = false);
    m.def(
        "load_csv",
        [](const std::string& path, const std::string& site_id) {
            CsvSpec spec;
            spec.site_id = site_id;
            return parse_profile_file(path, spec);
        },
        py::arg("path"), py::arg("site_id") = "unnamed");

    m.def(
        "validate_resolution", [](double dt) { return to_python(nlohmann::json(validate_resolution(dt))); },
        py::arg("dt"));
    m.def(
        "resample", [](const LoadProfile& p, double target_dt) { return resample(p, target_dt); }, py::arg("profile"),
        py::arg("target_dt"));
    m.def(
        "normalize", [](const LoadProfile& p) { return normalize(p).pu; }, py::arg("profile"));
    m.def(
        "analyze",
        [](const LoadProfile& p, std::size_t bins, std::size_t deriv_bins, double tail_level) {
            AnalysisOptions opts;
            opts.load_bins = bins;
            opts.derivative_bins = deriv_bins;
            opts.tail_level = tail_level;
            return to_python(nlohmann::json(analyze_profile(p, opts)));
        },
        py::arg("profile"), py::arg("bins") = kDefaultLoadBins, py::arg("deriv_bins") = kDefaultDerivativeBins,
        py::arg("tail_level") = kDefaultTailLevel);

    m.def(
        "dispatch",
        [](const LoadProfile& p, const py::object& config) {
            const auto cfg = config_from(config);
            const auto r = dispatch(normalize(p), cfg.ems, cfg.devices);
            py::dict trace;
            std::vector<double> load, grid, sc, vrfb, soc_sc, soc_vrfb;
            std::vector<bool> flag, engaged;
            for (const auto& s : r.steps) {
                load.push_back(s.p_load_kw);
                grid.push_back(s.p_grid_kw);
                sc.push_back(s.p_sc_kw);
                vrfb.push_back(s.p_vrfb_kw);
                soc_sc.push_back(s.soc_sc_kwh);
                soc_vrfb.push_back(s.soc_vrfb_kwh);
                flag.push_back(s.flag_sc);
                engaged.push_back(s.engaged_sc);
            }
            trace["p_load_kw"] = load;
            trace["p_grid_kw"] = grid;
            trace["p_sc_kw"] = sc;
            trace["p_vrfb_kw"] = vrfb;
            trace["soc_sc_kwh"] = soc_sc;
            trace["soc_vrfb_kwh"] = soc_vrfb;
            trace["flag_sc"] = flag;
            trace["engaged_sc"] = engaged;
            py::dict out;
            out["trace"] = trace;
            out["summary"] = to_python(nlohmann::json(r.summary));
            out["recharge_threshold"] = r.recharge_threshold;
            return out;
        },
        py::arg("profile"), py::arg("config") = py::none());

    m.def(
        "threshold_sweep",
        [](const LoadProfile& p, const std::vector<double>& thresholds, const py::object& config) {
            const auto cfg = config_from(config);
            py::list rows;
            for (const auto& row : threshold_sweep(normalize(p), thresholds, cfg.ems, cfg.devices)) {
                auto d = to_python(nlohmann::json(row.stats));
                d["threshold"] = row.threshold;
                rows.append(d);
            }
            return rows;
        },
        py::arg("profile"), py::arg("thresholds"), py::arg("config") = py::none());

    m.def(
        "ups",
        [](const LoadProfile& p, double start_s, double duration_s, const py::object& config) {
            const auto s = make_ups_scenario(p, start_s, duration_s, config_from(config).devices);
            py::dict out;
            out["feasibility"] = to_python(nlohmann::json(s.feasibility));
            out["demand"] = std::vector<double>(s.hess_demand.samples().begin(), s.hess_demand.samples().end());
            return out;
        },
        py::arg("profile"), py::arg("start_s"), py::arg("duration_s"), py::arg("config") = py::none());

    m.def(
        "synth",
        [](const std::string& kind, std::uint64_t seed, int days, double dt) {
            SynthSpec spec;
            spec.kind = synth_kind_from_string(kind);
            spec.seed = seed;
            spec.days = days;
            spec.dt = dt;
            auto out = generate(spec);
            return py::make_tuple(out.profile, to_python(nlohmann::json(out.events)));
        },
        py::arg("kind"), py::arg("seed") = 0, py::arg("days") = 1, py::arg("dt") = 1.0);
}

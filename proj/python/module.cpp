#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rdsync/examples.hpp"
#include "rdsync/hitting.hpp"
#include "rdsync/spec_io.hpp"
#include "rdsync/verify.hpp"

namespace py = pybind11;
using namespace rdsync;

namespace {

RdsRepresentation rds_from_json(const std::string& json_text) {
  const ParsedSpec spec = parse_spec_json(json_text);
  return build_rds(spec, TransitionKernel::validate(spec.chain));
}

}  // namespace

PYBIND11_MODULE(_rdsync, m) {
  m.doc() = "Markov chains as random dynamical systems: attractors, insulation "
            "structure, perfect sampling and hitting times";

  py::register_exception<SpecError>(m, "SpecError");
  py::register_exception<CheckError>(m, "CheckError");

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](const std::string& hex) { return Scenario::from_hex(hex); }),
           py::arg("seed_hex"))
      .def_readonly("offset", &Scenario::offset)
      .def("substream", &Scenario::substream, py::arg("index"))
      .def("seed_hex", &Scenario::seed_hex)
      .def("__repr__", [](const Scenario& s) {
        return "Scenario(seed=" + s.seed_hex() + ", offset=" + std::to_string(s.offset) + ")";
      });
  m.def("shift", &shift, py::arg("scenario"), py::arg("k"));
  m.def("draw_word", &draw_word, py::arg("scenario"), py::arg("time"), py::arg("slot"));
  m.def("draw_unit", &draw_unit, py::arg("scenario"), py::arg("time"), py::arg("slot"));

  py::class_<TransitionKernel>(m, "TransitionKernel")
      .def_property_readonly("states", &TransitionKernel::states)
      .def("size", &TransitionKernel::size)
      .def("prob", &TransitionKernel::prob, py::arg("from_index"), py::arg("to_index"))
      .def("state_index", &TransitionKernel::state_index)
      .def_property_readonly("truncation_mass", &TransitionKernel::truncation_mass);

  py::class_<StationaryDistribution>(m, "StationaryDistribution")
      .def_readonly("mass", &StationaryDistribution::mass)
      .def_readonly("residual", &StationaryDistribution::residual);

  py::class_<HittingMoments>(m, "HittingMoments")
      .def_readonly("target", &HittingMoments::target)
      .def_readonly("first_moment", &HittingMoments::first_moment)
      .def_readonly("second_moment", &HittingMoments::second_moment);

  py::class_<RdsRepresentation>(m, "RdsRepresentation")
      .def_property_readonly("n_states", &RdsRepresentation::n_states)
      .def_property_readonly("kernel", &RdsRepresentation::kernel)
      .def("step", &RdsRepresentation::step, py::arg("scenario"), py::arg("time"),
           py::arg("points"))
      .def("evolve", &RdsRepresentation::evolve, py::arg("scenario"),
           py::arg("start_time"), py::arg("n"), py::arg("points"))
      .def("induced_kernel", &RdsRepresentation::induced_kernel);

  py::class_<InsulationStructure>(m, "InsulationStructure")
      .def_readonly("kappa_hat", &InsulationStructure::kappa_hat)
      .def_readonly("witness", &InsulationStructure::witness)
      .def("insulated", &InsulationStructure::insulated, py::arg("x"), py::arg("y"));

  py::class_<AttractorReport>(m, "AttractorReport")
      .def_readonly("kappa", &AttractorReport::kappa)
      .def_readonly("membership", &AttractorReport::membership)
      .def_readonly("cardinality_histogram", &AttractorReport::cardinality_histogram)
      .def_readonly("n_scenarios", &AttractorReport::n_scenarios);

  py::class_<TimeEstimate>(m, "TimeEstimate")
      .def_readonly("n_samples", &TimeEstimate::n_samples)
      .def_readonly("n_censored", &TimeEstimate::n_censored)
      .def_readonly("censored_mean", &TimeEstimate::censored_mean)
      .def_readonly("standard_error", &TimeEstimate::standard_error)
      .def_readonly("estimate_refused", &TimeEstimate::estimate_refused);

  m.def("load_spec", [](const std::string& path) {
    const ParsedSpec spec = load_spec_file(path);
    return TransitionKernel::validate(spec.chain);
  });
  m.def("kernel_from_json", [](const std::string& text) {
    const ParsedSpec spec = parse_spec_json(text);
    return TransitionKernel::validate(spec.chain);
  });
  m.def("rds_from_json", &rds_from_json, py::arg("json_text"));
  m.def("independent_rds",
        [](const TransitionKernel& k) { return RdsRepresentation::make_independent(k); });

  m.def("stationary_distribution", &stationary_distribution);
  m.def("period", [](const TransitionKernel& k) {
    const auto p = period(k);
    return py::make_tuple(p.period, p.classes);
  });
  m.def("hitting_time_moments", &hitting_time_moments, py::arg("kernel"), py::arg("target"));
  m.def("insulation", [](const RdsRepresentation& rds) {
    return insulation_relation(TwoPointKernel::build(rds));
  });
  m.def("pullback_attractor",
        [](const RdsRepresentation& rds, const InsulationStructure& structure,
           const Scenario& scenario) {
          const auto r = pullback_attractor(rds, structure, scenario);
          return py::make_tuple(r.attractor, r.steps);
        });
  m.def("estimate_kappa",
        [](const RdsRepresentation& rds, const InsulationStructure& structure,
           const Scenario& base, int64_t n_scenarios, int threads) {
          return estimate_kappa(rds, structure, base, n_scenarios, kDefaultMaxBack, threads);
        },
        py::arg("rds"), py::arg("structure"), py::arg("base"), py::arg("n_scenarios"),
        py::arg("threads") = 1);
  m.def("cftp_sample",
        [](const RdsRepresentation& rds, const InsulationStructure& structure,
           const Scenario& scenario) { return cftp_sample(rds, structure, scenario); });
  m.def("sync_time",
        [](const RdsRepresentation& rds, const InsulationStructure& structure,
           const Scenario& scenario, int x, int y, int64_t horizon) {
          const auto t = sync_time(rds, structure, scenario, x, y, horizon);
          return py::make_tuple(t.value, t.censored);
        });
  m.def("attractor_hit_time",
        [](const RdsRepresentation& rds, const InsulationStructure& structure,
           const Scenario& scenario, int x, int64_t horizon) {
          const auto t = attractor_hit_time(rds, structure, scenario, x, horizon);
          return py::make_tuple(t.value, t.censored);
        });

  // Bundled desk-scale chains.
  m.def("four_state_chain", &four_state_chain);
  m.def("four_state_f1f2", &four_state_f1f2);
  m.def("four_state_independent", &four_state_independent);
  m.def("epsilon_two_state", &epsilon_two_state, py::arg("epsilon"));
  m.def("three_cycle_chain", &three_cycle_chain);
  m.def("truncated_random_walk", &truncated_random_walk, py::arg("n_top"));
  m.def("heavy_tail_chain", &heavy_tail_chain, py::arg("n_top"));
}

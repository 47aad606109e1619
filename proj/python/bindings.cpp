#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "thmas/config.hpp"
#include "thmas/dynamics.hpp"
#include "thmas/engine.hpp"
#include "thmas/graph.hpp"
#include "thmas/switching.hpp"
#include "thmas/verify.hpp"
#include "thmas/version.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Leader-follower consensus simulation and verification for "
            "hierarchical multi-agent systems with a time-varying set of "
            "active followers.";
  m.attr("__version__") = thmas::kVersion;

  py::register_exception<thmas::ConfigError>(m, "ConfigError", PyExc_ValueError);

  // graphs
  py::class_<thmas::Edge>(m, "Edge")
      .def(py::init<int, int>(), py::arg("receiver"), py::arg("sender"))
      .def_readonly("receiver", &thmas::Edge::receiver)
      .def_readonly("sender", &thmas::Edge::sender)
      .def(py::self == py::self)
      .def("__repr__", [](const thmas::Edge& e) {
        std::ostringstream os;
        os << "Edge(receiver=" << e.receiver << ", sender=" << e.sender << ")";
        return os.str();
      });

  py::class_<thmas::DirectedGraph>(m, "DirectedGraph")
      .def(py::init<int, std::vector<int>, std::vector<thmas::Edge>>(),
           py::arg("total_agents"), py::arg("active_followers"), py::arg("edges"))
      .def(py::init([](int total_agents, std::vector<int> active,
                       const std::vector<std::pair<int, int>>& edges) {
             std::vector<thmas::Edge> es;
             es.reserve(edges.size());
             for (const auto& [receiver, sender] : edges) {
               es.push_back({receiver, sender});
             }
             return thmas::DirectedGraph(total_agents, std::move(active), std::move(es));
           }),
           py::arg("total_agents"), py::arg("active_followers"), py::arg("edges"))
      .def_property_readonly("total_agents", &thmas::DirectedGraph::total_agents)
      .def_property_readonly("leader", &thmas::DirectedGraph::leader)
      .def_property_readonly("num_followers", &thmas::DirectedGraph::num_followers)
      .def_property_readonly("active_followers", &thmas::DirectedGraph::active_followers)
      .def_property_readonly("edges", &thmas::DirectedGraph::edges)
      .def(py::self == py::self)
      .def("__repr__", [](const thmas::DirectedGraph& g) {
        std::ostringstream os;
        os << "DirectedGraph(total_agents=" << g.total_agents() << ", active=[";
        for (std::size_t i = 0; i < g.active_followers().size(); ++i) {
          os << (i ? "," : "") << g.active_followers()[i];
        }
        os << "], edges=" << g.edges().size() << ")";
        return os.str();
      });

  m.def("adjacency_matrix", &thmas::adjacency_matrix, py::arg("g"));
  m.def("degree_matrix", &thmas::degree_matrix, py::arg("g"));
  m.def("laplacian", &thmas::laplacian, py::arg("g"));
  m.def("has_spanning_tree", &thmas::has_spanning_tree, py::arg("g"), py::arg("root"));
  m.def("union_graphs", &thmas::union_graphs, py::arg("graphs"));
  m.def("build_ring_subgraph", &thmas::build_ring_subgraph, py::arg("active_set"),
        py::arg("leader"));

  // switching
  m.def("combination_count", &thmas::combination_count, py::arg("n"), py::arg("k"));
  m.def("enumerate_active_sets", &thmas::enumerate_active_sets,
        py::arg("num_followers"), py::arg("sigma"));

  py::class_<thmas::GraphFamily>(m, "GraphFamily")
      .def_property_readonly("num_followers", &thmas::GraphFamily::num_followers)
      .def_property_readonly("sigma", &thmas::GraphFamily::sigma)
      .def_property_readonly("p", &thmas::GraphFamily::size)
      .def_property_readonly("max_in_degree", &thmas::GraphFamily::max_in_degree)
      .def("graph", &thmas::GraphFamily::graph, py::arg("i"))
      .def_property_readonly("graphs", &thmas::GraphFamily::graphs)
      .def("__len__", &thmas::GraphFamily::size);

  m.def("build_family", &thmas::build_family, py::arg("num_followers"), py::arg("sigma"));

  py::class_<thmas::SwitchState>(m, "SwitchState")
      .def(py::init<>())
      .def(py::init([](int index, int sigma_prev) {
             return thmas::SwitchState{index, sigma_prev};
           }),
           py::arg("index"), py::arg("sigma_prev") = 0)
      .def_readwrite("index", &thmas::SwitchState::index)
      .def_readwrite("sigma_prev", &thmas::SwitchState::sigma_prev);

  m.def(
      "advance",
      [](const thmas::SwitchState& s, const thmas::GraphFamily& family,
         bool sigma_changed, bool at_major_tick) {
        thmas::SwitchState next = thmas::advance(s, family, sigma_changed, at_major_tick);
        return py::make_tuple(next, family.graph(next.index));
      },
      py::arg("state"), py::arg("family"), py::arg("sigma_changed"),
      py::arg("at_major_tick"));

  // dynamics
  m.def("consensus_input", &thmas::consensus_input, py::arg("x"), py::arg("A"),
        py::arg("k_fb"));
  m.def("step_followers", &thmas::step_followers, py::arg("x"), py::arg("q"),
        py::arg("u"), py::arg("w"));
  m.def("step_leader", &thmas::step_leader, py::arg("x_L"), py::arg("q_L"),
        py::arg("u_L"));
  m.def("closed_loop_matrix", &thmas::closed_loop_matrix, py::arg("L"), py::arg("w"),
        py::arg("k_fb"));
  m.def("max_gain", &thmas::max_gain, py::arg("w"), py::arg("family"));
  m.def("quantize_input", &thmas::quantize_input, py::arg("u"));
  m.def("step_closed_loop", &thmas::step_closed_loop, py::arg("x"), py::arg("P"));

  // engine
  py::class_<thmas::ScheduleEntry>(m, "ScheduleEntry")
      .def(py::init([](int sigma, double u_L) {
             return thmas::ScheduleEntry{sigma, u_L};
           }),
           py::arg("sigma"), py::arg("u_L"))
      .def_readwrite("sigma", &thmas::ScheduleEntry::sigma)
      .def_readwrite("u_L", &thmas::ScheduleEntry::u_L)
      .def(py::self == py::self);

  py::class_<thmas::ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("name", &thmas::ScenarioConfig::name)
      .def_readwrite("N", &thmas::ScenarioConfig::N)
      .def_readwrite("w", &thmas::ScenarioConfig::w)
      .def_readwrite("k_fb", &thmas::ScenarioConfig::k_fb)
      .def_readwrite("Ts", &thmas::ScenarioConfig::Ts)
      .def_readwrite("M", &thmas::ScenarioConfig::M)
      .def_readwrite("quantized", &thmas::ScenarioConfig::quantized)
      .def_readwrite("c", &thmas::ScenarioConfig::c)
      .def_readwrite("leader_scale", &thmas::ScenarioConfig::leader_scale)
      .def_readwrite("x0", &thmas::ScenarioConfig::x0)
      .def_readwrite("schedule", &thmas::ScenarioConfig::schedule)
      .def(py::self == py::self);

  py::class_<thmas::TraceRecord>(m, "TraceRecord")
      .def_readonly("k", &thmas::TraceRecord::k)
      .def_readonly("m", &thmas::TraceRecord::m)
      .def_readonly("graph_index", &thmas::TraceRecord::graph_index)
      .def_readonly("active_set", &thmas::TraceRecord::active_set)
      .def_readonly("x", &thmas::TraceRecord::x)
      .def_readonly("u", &thmas::TraceRecord::u)
      .def_readonly("consensus_error", &thmas::TraceRecord::consensus_error);

  py::class_<thmas::LimitCycleReport>(m, "LimitCycleReport")
      .def_readonly("detected", &thmas::LimitCycleReport::detected)
      .def_readonly("amplitude", &thmas::LimitCycleReport::amplitude)
      .def_readonly("period_ticks", &thmas::LimitCycleReport::period_ticks);

  py::class_<thmas::PhaseReport>(m, "PhaseReport")
      .def_readonly("sigma", &thmas::PhaseReport::sigma)
      .def_readonly("start_k", &thmas::PhaseReport::start_k)
      .def_readonly("ticks_to_tol", &thmas::PhaseReport::ticks_to_tol)
      .def_readonly("final_error", &thmas::PhaseReport::final_error);

  m.def("run_scenario", &thmas::run_scenario, py::arg("cfg"));
  m.def("check_practical_consensus_rate", &thmas::check_practical_consensus_rate,
        py::arg("cfg"));
  m.def("consensus_error_series", &thmas::consensus_error_series, py::arg("trace"));
  m.def("detect_limit_cycle", &thmas::detect_limit_cycle, py::arg("series"),
        py::arg("window"), py::arg("tol") = 1e-9);
  m.def("builtin_scenario", &thmas::builtin_scenario, py::arg("name"));
  m.def("phase_convergence", &thmas::phase_convergence, py::arg("trace"), py::arg("tol"));
  m.def("trace_csv", &thmas::trace_csv, py::arg("trace"), py::arg("num_followers"));

  // config io
  m.def(
      "config_to_json",
      [](const thmas::ScenarioConfig& cfg) { return thmas::config_json(cfg).dump(2); },
      py::arg("cfg"));
  m.def(
      "config_from_json",
      [](const std::string& text) {
        nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) {
          throw thmas::ConfigParseError("config parse error: malformed JSON");
        }
        thmas::ScenarioConfig cfg = thmas::parse_config_json(j);
        thmas::validate_config(cfg);
        return cfg;
      },
      py::arg("text"));
  m.def("parse_config_file", &thmas::parse_config_file, py::arg("path"));
  m.def("validate_config", &thmas::validate_config, py::arg("cfg"));

  // verification
  py::class_<thmas::CycleProduct>(m, "CycleProduct")
      .def_readonly("shift", &thmas::CycleProduct::shift)
      .def_readonly("matrix", &thmas::CycleProduct::matrix);

  py::class_<thmas::SubsequenceLimit>(m, "SubsequenceLimit")
      .def_readonly("shift", &thmas::SubsequenceLimit::shift)
      .def_readonly("limit_row", &thmas::SubsequenceLimit::limit_row)
      .def_readonly("residual", &thmas::SubsequenceLimit::residual);

  py::class_<thmas::CertificateCheck>(m, "CertificateCheck")
      .def_readonly("name", &thmas::CertificateCheck::name)
      .def_readonly("passed", &thmas::CertificateCheck::passed)
      .def_readonly("residual", &thmas::CertificateCheck::residual)
      .def_readonly("detail", &thmas::CertificateCheck::detail);

  py::class_<thmas::Certificate>(m, "Certificate")
      .def_readonly("N", &thmas::Certificate::N)
      .def_readonly("sigma", &thmas::Certificate::sigma)
      .def_readonly("w", &thmas::Certificate::w)
      .def_readonly("k_fb", &thmas::Certificate::k_fb)
      .def_readonly("tol", &thmas::Certificate::tol)
      .def_readonly("passed", &thmas::Certificate::passed)
      .def_readonly("checks", &thmas::Certificate::checks)
      .def("to_json", [](const thmas::Certificate& c) {
        return thmas::certificate_json(c).dump(2);
      });

  m.def("is_row_stochastic", &thmas::is_row_stochastic, py::arg("P"), py::arg("tol"));
  m.def("row_stochastic_residual", &thmas::row_stochastic_residual, py::arg("P"));
  m.def("is_primitive", &thmas::is_primitive, py::arg("P"));
  m.def("cycle_products", &thmas::cycle_products, py::arg("family"), py::arg("w"),
        py::arg("k_fb"));
  m.def("rank_one_limit", &thmas::rank_one_limit, py::arg("cycle_product"),
        py::arg("tol") = 1e-9, py::arg("max_iters") = 64);
  m.def("invariance_check", &thmas::invariance_check, py::arg("states"),
        py::arg("w_vec"));
  m.def("random_initial_state", &thmas::random_initial_state, py::arg("n"),
        py::arg("lo"), py::arg("hi"), py::arg("seed"));
  m.def("theorem1_certificate", &thmas::theorem1_certificate, py::arg("N"),
        py::arg("sigma"), py::arg("w"), py::arg("k_fb"), py::arg("x0"),
        py::arg("tol") = 1e-6);
}

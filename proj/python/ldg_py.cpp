#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ldg/mesh.hpp"
#include "ldg/study.hpp"

namespace py = pybind11;

namespace {

py::dict table_to_dict(const ldg::ConvergenceTable& t) {
  py::list rows;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    py::dict row;
    row["h"] = r.h;
    row["dofs"] = r.dofs;
    row["err_dg"] = r.err_dg;
    row["err_l2"] = r.err_l2;
    row["energy"] = r.energy;
    row["newton_iterations"] = r.newton_iterations;
    row["converged"] = r.converged;
    row["order_dg"] = i < t.order_dg.size() ? t.order_dg[i] : std::nullopt;
    row["order_l2"] = i < t.order_l2.size() ? t.order_l2[i] : std::nullopt;
    rows.append(row);
  }
  py::dict d;
  d["label"] = t.label;
  d["records"] = rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ldg, m) {
  m.doc() = "Bindings to the dG Landau-de Gennes solver core";

  py::register_exception<ldg::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ldg::Mesh>(m, "Mesh")
      .def_property_readonly("num_vertices", &ldg::Mesh::num_vertices)
      .def_property_readonly("num_triangles", &ldg::Mesh::num_triangles)
      .def_property_readonly("num_edges", &ldg::Mesh::num_edges)
      .def_property_readonly("num_interior_edges", &ldg::Mesh::num_interior_edges)
      .def_property_readonly("num_boundary_edges", &ldg::Mesh::num_boundary_edges)
      .def_property_readonly("euler_characteristic", &ldg::Mesh::euler_characteristic)
      .def_readonly("h", &ldg::Mesh::h)
      .def("refine", &ldg::refine_uniform);

  m.def("square_mesh", &ldg::build_square_mesh, py::arg("n"));
  m.def("annulus_mesh", &ldg::build_annulus_mesh, py::arg("r_in"), py::arg("r_out"), py::arg("n_seg"),
        py::arg("n_rings") = 2);
  m.def("eoc", &ldg::eoc, py::arg("errors"), py::arg("h"));

  m.def("default_config", [](const std::string& command) {
    return ldg::serialize_config(ldg::RunConfig::defaults_for(command));
  }, py::arg("command") = "converge");
  m.def("normalize_config", [](const std::string& text) {
    return ldg::serialize_config(ldg::parse_config(text));
  }, py::arg("json_text"));

  m.def("run_study", [](const std::string& json_text) {
    const ldg::RunConfig cfg = ldg::parse_config(json_text);
    ldg::StudyOutput out;
    {
      py::gil_scoped_release nogil;
      out = ldg::run_study(cfg);
    }
    py::dict d;
    py::list tables;
    for (const auto& t : out.tables) tables.append(table_to_dict(t));
    d["tables"] = tables;
    d["files"] = out.files;
    d["failures"] = out.failures;
    return d;
  }, py::arg("json_text"), "Run a study from a JSON config; returns tables, written files and failures.");
}

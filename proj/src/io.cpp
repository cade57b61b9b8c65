#include "ldg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ldg {

namespace {

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

std::optional<double> parse_optional(const std::string& tok, int line) {
  if (tok.empty()) return std::nullopt;
  double x = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + tok + "'");
  return x;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const ConvergenceTable& t, bool header) {
  if (t.records.empty()) throw std::invalid_argument("write_csv: empty table");
  if (header) os << kCsvHeader << '\n';
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const ErrorRecord& r = t.records[i];
    const std::optional<double> odg = i < t.order_dg.size() ? t.order_dg[i] : std::nullopt;
    const std::optional<double> ol2 = i < t.order_l2.size() ? t.order_l2[i] : std::nullopt;
    os << fmt(r.h) << ',' << r.dofs << ',' << fmt(r.err_dg) << ',' << fmt(odg) << ',' << fmt(r.err_l2) << ','
       << fmt(ol2) << ',' << fmt(r.energy) << ',' << r.newton_iterations << ',' << fmt(r.eps) << ',' << r.k
       << '\n';
  }
}

void export_csv(const ConvergenceTable& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(os, t);
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

ConvergenceTable read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header '" + line + "'");

  ConvergenceTable t;
  std::vector<std::optional<double>> odg, ol2;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_commas(line);
    if (f.size() != 10) throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected 10 fields");
    ErrorRecord r;
    r.h = parse_optional(f[0], lineno).value_or(0.0);
    r.dofs = static_cast<std::size_t>(parse_optional(f[1], lineno).value_or(0.0));
    r.err_dg = parse_optional(f[2], lineno);
    r.err_l2 = parse_optional(f[4], lineno);
    r.energy = parse_optional(f[6], lineno);
    r.newton_iterations = static_cast<int>(parse_optional(f[7], lineno).value_or(0.0));
    r.eps = parse_optional(f[8], lineno).value_or(0.0);
    r.k = static_cast<int>(parse_optional(f[9], lineno).value_or(1.0));
    r.converged = r.err_dg.has_value() || r.energy.has_value();
    odg.push_back(parse_optional(f[3], lineno));
    ol2.push_back(parse_optional(f[5], lineno));
    t.records.push_back(r);
  }
  if (!t.records.empty()) {
    odg.pop_back();
    ol2.pop_back();
  }
  t.order_dg = std::move(odg);
  t.order_l2 = std::move(ol2);
  return t;
}

ConvergenceTable read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(is);
}

void write_vtk(std::ostream& os, const DgSpace& s, const Coefficients& z) {
  if (z.components != 2) throw std::invalid_argument("write_vtk: expected a two-component field");
  if (z.scalar_dofs() != s.total_scalar_dofs()) throw std::invalid_argument("write_vtk: field does not match the space");

  const int k = s.degree();
  const int nb = s.dofs_per_triangle();
  const std::size_t nt = s.mesh().num_triangles();
  const std::size_t npts = nt * static_cast<std::size_t>(nb);

  // lattice (i, j) -> local node index
  std::map<std::pair<int, int>, int> lattice;
  for (int i = 0; i < nb; ++i) {
    const Point& p = s.basis().nodes()[i];
    lattice[{static_cast<int>(std::lround(p.x() * k)), static_cast<int>(std::lround(p.y() * k))}] = i;
  }
  std::vector<std::array<int, 3>> sub;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i + j < k; ++i) {
      sub.push_back({lattice[{i, j}], lattice[{i + 1, j}], lattice[{i, j + 1}]});
      if (i + j + 1 < k) sub.push_back({lattice[{i + 1, j}], lattice[{i + 1, j + 1}], lattice[{i, j + 1}]});
    }

  os << "# vtk DataFile Version 3.0\n";
  os << "ldg discontinuous field, degree " << k << "\n";
  os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << npts << " double\n";
  for (std::size_t t = 0; t < nt; ++t)
    for (int i = 0; i < nb; ++i) {
      const Point p = s.node_position(t, i);
      os << fmt(p.x()) << ' ' << fmt(p.y()) << " 0\n";
    }
  const std::size_t ncells = nt * sub.size();
  os << "CELLS " << ncells << ' ' << 4 * ncells << '\n';
  for (std::size_t t = 0; t < nt; ++t)
    for (const auto& c : sub) {
      const std::size_t base = t * static_cast<std::size_t>(nb);
      os << "3 " << base + c[0] << ' ' << base + c[1] << ' ' << base + c[2] << '\n';
    }
  os << "CELL_TYPES " << ncells << '\n';
  for (std::size_t c = 0; c < ncells; ++c) os << "5\n";

  const auto n = static_cast<Eigen::Index>(s.total_scalar_dofs());
  os << "POINT_DATA " << npts << '\n';
  auto emit = [&](const char* name, auto fn) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index d = 0; d < n; ++d) os << fmt(fn(z.values[d], z.values[d + n])) << '\n';
  };
  emit("u", [](double u, double) { return u; });
  emit("v", [](double, double v) { return v; });
  emit("s", [](double u, double v) { return std::hypot(u, v); });
  emit("theta", [](double u, double v) { return 0.5 * std::atan2(v, u); });
}

void export_vtk(const DgSpace& s, const Coefficients& z, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_vtk(os, s, z);
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace ldg

#include "pharm/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pharm {

namespace {

void fail(const std::string& path, const char* what) {
  throw std::runtime_error(std::string(what) + ": " + path);
}

// shortest exact decimal form, stable across runs
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_vtk(const Mesh& mesh, const std::string& path,
               std::span<const VtkPointData> point_data) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  const int nn = mesh.num_nodes(), ne = mesh.num_elements(), d = mesh.dim;
  os << "# vtk DataFile Version 3.0\nmesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nn << " double\n";
  for (int a = 0; a < nn; ++a) {
    for (int c = 0; c < 3; ++c)
      os << (c < d ? num(mesh.coords[std::size_t(a) * d + c]) : "0") << (c < 2 ? ' ' : '\n');
  }
  os << "CELLS " << ne << ' ' << std::size_t(ne) * (d + 2) << '\n';
  for (int e = 0; e < ne; ++e) {
    os << (d + 1);
    for (int v : mesh.simplex(e)) os << ' ' << v;
    os << '\n';
  }
  os << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) os << (d == 2 ? 5 : 10) << '\n';  // triangle / tetra

  if (!point_data.empty()) {
    os << "POINT_DATA " << nn << '\n';
    for (const auto& pd : point_data) {
      const std::vector<double>& v = *pd.data;
      if (pd.components == 1) {
        os << "SCALARS " << pd.name << " double 1\nLOOKUP_TABLE default\n";
        for (int a = 0; a < nn; ++a) os << num(v[a]) << '\n';
      } else if (pd.components <= 3) {
        os << "VECTORS " << pd.name << " double\n";
        for (int a = 0; a < nn; ++a) {
          for (int c = 0; c < 3; ++c)
            os << (c < pd.components ? num(v[std::size_t(a) * pd.components + c]) : "0")
               << (c < 2 ? ' ' : '\n');
        }
      } else {
        os << "FIELD attributes 1\n"
           << pd.name << ' ' << pd.components << ' ' << nn << " double\n";
        for (int a = 0; a < nn; ++a) {
          for (int c = 0; c < pd.components; ++c)
            os << num(v[std::size_t(a) * pd.components + c]) << (c + 1 < pd.components ? ' ' : '\n');
        }
      }
    }
  }
}

void write_vtk_points(std::span<const Vec> points, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  os << "# vtk DataFile Version 3.0\npoints\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << points.size() << " double\n";
  for (const Vec& p : points) {
    for (int c = 0; c < 3; ++c)
      os << (c < p.size() ? num(p[c]) : "0") << (c < 2 ? ' ' : '\n');
  }
  os << "CELLS " << points.size() << ' ' << 2 * points.size() << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) os << "1 " << i << '\n';
  os << "CELL_TYPES " << points.size() << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) os << "1\n";  // VTK_VERTEX
}

void write_field_csv(const VectorField& u, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  const Mesh& m = *u.mesh;
  os << "node";
  for (int c = 0; c < m.dim; ++c) os << ",x" << (c + 1);
  for (int n = 0; n < u.components; ++n) os << ",u" << (n + 1);
  os << '\n';
  for (int a = 0; a < m.num_nodes(); ++a) {
    os << a;
    for (int c = 0; c < m.dim; ++c) os << ',' << num(m.coords[std::size_t(a) * m.dim + c]);
    for (int n = 0; n < u.components; ++n)
      os << ',' << num(u.values[std::size_t(a) * u.components + n]);
    os << '\n';
  }
}

VectorField read_field_csv(const Mesh& mesh, const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(path, "cannot open for reading");
  std::string line;
  if (!std::getline(is, line)) fail(path, "empty field csv");
  int components = -1;
  {
    std::stringstream ss(line);
    std::string tok;
    int cols = 0;
    while (std::getline(ss, tok, ',')) ++cols;
    components = cols - 1 - mesh.dim;
  }
  if (components < 1) fail(path, "field csv has no value columns");
  VectorField u(mesh, components);
  std::vector<char> seen(mesh.num_nodes(), 0);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ',');
    const int a = std::stoi(tok);
    if (a < 0 || a >= mesh.num_nodes()) fail(path, "node index out of range in field csv");
    for (int c = 0; c < mesh.dim; ++c) std::getline(ss, tok, ',');  // coordinates, ignored
    for (int n = 0; n < components; ++n) {
      if (!std::getline(ss, tok, ',')) fail(path, "short row in field csv");
      u.values[std::size_t(a) * components + n] = std::stod(tok);
    }
    seen[a] = 1;
  }
  for (int a = 0; a < mesh.num_nodes(); ++a)
    if (!seen[a]) fail(path, "field csv misses nodes");
  return u;
}

void write_trace_csv(const SolveReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(path, "cannot open for writing");
  os << "iter,eps,energy,residual_norm,step\n";
  for (const TraceEntry& t : report.energy_trace)
    os << t.iter << ',' << num(t.eps) << ',' << num(t.energy) << ',' << num(t.residual_norm)
       << ',' << num(t.step) << '\n';
}

}  // namespace pharm

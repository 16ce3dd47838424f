#pragma once

#include "pharm/field.hpp"
#include "pharm/solver.hpp"

#include <span>
#include <string>
#include <vector>

namespace pharm {

// One named nodal array for VTK point data; 2- and 3-component arrays are
// written as VECTORS (padded to 3), scalars as SCALARS, anything else FIELD.
struct VtkPointData {
  std::string name;
  int components = 1;
  const std::vector<double>* data = nullptr;
};

/// Legacy ASCII VTK unstructured grid (POINTS / CELLS / CELL_TYPES).
void write_vtk(const Mesh& mesh, const std::string& path,
               std::span<const VtkPointData> point_data = {});

/// Point cloud as VTK VERTEX cells (singular-set exports).
void write_vtk_points(std::span<const Vec> points, const std::string& path);

/// CSV rows: node index, coordinates, components. Header included.
void write_field_csv(const VectorField& u, const std::string& path);

/// Reads values from write_field_csv output; the mesh fixes the node count.
VectorField read_field_csv(const Mesh& mesh, const std::string& path);

/// CSV rows: iter, eps, energy, residual_norm, step.
void write_trace_csv(const SolveReport& report, const std::string& path);

}  // namespace pharm

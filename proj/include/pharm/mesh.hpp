#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pharm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Fixed-capacity types for per-element work: n <= 3 space dimensions,
// N <= 8 target components, so nothing here touches the heap.
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 8, 1>;
using SpaceVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using GradMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 8, 3>;
using BasisGrads = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 4, 3>;

enum class NodeClass : std::uint8_t { Interior = 0, FreeSphere = 1, Dirichlet = 2 };

struct BoundaryFace {
  std::array<int, 3> nodes{-1, -1, -1};  // first dim entries used
  int element = -1;                      // unique owning simplex
  double area = 0.0;
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();  // outward unit normal (dim entries)
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
};

// Volume and barycentric basis gradients of one simplex. Row k of grad is
// the (constant) gradient of the P1 basis function of local vertex k.
struct ElementGeometry {
  double volume = 0.0;
  BasisGrads grad;
};

struct Mesh {
  int dim = 2;
  std::vector<double> coords;     // node-major, dim-strided
  std::vector<int> simplices;     // (dim+1)-strided vertex indices, positively oriented
  std::vector<double> volumes;    // per simplex
  std::vector<BoundaryFace> boundary_faces;
  std::vector<NodeClass> node_class;       // set by classify_boundary
  std::vector<std::uint8_t> on_boundary;   // node lies on some boundary face
  double h = 0.0;                          // max edge length

  int num_nodes() const { return static_cast<int>(coords.size()) / dim; }
  int num_elements() const { return static_cast<int>(simplices.size()) / (dim + 1); }

  Eigen::Map<const Vec> node(int a) const {
    return Eigen::Map<const Vec>(coords.data() + static_cast<std::size_t>(a) * dim, dim);
  }
  std::span<const int> simplex(int e) const {
    return {simplices.data() + static_cast<std::size_t>(e) * (dim + 1),
            static_cast<std::size_t>(dim + 1)};
  }
  SpaceVec barycenter(int e) const;
  ElementGeometry element_geometry(int e) const;
  double total_volume() const;
};

enum class DomainKind { Box, HalfBall, HalfBox };

struct DomainSpec {
  DomainKind kind = DomainKind::Box;
  int dim = 2;
  Vec lo, hi;           // Box / HalfBox corners; HalfBox requires lo[dim-1] == 0
  double radius = 1.0;  // HalfBall
};

enum class FacePortion : std::uint8_t { Dirichlet = 0, FreeSphere = 1, Natural = 2 };

// Boundary portions are assigned by named planar faces of the bounding box
// ("left","right","front","back","bottom","top") plus "curved" for the
// spherical part of a half-ball. Unnamed faces get the fallback portion.
struct BoundaryLayout {
  FacePortion fallback = FacePortion::Dirichlet;
  std::vector<std::pair<std::string, FacePortion>> faces;

  void set(const std::string& face, FacePortion portion) { faces.emplace_back(face, portion); }
};

struct ProblemSpec {
  double p = 2.0;
  int dim = 2;         // n
  int components = 2;  // N
  DomainSpec domain;
  BoundaryLayout boundary;
  std::function<Vec(const Vec&)> dirichlet_data;  // sampled at Dirichlet nodes

  void validate() const;  // p >= 2, dim in {2,3}, components >= 2
};

/// Conforming simplicial mesh of the given domain with target edge length
/// `resolution` along the axes. Throws on degenerate extents or if the node
/// count would exceed `node_budget`.
Mesh build_mesh(const DomainSpec& domain, double resolution,
                std::size_t node_budget = 3'000'000);

/// Mesh from raw arrays: orients simplices positively, computes volumes,
/// extracts boundary faces and measures h. Classes start Interior.
Mesh assemble_mesh(int dim, std::vector<double> coords, std::vector<int> simplices);

/// Assigns node_class on the mesh from the spec's boundary layout. Every
/// boundary face must match a named portion or the fallback; Dirichlet wins
/// over FreeSphere wins over Natural where faces meet. Natural boundary
/// nodes stay Interior (they carry no constraint).
void classify_boundary(Mesh& mesh, const ProblemSpec& spec);

/// Simplices whose barycenter lies in the open ball B(x0, r). Membership by
/// barycenter is the fixed convention for all ball integrals.
std::vector<int> ball_elements(const Mesh& mesh, const Vec& x0, double r);

/// Boundary face indices whose centroid lies in B(x0, r).
std::vector<int> ball_boundary_faces(const Mesh& mesh, const Vec& x0, double r);

/// Indices of boundary faces carrying the given portion under the layout.
std::vector<int> portion_faces(const Mesh& mesh, const ProblemSpec& spec, FacePortion portion);

}  // namespace pharm

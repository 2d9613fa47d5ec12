#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <vector>

#include "reftaylor/scalar_field.hpp"
#include "reftaylor/simplex.hpp"

namespace reftaylor {

/// A conforming simplicial mesh with a shared vertex table. Immutable once
/// built; all queries are const.
class Triangulation {
public:
  using Element = std::vector<int>;  // n + 1 vertex indices

  Triangulation(int dim, std::vector<Point> vertices, std::vector<Element> elements);

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const Simplex& simplex(std::size_t k) const { return simplices_[k]; }
  std::size_t size() const { return simplices_.size(); }
  /// max_k diam(S_k)
  double mesh_size() const { return mesh_size_; }
  /// Sum of simplex measures.
  double measure() const;

  /// Index of the first simplex (lowest index) whose closure contains P,
  /// using the barycentric test lambda_i >= -tol. Throws OutOfDomain.
  std::size_t locate(const Point& P, double tol = 1e-12) const;

  /// Every (n-1)-face (sorted vertex indices) with the elements sharing it.
  std::map<std::vector<int>, std::vector<std::size_t>> faces() const;
  /// True when every face belongs to one or two elements and every face used
  /// once lies on the boundary of the vertices' bounding box.
  bool is_conforming() const;
  /// Vertices on the boundary of the bounding box (within tol).
  std::vector<bool> boundary_vertices(double tol = 1e-12) const;

  /// Plain-text export: "v x y z" per vertex (coordinates padded with zeros
  /// to three), then "e i0 ... in" per element, 0-based.
  void write(std::ostream& os) const;
  /// Reads the format produced by write(); the dimension is inferred from the
  /// element arity.
  static Triangulation read(std::istream& is);

private:
  int dim_;
  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::vector<Simplex> simplices_;
  double mesh_size_ = 0.0;
  Point lo_;
  Point hi_;
};

/// Structured mesh of a box: intervals in 1D, squares split along the
/// (lo,lo)-(hi,hi) diagonal into 2 triangles in 2D, cubes split into the 6
/// Kuhn tetrahedra sharing the main diagonal in 3D.
Triangulation uniform_mesh(const Box& domain, int subdivisions);

/// Global piecewise interpolant pi_h(v) or pi*_h(v) on a mesh.
class GlobalInterpolant {
public:
  GlobalInterpolant(const Triangulation& mesh, const ScalarField& v, bool corrected);
  // Keeps a reference to the mesh.
  GlobalInterpolant(Triangulation&&, const ScalarField&, bool) = delete;

  /// Locates P (lowest index on ties) and evaluates there. Throws OutOfDomain.
  double operator()(const Point& P) const;
  /// Evaluates the restriction to element k at P.
  double on_element(std::size_t k, const Point& P) const;
  bool corrected() const { return corrected_; }
  const Triangulation& mesh() const { return *mesh_; }

private:
  const Triangulation* mesh_;
  bool corrected_;
  std::vector<SimplexInterpolant> locals_;
};

GlobalInterpolant global_interp(const Triangulation& mesh, const ScalarField& v, bool corrected);
GlobalInterpolant global_interp(Triangulation&&, const ScalarField&, bool) = delete;

/// Largest difference between the two restrictions of the interpolant on
/// either side of each interior face, sampled at `samples_per_face` points
/// per face (uniform random points, fixed seed). Zero for pi_h; generally
/// nonzero for pi*_h.
double max_interface_jump(const GlobalInterpolant& interp, int samples_per_face = 10);

}  // namespace reftaylor

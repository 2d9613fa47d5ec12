#include "reftaylor/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "reftaylor/errors.hpp"

namespace reftaylor {

Triangulation::Triangulation(int dim, std::vector<Point> vertices, std::vector<Element> elements)
    : dim_(dim), vertices_(std::move(vertices)), elements_(std::move(elements)) {
  if (dim_ < 1 || dim_ > 3) throw InvalidArgument("triangulation: dimension must be 1, 2 or 3");
  if (vertices_.empty() || elements_.empty()) throw InvalidArgument("triangulation: empty mesh");
  lo_ = vertices_.front();
  hi_ = vertices_.front();
  for (const auto& v : vertices_) {
    if (v.size() != dim_) throw InvalidArgument("triangulation: vertex dimension mismatch");
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  simplices_.reserve(elements_.size());
  for (const auto& e : elements_) {
    if (e.size() != static_cast<std::size_t>(dim_) + 1)
      throw InvalidArgument("triangulation: element arity must be dim + 1");
    std::vector<Point> corners;
    corners.reserve(e.size());
    for (int idx : e) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= vertices_.size())
        throw InvalidArgument("triangulation: vertex index out of range");
      corners.push_back(vertices_[static_cast<std::size_t>(idx)]);
    }
    simplices_.emplace_back(std::move(corners));
    mesh_size_ = std::max(mesh_size_, simplices_.back().diameter());
  }
}

double Triangulation::measure() const {
  double total = 0.0;
  for (const auto& s : simplices_) total += s.measure();
  return total;
}

std::size_t Triangulation::locate(const Point& P, double tol) const {
  for (std::size_t k = 0; k < simplices_.size(); ++k)
    if (simplices_[k].contains(P, tol)) return k;
  throw OutOfDomain("point lies outside the mesh");
}

std::map<std::vector<int>, std::vector<std::size_t>> Triangulation::faces() const {
  std::map<std::vector<int>, std::vector<std::size_t>> result;
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    const auto& e = elements_[k];
    for (std::size_t skip = 0; skip < e.size(); ++skip) {
      std::vector<int> face;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (i != skip) face.push_back(e[i]);
      std::sort(face.begin(), face.end());
      result[face].push_back(k);
    }
  }
  return result;
}

bool Triangulation::is_conforming() const {
  const double tol = 1e-12 * std::max(1.0, (hi_ - lo_).norm());
  for (const auto& [face, owners] : faces()) {
    if (owners.size() > 2) return false;
    if (owners.size() == 2) continue;
    bool on_boundary = false;
    for (int axis = 0; axis < dim_ && !on_boundary; ++axis) {
      for (double wall : {lo_[axis], hi_[axis]}) {
        const bool all = std::all_of(face.begin(), face.end(), [&](int v) {
          return std::abs(vertices_[static_cast<std::size_t>(v)][axis] - wall) <= tol;
        });
        if (all) on_boundary = true;
      }
    }
    if (!on_boundary) return false;
  }
  return true;
}

std::vector<bool> Triangulation::boundary_vertices(double tol) const {
  std::vector<bool> flags(vertices_.size(), false);
  const double scaled = tol * std::max(1.0, (hi_ - lo_).norm());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (int axis = 0; axis < dim_; ++axis) {
      const double x = vertices_[i][axis];
      if (std::abs(x - lo_[axis]) <= scaled || std::abs(x - hi_[axis]) <= scaled) flags[i] = true;
    }
  }
  return flags;
}

void Triangulation::write(std::ostream& os) const {
  os.precision(17);
  for (const auto& v : vertices_) {
    os << 'v';
    for (int i = 0; i < 3; ++i) os << ' ' << (i < dim_ ? v[i] : 0.0);
    os << '\n';
  }
  for (const auto& e : elements_) {
    os << 'e';
    for (int idx : e) os << ' ' << idx;
    os << '\n';
  }
}

Triangulation Triangulation::read(std::istream& is) {
  std::vector<std::array<double, 3>> coords;
  std::vector<Element> elements;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      std::array<double, 3> c{};
      if (!(ls >> c[0] >> c[1] >> c[2]))
        throw InvalidArgument("mesh line " + std::to_string(line_no) + ": expected 'v x y z'");
      coords.push_back(c);
    } else if (tag == "e") {
      Element e;
      int idx = 0;
      while (ls >> idx) e.push_back(idx);
      if (e.size() < 2 || e.size() > 4)
        throw InvalidArgument("mesh line " + std::to_string(line_no) + ": bad element arity");
      elements.push_back(std::move(e));
    } else {
      throw InvalidArgument("mesh line " + std::to_string(line_no) + ": unknown tag '" + tag + "'");
    }
  }
  if (elements.empty()) throw InvalidArgument("mesh: no elements");
  const int dim = static_cast<int>(elements.front().size()) - 1;
  std::vector<Point> vertices;
  vertices.reserve(coords.size());
  for (const auto& c : coords) vertices.push_back(Eigen::Map<const Point>(c.data(), dim));
  return Triangulation(dim, std::move(vertices), std::move(elements));
}

Triangulation uniform_mesh(const Box& domain, int subdivisions) {
  const int dim = domain.dim();
  if (dim < 1 || dim > 3) throw InvalidArgument("uniform_mesh: dimension must be 1, 2 or 3");
  if (subdivisions < 1) throw InvalidArgument("uniform_mesh: subdivisions must be positive");
  const int n = subdivisions;
  const int per_axis = n + 1;

  std::vector<Point> vertices;
  std::array<int, 3> counts{per_axis, dim > 1 ? per_axis : 1, dim > 2 ? per_axis : 1};
  const Point step = (domain.hi - domain.lo) / n;
  for (int k = 0; k < counts[2]; ++k)
    for (int j = 0; j < counts[1]; ++j)
      for (int i = 0; i < counts[0]; ++i) {
        Point p(dim);
        const std::array<int, 3> ijk{i, j, k};
        for (int d = 0; d < dim; ++d)
          p[d] = (ijk[d] == n) ? domain.hi[d] : domain.lo[d] + ijk[d] * step[d];
        vertices.push_back(p);
      }

  auto index = [&](int i, int j, int k) { return i + per_axis * (j + per_axis * k); };

  std::vector<Triangulation::Element> elements;
  if (dim == 1) {
    for (int i = 0; i < n; ++i) elements.push_back({index(i, 0, 0), index(i + 1, 0, 0)});
  } else if (dim == 2) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int v00 = index(i, j, 0);
        const int v10 = index(i + 1, j, 0);
        const int v01 = index(i, j + 1, 0);
        const int v11 = index(i + 1, j + 1, 0);
        elements.push_back({v00, v10, v11});
        elements.push_back({v00, v01, v11});
      }
  } else {
    // One tetrahedron per axis permutation: walk from the low corner to the
    // high corner adding one unit step per axis.
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::array<int, 3>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (const auto& p : perms) {
            std::array<int, 3> c{i, j, k};
            Triangulation::Element e{index(c[0], c[1], c[2])};
            for (int axis : p) {
              ++c[axis];
              e.push_back(index(c[0], c[1], c[2]));
            }
            elements.push_back(std::move(e));
          }
  }
  return Triangulation(dim, std::move(vertices), std::move(elements));
}

GlobalInterpolant::GlobalInterpolant(const Triangulation& mesh, const ScalarField& v,
                                     bool corrected)
    : mesh_(&mesh), corrected_(corrected) {
  locals_.reserve(mesh.size());
  for (const auto& s : mesh.simplices()) locals_.emplace_back(s, v);
}

double GlobalInterpolant::operator()(const Point& P) const {
  return on_element(mesh_->locate(P), P);
}

double GlobalInterpolant::on_element(std::size_t k, const Point& P) const {
  return locals_[k].evaluate(P, corrected_);
}

GlobalInterpolant global_interp(const Triangulation& mesh, const ScalarField& v, bool corrected) {
  return GlobalInterpolant(mesh, v, corrected);
}

double max_interface_jump(const GlobalInterpolant& interp, int samples_per_face) {
  const auto& mesh = interp.mesh();
  std::mt19937_64 rng(0x5eed);
  std::exponential_distribution<double> expo(1.0);
  double worst = 0.0;
  for (const auto& [face, owners] : mesh.faces()) {
    if (owners.size() != 2) continue;
    for (int s = 0; s < samples_per_face; ++s) {
      // Uniform point on the face via normalized exponentials.
      std::vector<double> w(face.size());
      double total = 0.0;
      for (auto& x : w) total += (x = expo(rng));
      Point P = Point::Zero(mesh.dim());
      for (std::size_t i = 0; i < face.size(); ++i)
        P += (w[i] / total) * mesh.vertices()[static_cast<std::size_t>(face[i])];
      worst = std::max(worst, std::abs(interp.on_element(owners[0], P) -
                                       interp.on_element(owners[1], P)));
    }
  }
  return worst;
}

}  // namespace reftaylor

#include "reftaylor/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include <Eigen/Sparse>

#include "reftaylor/errors.hpp"
#include "reftaylor/quadrature.hpp"

namespace reftaylor {

using std::numbers::pi;

const char* to_string(FemSpace space) { return space == FemSpace::P1 ? "P1" : "P2"; }

void EllipticProblem::validate() const {
  if (dim < 1 || dim > 2) throw InvalidArgument("elliptic problem: dimension must be 1 or 2");
  if (!(diffusion > 0.0)) throw InvalidArgument("elliptic problem: diffusion must be positive");
  if (!(reaction >= 0.0)) throw InvalidArgument("elliptic problem: reaction must be >= 0");
  if (!rhs) throw InvalidArgument("elliptic problem: missing right-hand side");
  if (!(constants.alpha > 0.0)) throw InvalidArgument("elliptic problem: alpha must be positive");
  if (!(constants.C >= constants.alpha)) throw InvalidArgument("elliptic problem: need C >= alpha");
  if (exact_solution && exact_solution->dim() != dim)
    throw InvalidArgument("elliptic problem: exact solution dimension mismatch");
}

FormConstants default_constants(const Box& domain, double diffusion, double reaction,
                                BoundaryKind boundary) {
  FormConstants c;
  c.C = std::max(1.0 + diffusion, reaction);
  if (boundary == BoundaryKind::Natural) {
    c.alpha = std::min(diffusion, reaction);
    return c;
  }
  double inv_sq = 0.0;
  for (int i = 0; i < domain.dim(); ++i) {
    const double len = domain.hi[i] - domain.lo[i];
    inv_sq += 1.0 / (len * len);
  }
  const double cp2 = 1.0 / (pi * pi * inv_sq);
  c.alpha = reaction < diffusion ? (diffusion + reaction * cp2) / (1.0 + cp2) : diffusion;
  return c;
}

EllipticProblem sine_problem(int dim, double diffusion, double reaction) {
  if (dim < 1 || dim > 2) throw InvalidArgument("sine_problem: dimension must be 1 or 2");
  const Box box = Box::unit(dim);
  auto value = [](const Point& x) {
    double r = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) r *= std::sin(pi * x[i]);
    return r;
  };
  auto gradient = [](const Point& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double r = pi * std::cos(pi * x[i]);
      for (Eigen::Index j = 0; j < x.size(); ++j)
        if (j != i) r *= std::sin(pi * x[j]);
      g[i] = r;
    }
    return g;
  };
  auto hessian = [](const Point& x) {
    const auto n = x.size();
    Matrix H(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        double r = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const bool di = (k == i);
          const bool dj = (k == j);
          if (di && dj) r *= -pi * pi * std::sin(pi * x[k]);
          else if (di || dj) r *= pi * std::cos(pi * x[k]);
          else r *= std::sin(pi * x[k]);
        }
        H(i, j) = r;
      }
    return H;
  };

  EllipticProblem p;
  p.dim = dim;
  p.diffusion = diffusion;
  p.reaction = reaction;
  const double factor = dim * pi * pi * diffusion + reaction;
  p.rhs = [value, factor](const Point& x) { return factor * value(x); };
  p.exact_solution = ScalarField(dim == 1 ? "sin1d" : "sin2d", box, value, gradient, hessian);
  p.solution_norms = DerivativeNorms{pi, pi * pi};
  p.constants = default_constants(box, diffusion, reaction);
  return p;
}

EllipticProblem parabola_problem_1d() {
  EllipticProblem p;
  p.dim = 1;
  p.rhs = [](const Point&) { return 2.0; };
  p.exact_solution = make_field_1d(
      "parabola", 0.0, 1.0, [](double x) { return x * (1.0 - x); },
      [](double x) { return 1.0 - 2.0 * x; }, [](double) { return -2.0; });
  p.solution_norms = DerivativeNorms{1.0, 2.0};
  p.constants = default_constants(Box::unit(1), p.diffusion, p.reaction);
  return p;
}

EllipticProblem affine_problem(int dim) {
  if (dim < 1 || dim > 2) throw InvalidArgument("affine_problem: dimension must be 1 or 2");
  Vector slope(dim);
  slope[0] = 2.0;
  if (dim == 2) slope[1] = -1.0;
  auto value = [slope](const Point& x) { return 1.0 + slope.dot(x); };
  EllipticProblem p;
  p.dim = dim;
  p.rhs = [](const Point&) { return 0.0; };
  p.boundary_values = value;
  p.exact_solution = ScalarField(
      "affine", Box::unit(dim), value, [slope](const Point&) { return slope; },
      [dim](const Point&) { return Matrix::Zero(dim, dim).eval(); });
  p.solution_norms = DerivativeNorms{slope.norm(), 0.0};
  p.constants = default_constants(Box::unit(dim), p.diffusion, p.reaction);
  return p;
}

namespace {

// Local shape functions in barycentric form. For P2 the local ordering is the
// n+1 vertex functions followed by one function per edge (i<j, lexicographic).
std::vector<std::pair<int, int>> local_edges(int dim) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i <= dim; ++i)
    for (int j = i + 1; j <= dim; ++j) edges.emplace_back(i, j);
  return edges;
}

int local_dof_count(FemSpace space, int dim) {
  const int vertices = dim + 1;
  return space == FemSpace::P1 ? vertices : vertices + vertices * dim / 2;
}

Vector shape_values(FemSpace space, int dim, const Vector& lambda) {
  Vector phi(local_dof_count(space, dim));
  if (space == FemSpace::P1) return lambda;
  for (int i = 0; i <= dim; ++i) phi[i] = lambda[i] * (2.0 * lambda[i] - 1.0);
  int e = dim + 1;
  for (auto [i, j] : local_edges(dim)) phi[e++] = 4.0 * lambda[i] * lambda[j];
  return phi;
}

// Rows are shape-function gradients.
Matrix shape_gradients(FemSpace space, int dim, const Vector& lambda, const Matrix& grad_lambda) {
  if (space == FemSpace::P1) return grad_lambda;
  Matrix g(local_dof_count(space, dim), dim);
  for (int i = 0; i <= dim; ++i) g.row(i) = (4.0 * lambda[i] - 1.0) * grad_lambda.row(i);
  int e = dim + 1;
  for (auto [i, j] : local_edges(dim))
    g.row(e++) = 4.0 * (lambda[j] * grad_lambda.row(i) + lambda[i] * grad_lambda.row(j));
  return g;
}

struct DofLayout {
  std::vector<Point> coords;
  std::vector<std::vector<int>> element_dofs;
};

DofLayout build_dofs(const Triangulation& mesh, FemSpace space) {
  DofLayout layout;
  layout.coords = mesh.vertices();
  std::map<std::pair<int, int>, int> edge_dof;
  const auto edges = local_edges(mesh.dim());
  for (const auto& element : mesh.elements()) {
    std::vector<int> dofs(element.begin(), element.end());
    if (space == FemSpace::P2) {
      for (auto [i, j] : edges) {
        auto key = std::minmax(element[i], element[j]);
        auto [it, inserted] = edge_dof.try_emplace(key, static_cast<int>(layout.coords.size()));
        if (inserted)
          layout.coords.push_back(0.5 * (mesh.vertices()[static_cast<std::size_t>(key.first)] +
                                         mesh.vertices()[static_cast<std::size_t>(key.second)]));
        dofs.push_back(it->second);
      }
    }
    layout.element_dofs.push_back(std::move(dofs));
  }
  return layout;
}

std::vector<bool> boundary_dofs(const Triangulation& mesh, const std::vector<Point>& coords) {
  Point lo = mesh.vertices().front();
  Point hi = lo;
  for (const auto& v : mesh.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double tol = 1e-12 * std::max(1.0, (hi - lo).norm());
  std::vector<bool> flags(coords.size(), false);
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (int d = 0; d < mesh.dim(); ++d)
      if (std::abs(coords[i][d] - lo[d]) <= tol || std::abs(coords[i][d] - hi[d]) <= tol)
        flags[i] = true;
  return flags;
}

using SparseMatrix = Eigen::SparseMatrix<double>;

Vector solve_cg(const SparseMatrix& A, const Vector& b, SolverStats& stats) {
  const auto n = A.rows();
  Vector x = Vector::Zero(n);
  const double b_norm = b.norm();
  stats.method = "cg";
  if (b_norm == 0.0) return x;
  Vector inv_diag = A.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(inv_diag[i] > 0.0)) throw SolverError("cg: matrix has a nonpositive diagonal entry");
    inv_diag[i] = 1.0 / inv_diag[i];
  }
  Vector r = b;
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  double rz = r.dot(z);
  const int max_iterations = static_cast<int>(10 * n);
  for (int it = 1; it <= max_iterations; ++it) {
    const Vector q = A * p;
    const double pq = p.dot(q);
    if (!(pq > 0.0)) throw SolverError("cg: breakdown (matrix not positive definite)");
    const double step = rz / pq;
    x += step * p;
    r -= step * q;
    stats.iterations = it;
    if (r.norm() <= 1e-12 * b_norm) return x;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw SolverError("cg: no convergence within " + std::to_string(max_iterations) + " iterations");
}

Vector solve_system(const SparseMatrix& A, const Vector& b, SolverStats& stats) {
  Vector x;
  if (A.rows() <= 2000) {
    stats.method = "dense-lu";
    const Matrix dense(A);
    Eigen::PartialPivLU<Matrix> lu(dense);
    x = lu.solve(b);
  } else {
    x = solve_cg(A, b, stats);
  }
  const double b_norm = b.norm();
  stats.relative_residual = b_norm > 0.0 ? (A * x - b).norm() / b_norm : (A * x).norm();
  if (!x.allFinite() || !(stats.relative_residual <= 1e-10))
    throw SolverError("linear solve failed: relative residual " +
                      std::to_string(stats.relative_residual));
  return x;
}

}  // namespace

double FemSolution::on_element(std::size_t k, const Point& P) const {
  const auto& s = mesh->simplex(k);
  const Vector phi = shape_values(space, s.dim(), s.barycentric(P));
  double value = 0.0;
  const auto& dofs = element_dofs[k];
  for (std::size_t i = 0; i < dofs.size(); ++i)
    value += phi[static_cast<Eigen::Index>(i)] * dof_values[static_cast<std::size_t>(dofs[i])];
  return value;
}

Vector FemSolution::gradient_on_element(std::size_t k, const Point& P) const {
  const auto& s = mesh->simplex(k);
  const Matrix g =
      shape_gradients(space, s.dim(), s.barycentric(P), s.barycentric_gradients());
  Vector grad = Vector::Zero(s.dim());
  const auto& dofs = element_dofs[k];
  for (std::size_t i = 0; i < dofs.size(); ++i)
    grad += dof_values[static_cast<std::size_t>(dofs[i])] *
            g.row(static_cast<Eigen::Index>(i)).transpose();
  return grad;
}

double FemSolution::operator()(const Point& P) const { return on_element(mesh->locate(P), P); }

FemSolution assemble_and_solve(const EllipticProblem& problem, const Triangulation& mesh,
                               FemSpace space) {
  problem.validate();
  if (mesh.dim() != problem.dim)
    throw InvalidArgument("assemble_and_solve: mesh and problem dimensions differ");
  if (problem.boundary == BoundaryKind::Natural && problem.reaction == 0.0)
    throw SolverError("assemble_and_solve: singular system (no boundary constraint, zero reaction)");

  FemSolution sol;
  sol.space = space;
  sol.mesh = std::make_shared<const Triangulation>(mesh);
  auto layout = build_dofs(mesh, space);
  const std::size_t ndof = layout.coords.size();
  const int dim = mesh.dim();
  const auto& rule = simplex_rule_degree4(dim);

  std::vector<Eigen::Triplet<double>> triplets;
  Vector load = Vector::Zero(static_cast<Eigen::Index>(ndof));
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const auto& s = mesh.simplex(k);
    const auto& dofs = layout.element_dofs[k];
    const auto nloc = static_cast<Eigen::Index>(dofs.size());
    Matrix local = Matrix::Zero(nloc, nloc);
    Vector local_load = Vector::Zero(nloc);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Vector lambda = Eigen::Map<const Vector>(rule.barycentric[q].data(), dim + 1);
      const double w = rule.weights[q] * s.measure();
      const Vector phi = shape_values(space, dim, lambda);
      const Matrix grad = shape_gradients(space, dim, lambda, s.barycentric_gradients());
      local += w * (problem.diffusion * grad * grad.transpose() +
                    problem.reaction * phi * phi.transpose());
      local_load += w * problem.rhs(s.from_barycentric(lambda)) * phi;
    }
    for (Eigen::Index i = 0; i < nloc; ++i) {
      load[dofs[static_cast<std::size_t>(i)]] += local_load[i];
      for (Eigen::Index j = 0; j < nloc; ++j)
        triplets.emplace_back(dofs[static_cast<std::size_t>(i)],
                              dofs[static_cast<std::size_t>(j)], local(i, j));
    }
  }
  SparseMatrix A(static_cast<Eigen::Index>(ndof), static_cast<Eigen::Index>(ndof));
  A.setFromTriplets(triplets.begin(), triplets.end());

  // Eliminate constrained dofs: A_II u_I = b_I - A_IB g_B.
  std::vector<bool> constrained(ndof, false);
  if (problem.boundary == BoundaryKind::Dirichlet) constrained = boundary_dofs(mesh, layout.coords);
  Vector full = Vector::Zero(static_cast<Eigen::Index>(ndof));
  std::vector<int> free_index(ndof, -1);
  int nfree = 0;
  for (std::size_t i = 0; i < ndof; ++i) {
    if (constrained[i]) {
      full[static_cast<Eigen::Index>(i)] =
          problem.boundary_values ? problem.boundary_values(layout.coords[i]) : 0.0;
    } else {
      free_index[i] = nfree++;
    }
  }
  const Vector lifted = load - A * full;

  if (nfree > 0) {
    std::vector<Eigen::Triplet<double>> reduced_triplets;
    for (int col = 0; col < A.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
        const int r = free_index[static_cast<std::size_t>(it.row())];
        const int c = free_index[static_cast<std::size_t>(it.col())];
        if (r >= 0 && c >= 0) reduced_triplets.emplace_back(r, c, it.value());
      }
    SparseMatrix reduced(nfree, nfree);
    reduced.setFromTriplets(reduced_triplets.begin(), reduced_triplets.end());
    Vector b(nfree);
    for (std::size_t i = 0; i < ndof; ++i)
      if (free_index[i] >= 0) b[free_index[i]] = lifted[static_cast<Eigen::Index>(i)];
    const Vector x = solve_system(reduced, b, sol.solver);
    for (std::size_t i = 0; i < ndof; ++i)
      if (free_index[i] >= 0) full[static_cast<Eigen::Index>(i)] = x[free_index[i]];
  } else {
    sol.solver.method = "none";
  }

  sol.dof_values.assign(full.data(), full.data() + full.size());
  sol.dof_coords = std::move(layout.coords);
  sol.element_dofs = std::move(layout.element_dofs);

  if (problem.exact_solution) {
    const auto& u = *problem.exact_solution;
    const ScalarField::ValueFn exact = [&u](const Point& x) { return u.value(x); };
    sol.l2_error = l2_norm_error(sol, exact);
    const GlobalInterpolant interp(*sol.mesh, u, space == FemSpace::P2);
    sol.interp_l2_error = l2_norm_error(interp, exact);

    double h1 = 0.0;
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      const auto& s = mesh.simplex(k);
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Point P = s.from_barycentric(
            Eigen::Map<const Vector>(rule.barycentric[q].data(), dim + 1));
        h1 += rule.weights[q] * s.measure() *
              (u.gradient(P) - sol.gradient_on_element(k, P)).squaredNorm();
      }
    }
    sol.h1_seminorm_error = std::sqrt(h1);
  }
  return sol;
}

double l2_norm_error(const Triangulation& mesh, const ElementFunction& approx,
                     const ScalarField::ValueFn& exact) {
  const auto& rule = simplex_rule_degree4(mesh.dim());
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const auto& s = mesh.simplex(k);
    double local = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Point P =
          s.from_barycentric(Eigen::Map<const Vector>(rule.barycentric[q].data(), mesh.dim() + 1));
      const double diff = exact(P) - approx(k, P);
      local += rule.weights[q] * diff * diff;
    }
    total += local * s.measure();
  }
  return std::sqrt(total);
}

double l2_norm_error(const GlobalInterpolant& approx, const ScalarField::ValueFn& exact) {
  return l2_norm_error(
      approx.mesh(), [&approx](std::size_t k, const Point& P) { return approx.on_element(k, P); },
      exact);
}

double l2_norm_error(const FemSolution& approx, const ScalarField::ValueFn& exact) {
  return l2_norm_error(
      *approx.mesh, [&approx](std::size_t k, const Point& P) { return approx.on_element(k, P); },
      exact);
}

CeaGap cea_gap(const FemSolution& solution, const EllipticProblem& problem) {
  if (!problem.exact_solution || !solution.l2_error || !solution.interp_l2_error)
    throw UnsupportedConfiguration("cea_gap: needs a manufactured exact solution");
  const double ratio = problem.constants.C / problem.constants.alpha;
  return CeaGap{*solution.l2_error, ratio * *solution.interp_l2_error};
}

EstimateReport estimate_report(const EllipticProblem& problem, const Triangulation& mesh,
                               FemSpace space) {
  if (!problem.exact_solution || !problem.solution_norms)
    throw UnsupportedConfiguration(
        "estimate_report: needs an exact solution with analytic derivative norms");
  const auto sol = assemble_and_solve(problem, mesh, space);
  const auto& u = *problem.exact_solution;
  const ScalarField::ValueFn exact = [&u](const Point& x) { return u.value(x); };

  EstimateReport r;
  r.space = space;
  r.h = mesh.mesh_size();
  r.mu = mesh.measure();
  r.c_over_alpha = problem.constants.C / problem.constants.alpha;
  r.norms = *problem.solution_norms;
  r.dofs = sol.dof_count();
  r.measured_solution_error = *sol.l2_error;
  r.interp_error_pi = l2_norm_error(GlobalInterpolant(*sol.mesh, u, false), exact);
  r.interp_error_pi_star = l2_norm_error(GlobalInterpolant(*sol.mesh, u, true), exact);
  r.measured_interp_error = space == FemSpace::P1 ? r.interp_error_pi : r.interp_error_pi_star;
  r.h1_seminorm_error = *sol.h1_seminorm_error;

  const auto local = interp_error_bounds(r.h, r.norms);
  const double root_mu = std::sqrt(r.mu);
  r.interp_bound_classical = local.classical * root_mu;
  r.interp_bound_refined = local.refined * root_mu;
  r.interp_bound_corrected = local.corrected * root_mu;
  r.cea_rhs_classical = r.c_over_alpha * r.interp_bound_classical;
  r.cea_rhs_refined = r.c_over_alpha * r.interp_bound_refined;
  r.cea_rhs_corrected = r.c_over_alpha * r.interp_bound_corrected;
  return r;
}

MeshSavings mesh_savings(double eps, double d2_inf, double C, double alpha, int dim) {
  if (!(eps > 0.0) || !(d2_inf > 0.0) || !(C > 0.0) || !(alpha > 0.0) || dim < 1)
    throw InvalidArgument("mesh_savings: eps, |||D^2u|||, C, alpha and dim must be positive");
  MeshSavings s;
  s.h_classical = std::sqrt(2.0 * alpha * eps / (C * d2_inf));
  s.h_corrected = std::sqrt(4.0 * alpha * eps / (C * d2_inf));
  s.node_factor = std::pow(std::numbers::sqrt2 / 2.0, dim);
  return s;
}

double convergence_slope(const std::vector<double>& sizes, const std::vector<double>& errors) {
  if (sizes.size() != errors.size() || sizes.size() < 2)
    throw InvalidArgument("convergence_slope: need at least two matching samples");
  const double n = static_cast<double>(sizes.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0) || !(errors[i] > 0.0))
      throw InvalidArgument("convergence_slope: sizes and errors must be positive");
    const double x = std::log(sizes[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace reftaylor

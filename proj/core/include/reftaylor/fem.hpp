#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reftaylor/mesh.hpp"
#include "reftaylor/scalar_field.hpp"
#include "reftaylor/simplex.hpp"

namespace reftaylor {

enum class FemSpace { P1, P2 };

const char* to_string(FemSpace space);

enum class BoundaryKind {
  Dirichlet,  // values prescribed on the whole boundary of the mesh box
  Natural,    // no constraint; singular when reaction == 0
};

/// Continuity and ellipticity constants of a(.,.) in the H^1 norm:
/// alpha |v|^2_{H1} <= a(v, v) <= C |v|^2_{H1}.
struct FormConstants {
  double C = 1.0;
  double alpha = 1.0;
};

/// Model problem -(diffusion) Laplace(u) + reaction u = f on a box, with
/// a(u, v) = int diffusion grad u . grad v + reaction u v.
struct EllipticProblem {
  int dim = 1;
  double diffusion = 1.0;
  double reaction = 0.0;
  ScalarField::ValueFn rhs;
  BoundaryKind boundary = BoundaryKind::Dirichlet;
  /// Dirichlet data; homogeneous when empty.
  ScalarField::ValueFn boundary_values;
  std::optional<ScalarField> exact_solution;
  /// Sup norms of Du and D^2u over the domain, when known analytically.
  std::optional<DerivativeNorms> solution_norms;
  FormConstants constants;

  /// Throws InvalidArgument on diffusion <= 0, reaction < 0, alpha <= 0 or
  /// C < alpha, or a missing right-hand side.
  void validate() const;
};

/// Documented defaults (reported, not certified). With the Dirichlet
/// Poincare constant c_P of the box (c_P^2 = 1/(pi^2 sum 1/L_i^2)):
///   C     = max(1 + diffusion, reaction)
///   alpha = (diffusion + reaction c_P^2) / (1 + c_P^2)   if reaction < diffusion
///           diffusion                                     otherwise
/// and alpha = min(diffusion, reaction) for natural boundary conditions.
FormConstants default_constants(const Box& domain, double diffusion, double reaction,
                                BoundaryKind boundary = BoundaryKind::Dirichlet);

/// u = prod_i sin(pi x_i) on the unit box (dim 1 or 2), f = (dim pi^2 diffusion + reaction) u,
/// with |||Du||| <= pi and |||D^2u||| <= pi^2.
EllipticProblem sine_problem(int dim, double diffusion = 1.0, double reaction = 0.0);

/// u = x (1 - x) in 1D; -u'' = 2. Lies in the P2 space.
EllipticProblem parabola_problem_1d();

/// An affine exact solution with matching Dirichlet data and f = 0
/// (reaction 0): u = 1 + 2x in 1D, u = 1 + 2x - y in 2D.
EllipticProblem affine_problem(int dim);

struct SolverStats {
  std::string method;  // "dense-lu" or "cg"
  int iterations = 0;
  double relative_residual = 0.0;
};

class FemSolution {
public:
  FemSpace space = FemSpace::P1;
  std::shared_ptr<const Triangulation> mesh;
  std::vector<double> dof_values;
  std::vector<Point> dof_coords;
  std::vector<std::vector<int>> element_dofs;
  SolverStats solver;
  /// ||u - u_h||_{L2}; present when the problem has an exact solution.
  std::optional<double> l2_error;
  /// ||u - pi_h u||_{L2} for P1, ||u - pi*_h u||_{L2} for P2.
  std::optional<double> interp_l2_error;
  /// |u - u_h|_{H1}; a diagnostic only.
  std::optional<double> h1_seminorm_error;

  std::size_t dof_count() const { return dof_values.size(); }
  double on_element(std::size_t k, const Point& P) const;
  Vector gradient_on_element(std::size_t k, const Point& P) const;
  double operator()(const Point& P) const;
};

/// Galerkin solution in the P1 or P2 Lagrange space of `mesh` (dimension 1 or
/// 2). Dense LU up to 2000 unknowns, Jacobi-preconditioned CG above
/// (tol 1e-12, at most 10 x unknowns iterations). Throws SolverError for
/// singular systems or when the final relative residual exceeds 1e-10.
FemSolution assemble_and_solve(const EllipticProblem& problem, const Triangulation& mesh,
                               FemSpace space);

/// Element-aware approximation: value of the approximation on element k at P.
using ElementFunction = std::function<double(std::size_t, const Point&)>;

/// sqrt(sum_k int_{S_k} (exact - approx)^2) with a degree-4 rule per simplex.
double l2_norm_error(const Triangulation& mesh, const ElementFunction& approx,
                     const ScalarField::ValueFn& exact);
double l2_norm_error(const GlobalInterpolant& approx, const ScalarField::ValueFn& exact);
double l2_norm_error(const FemSolution& approx, const ScalarField::ValueFn& exact);

struct CeaGap {
  double lhs = 0.0;  // ||u - u_h||_{L2}
  double rhs = 0.0;  // (C/alpha) ||u - pi_h u||_{L2}  (pi*_h for P2)
  bool holds() const { return lhs <= rhs; }
};

/// Measures both sides of the L2 quasi-optimality chain. Throws
/// UnsupportedConfiguration without an exact solution.
CeaGap cea_gap(const FemSolution& solution, const EllipticProblem& problem);

struct EstimateReport {
  FemSpace space = FemSpace::P1;
  double h = 0.0;
  double mu = 0.0;  // measure of the meshed domain
  double c_over_alpha = 0.0;
  DerivativeNorms norms;
  double measured_solution_error = 0.0;
  /// ||u - pi_h u|| for P1, ||u - pi*_h u|| for P2.
  double measured_interp_error = 0.0;
  double interp_error_pi = 0.0;
  double interp_error_pi_star = 0.0;
  /// Interpolation-error bounds times sqrt(mu), without C/alpha.
  double interp_bound_classical = 0.0;  // |||D^2u||| h^2 / 2
  double interp_bound_refined = 0.0;    // |||Du||| h / 2 + |||D^2u||| h^2 / 4
  double interp_bound_corrected = 0.0;  // |||D^2u||| h^2 / 4
  /// The same bounds multiplied by C/alpha.
  double cea_rhs_classical = 0.0;
  double cea_rhs_refined = 0.0;
  double cea_rhs_corrected = 0.0;
  double h1_seminorm_error = 0.0;
  std::size_t dofs = 0;

  double interp_bound_min() const {
    return interp_bound_classical < interp_bound_refined ? interp_bound_classical
                                                         : interp_bound_refined;
  }
  double cea_rhs_min() const {
    return cea_rhs_classical < cea_rhs_refined ? cea_rhs_classical : cea_rhs_refined;
  }
  /// The bound that applies to measured_interp_error for this space.
  double applicable_interp_bound() const {
    return space == FemSpace::P1 ? interp_bound_min() : interp_bound_corrected;
  }
};

/// Solves, measures, and evaluates the error-bound right-hand sides. Throws
/// UnsupportedConfiguration without an exact solution and its norms.
EstimateReport estimate_report(const EllipticProblem& problem, const Triangulation& mesh,
                               FemSpace space);

struct MeshSavings {
  double h_classical = 0.0;
  double h_corrected = 0.0;
  double node_factor = 0.0;  // (1/sqrt(2))^dim

  double ratio() const { return h_corrected / h_classical; }
};

/// Mesh sizes meeting C |||D^2u||| h^2 / (2 alpha) <= eps (classical) and
/// C |||D^2u||| h^2 / (4 alpha) <= eps (corrected).
MeshSavings mesh_savings(double eps, double d2_inf, double C, double alpha, int dim);

/// Least-squares slope of log(errors) against log(sizes).
double convergence_slope(const std::vector<double>& sizes, const std::vector<double>& errors);

}  // namespace reftaylor

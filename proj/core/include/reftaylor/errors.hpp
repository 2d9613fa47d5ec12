#pragma once

#include <stdexcept>
#include <string>

namespace reftaylor {

/// Bad parameter values (m = 0, beta <= 1/2, negative norms, ...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A point or segment the computation needs lies outside a field's domain box.
class DomainError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Degenerate (flat) simplex.
class SingularGeometry : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Query point not in the closed simplex.
class OutOfElement : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Query point not covered by any simplex of a mesh.
class OutOfDomain : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Supplied data contradicts what was measured (e.g. a zero second-derivative
/// norm for a function that is visibly not affine).
class Inconsistency : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UnsupportedConfiguration : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace reftaylor

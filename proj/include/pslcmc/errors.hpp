#pragma once

#include <stdexcept>
#include <string>

namespace pslcmc {

// Domain violations (y <= 0, f <= 0, r outside the annulus) are reported as
// std::domain_error and bad arguments as std::invalid_argument. The types
// below cover failures that only show up during a computation.

class NumericalDegeneracy : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class AssemblyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace pslcmc

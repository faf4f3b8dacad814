#pragma once

#include <stdexcept>
#include <string>

namespace eqtri {

/// Parameters fall on an excluded value (k = 0, T = 0, A = 0, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A generated triple set has a zero part.
class DegenerateSet : public DomainError {
 public:
  explicit DegenerateSet(const std::string& what) : DomainError(what) {}
};

/// Weierstrass model with vanishing discriminant.
class SingularCurve : public DomainError {
 public:
  explicit SingularCurve(const std::string& what) : DomainError(what) {}
};

/// The factoring budget ran out before a needed factorization finished.
class IncompleteFactorization : public std::runtime_error {
 public:
  explicit IncompleteFactorization(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eqtri

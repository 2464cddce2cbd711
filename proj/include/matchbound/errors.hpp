#pragma once

#include <stdexcept>
#include <string>

namespace matchbound {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of a function (k < 1, x outside [0,1], ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// A decision would push some x_v above 1 (or carries a negative increment).
class InfeasibleDecision : public Error {
public:
  using Error::Error;
};

// A decision touches an edge that the triggering arrival did not reveal.
class UnknownEdge : public Error {
public:
  using Error::Error;
};

class EmptySet : public Error {
public:
  using Error::Error;
};

class NonInvertible : public Error {
public:
  using Error::Error;
};

class SingularDenominator : public Error {
public:
  using Error::Error;
};

class BadInitialization : public Error {
public:
  using Error::Error;
};

class NotBipartite : public Error {
public:
  using Error::Error;
};

class BudgetExceeded : public Error {
public:
  using Error::Error;
};

enum class StructureClaim { bipartite, perfect_matching, divisibility, feasibility };

const char* to_string(StructureClaim claim);

class StructureViolation : public Error {
public:
  StructureViolation(StructureClaim claim, const std::string& detail)
      : Error(std::string(to_string(claim)) + ": " + detail), claim_(claim) {}

  StructureClaim claim() const noexcept { return claim_; }

private:
  StructureClaim claim_;
};

}  // namespace matchbound

#pragma once

#include <stdexcept>
#include <string>

namespace polymean {

enum class ErrorKind {
  InvalidArgument,
  Infeasible,     // no monotone matching at the requested error
  Unreachable,    // sink of an event graph cannot be reached
  EmptyGraph,     // source or sink blocked before any search
  Failed,         // bi-criteria dynamic program could not reach the last vertex
  BudgetExceeded, // oracle input larger than its enumeration budget
  TooLarge,       // exact p-mean caps exceeded
  Io,
  Parse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace polymean

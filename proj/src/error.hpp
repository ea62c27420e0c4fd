#pragma once

#include <stdexcept>
#include <string>

namespace ccdf {

enum class ErrorKind {
  domain,
  degenerate_curve,
  non_closed_curvature,
  undefined_expansion,
  not_applicable,
  non_convex_support,
  trivial_solution,
  precondition,
  invalid_argument,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ccdf

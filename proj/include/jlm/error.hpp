#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jlm {

enum class ErrorKind {
  invalid_scalar,
  evaluation_pole,
  degree_cap,
  mixed_pi,
  parse,
  spec_violation,
  not_square_integrable,
  no_discrete_series,
  invalid_parameter,
  divergence,
  truncation,
  input,
  normalization,
  domain,
  resource,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is
/// stable and is what the CLI maps onto exit codes and JSON error records.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace jlm

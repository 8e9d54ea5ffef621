#pragma once

#include <stdexcept>
#include <string>

namespace blowuplab {

/// Thrown when an iterative solver fails to converge or a numerical
/// guard trips (bracket exhausted, Newton divergence, CFL violation, ...).
/// Invalid arguments use std::invalid_argument / std::domain_error instead.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace blowuplab

#pragma once

#include <stdexcept>
#include <string>

namespace gl3m {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define GL3M_ERROR(Name)                                                       \
  struct Name : Error {                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  }

GL3M_ERROR(NotInvertible);
GL3M_ERROR(NotCoprime);
GL3M_ERROR(DivisibilityViolation);
GL3M_ERROR(LevelViolation);
GL3M_ERROR(HypothesisViolation);
GL3M_ERROR(PoleAt);
GL3M_ERROR(OutsideStrip);
GL3M_ERROR(ContourOnPole);
GL3M_ERROR(InsufficientTable);
GL3M_ERROR(NotConverged);
GL3M_ERROR(BudgetExceeded);
GL3M_ERROR(InvalidArgument);

#undef GL3M_ERROR

}  // namespace gl3m

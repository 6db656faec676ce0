#pragma once

#include <stdexcept>
#include <string>

namespace sjfa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SJFA_DEFINE_ERROR(Name)                  \
  class Name : public Error {                    \
   public:                                       \
    explicit Name(const std::string& what)       \
        : Error(std::string(#Name ": ") + what) {} \
  };

SJFA_DEFINE_ERROR(InvalidRule)
SJFA_DEFINE_ERROR(NonFiniteTrajectory)
SJFA_DEFINE_ERROR(OutOfHorizon)
SJFA_DEFINE_ERROR(NotMonotone)
SJFA_DEFINE_ERROR(LevelOrder)
SJFA_DEFINE_ERROR(QuadratureFailure)
SJFA_DEFINE_ERROR(DomainError)
SJFA_DEFINE_ERROR(BranchGap)
SJFA_DEFINE_ERROR(ConfigError)
SJFA_DEFINE_ERROR(InvariantViolation)

#undef SJFA_DEFINE_ERROR

}  // namespace sjfa

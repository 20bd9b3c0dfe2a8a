#pragma once

#include <stdexcept>
#include <string>

namespace ellf4 {

enum class ErrorCode {
    NonConvergent,
    TruncationBudget,
    Pole,
    Domain,
    NoSeparatingCircle,
    DivergentDenominator,
    DenominatorZero,
    OutsidePolytope,
    UnknownSuite,
    Io,
};

const char* to_string(ErrorCode code);

/// All library failures throw this; code() is stable and machine readable.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ellf4

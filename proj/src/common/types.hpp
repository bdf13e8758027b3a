#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dyadlab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Error categories surfaced through the C API as status codes.
enum class ErrorCode : int {
  InvalidArgument = 1,  // malformed or out-of-contract input
  Domain = 2,           // mathematically inadmissible input (e.g. non-unit norm)
  Parse = 3,            // JSON / schema failure
  Io = 4,
  Internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, const std::string& msg, ErrorCode code = ErrorCode::InvalidArgument) {
  if (!cond) fail(code, msg);
}

}  // namespace dyadlab

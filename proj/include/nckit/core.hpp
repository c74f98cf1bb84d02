#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace nckit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Failure categories. The CLI maps each onto an exit code.
enum class ErrorKind {
  InvalidInput,
  DimensionMismatch,
  AlgebraMismatch,
  NotHermitian,
  NotPositive,
  BadPartition,
  BadExponent,
  ExponentMismatch,
  NotFaithful,
  NoncommutingSupports,
  SupportViolation,
  NotAbsolutelyContinuous,
  NoConvergence,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::ExponentMismatch: return "ExponentMismatch";
    case ErrorKind::NotFaithful: return "NotFaithful";
    case ErrorKind::NoncommutingSupports: return "NoncommutingSupports";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::NotAbsolutelyContinuous: return "NotAbsolutelyContinuous";
    case ErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical thresholds. `spec` and `supp` are relative to the norm of the
/// operand; `cluster` is absolute after dividing eigenvalues by that norm.
struct Tolerances {
  double spec = 1e-10;
  double supp = 1e-10;
  double cluster = 1e-8;
};

}  // namespace nckit

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace cpeps {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Failure categories. The CLI maps them onto exit codes (config vs numerical).
enum class ErrorKind {
  DomainError,
  SingularSystem,
  TopologyError,
  DegenerateDenominator,
  InterpolationError,
  PoleError,
  NonPhysical,
  PadeDegenerate,
  QuadratureFailure,
  InfeasibleStart,
  ObjectiveFailure,
  ShapeMismatch,
  NonUnitaryRep,
  NonGaussianInput,
  NonPositiveC,
  ParseError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::TopologyError: return "TopologyError";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::InterpolationError: return "InterpolationError";
    case ErrorKind::PoleError: return "PoleError";
    case ErrorKind::NonPhysical: return "NonPhysical";
    case ErrorKind::PadeDegenerate: return "PadeDegenerate";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::InfeasibleStart: return "InfeasibleStart";
    case ErrorKind::ObjectiveFailure: return "ObjectiveFailure";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonUnitaryRep: return "NonUnitaryRep";
    case ErrorKind::NonGaussianInput: return "NonGaussianInput";
    case ErrorKind::NonPositiveC: return "NonPositiveC";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace cpeps

/* types.hpp — shared scalar/vector aliases, error types and the Rayleigh
 * coefficient container used across the library. */

#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace perifact {

using Real = double;
using Complex = std::complex<double>;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CVec4 = Eigen::Vector4cd;
using CMat3 = Eigen::Matrix3cd;
using CMat4 = Eigen::Matrix4cd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr Real pi = 3.14159265358979323846;
inline constexpr Complex iu{0.0, 1.0};

/// Base class for all library errors; concrete types name the failure mode.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WoodAnomalyError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct AliasingError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };
struct PlaneMismatchError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct EmptySampleSetError : Error { using Error::Error; };
struct EmptySpectrumError : Error { using Error::Error; };
struct DecompositionError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct TruncatedFileError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

/// Upward (+) or downward (-) measurement side / Rayleigh branch.
enum class Sign { plus, minus };

inline int sign_value(Sign s) { return s == Sign::plus ? +1 : -1; }

/// Per-mode 4-tuples (u^+_1, u^-_1, u^+_2, u^-_2) of Rayleigh coefficients
/// over the truncated index set, stored in the canonical mode order
/// (m1 slowest, both indices running -M/2+1 .. M/2).
struct RayleighSeq4 {
  int M = 0;
  std::vector<CVec4> a;  // size M*M

  RayleighSeq4() = default;
  explicit RayleighSeq4(int M_) : M(M_), a(static_cast<size_t>(M_) * M_, CVec4::Zero()) {}
};

}  // namespace perifact

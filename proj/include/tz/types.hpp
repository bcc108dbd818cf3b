#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace tz {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

template <class T> using Vec4T = Eigen::Matrix<T, 4, 1>;
template <class T> using Mat4T = Eigen::Matrix<T, 4, 4>;

enum class ErrorKind {
  PointOutsideChart,
  CurveExitsChart,
  StepSizeUnderflow,
  InvalidFrame,
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  DegenerateImmersion,
  FrameCompletionFailure,
  OpenLoop,
  OutOfRange,
  FiberChartPole,
  RankDeficient,
  InvalidArgument,
  ConfigError,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind; every module throws this.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tz

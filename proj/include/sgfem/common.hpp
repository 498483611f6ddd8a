#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>
#include <string>

namespace sgfem {

using Point = Eigen::Vector2d;
using Vector = Eigen::VectorXd;

/// Which subdomain a point or sub-triangle belongs to. Minus is the phi < 0 side.
enum class Side { Minus, Plus };

inline const char* to_string(Side s) { return s == Side::Minus ? "minus" : "plus"; }

/// Piecewise field f(x, t) evaluated on a given side of the interface.
using SpaceTimeField = std::function<double(const Point&, double, Side)>;
using SpaceTimeGradient = std::function<Point(const Point&, double, Side)>;
/// Field defined on the interface only.
using InterfaceField = std::function<double(const Point&, double)>;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class DegenerateCut : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class InfeasibleBounds : public Error {
 public:
  using Error::Error;
};

class NonPositiveError : public Error {
 public:
  using Error::Error;
};

class IncompatibleMeshes : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgfem

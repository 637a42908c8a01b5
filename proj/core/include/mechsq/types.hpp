#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mechsq {

using Real = double;
using Complex = std::complex<double>;

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseCMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using SparseColMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

inline constexpr Real kPi = 3.14159265358979323846;

/// A parameter or argument violates its documented range.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operand dimensions disagree (operator vs. state, state vs. Fock space).
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested quantity does not exist for these inputs (e.g. no
/// dissipative steady state without damping).
class NoSteadyState : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The Fock truncation cannot represent the state to the required accuracy.
class CutoffError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integrator step fails the accuracy guard.
class StepSizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace mechsq

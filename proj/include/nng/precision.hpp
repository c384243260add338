#pragma once

// Extended-precision scalar types for the meta-space dynamics.
//
// The gravitational couplings are ~1e-16 of the trap quantum and the phases
// omega*t reach ~1e17 rad, so operators, eigensystems and propagators are
// carried in IEEE binary128. Everything else (integrals, density matrices,
// entropies) is plain double.

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include <Eigen/Core>

#include <complex>
#include <limits>

namespace nng {

using Real = boost::multiprecision::float128;
using Complex = boost::multiprecision::complex128;

using MatrixQ = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using VectorQ = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVectorQ = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline std::complex<double> to_double(const Complex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline Complex to_quad(const std::complex<double>& z) {
  return Complex(Real(z.real()), Real(z.imag()));
}

/// 2*pi to binary128 precision.
inline Real two_pi_q() {
  return boost::multiprecision::float128(
             "6.28318530717958647692528676655900576839433879875021164194988918");
}

}  // namespace nng

namespace Eigen {

// Boost 1.74 ships NumTraits for multiprecision numbers without the
// infinity()/quiet_NaN() members Eigen 3.4 requires, so define our own.
template <>
struct NumTraits<boost::multiprecision::float128>
    : GenericNumTraits<boost::multiprecision::float128> {
  using Real = boost::multiprecision::float128;
  using NonInteger = Real;
  using Nested = Real;
  using Literal = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return 1000 * epsilon(); }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return -highest(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return 33; }
};

template <>
struct NumTraits<boost::multiprecision::complex128>
    : GenericNumTraits<boost::multiprecision::complex128> {
  using Real = boost::multiprecision::float128;
  using NonInteger = boost::multiprecision::complex128;
  using Nested = NonInteger;
  using Literal = NonInteger;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 32
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return 1000 * epsilon(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return 33; }
};

template <>
struct ScalarBinaryOpTraits<boost::multiprecision::complex128,
                            boost::multiprecision::float128> {
  using ReturnType = boost::multiprecision::complex128;
};
template <>
struct ScalarBinaryOpTraits<boost::multiprecision::float128,
                            boost::multiprecision::complex128> {
  using ReturnType = boost::multiprecision::complex128;
};

}  // namespace Eigen

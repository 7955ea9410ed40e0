#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pdirac {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Integer coordinates of a lattice point with respect to a lattice basis.
/// Points of the period lattice use the basis E_j, points of the reciprocal
/// lattice use E_j^*; the pairing of the two is then the plain integer dot
/// product, so orthogonality between them is decided exactly.
using IntVec = std::vector<int>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline long long int_dot(const IntVec& a, const IntVec& b) {
  long long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long long>(a[i]) * b[i];
  return s;
}

inline bool is_zero(const IntVec& a) {
  for (int v : a)
    if (v != 0) return false;
  return true;
}

inline IntVec negated(IntVec a) {
  for (int& v : a) v = -v;
  return a;
}

inline IntVec operator+(IntVec a, const IntVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline IntVec operator-(IntVec a, const IntVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

std::string to_string(const IntVec& v);

enum class Sign { kPlus, kMinus };

/// Pointwise norm bracket [lo, hi] with lo <= true sup <= hi.
struct NormBracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled by exactly one worker; callers store results by index so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace pdirac

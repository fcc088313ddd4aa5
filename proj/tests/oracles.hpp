#pragma once

// Reference implementations written directly from definitions, with index
// arithmetic independent of the library's code paths. Tests compare library
// results against these.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// (a x b)[i*q + s, j*q + t] = a[i,j] * b[s,t] with q = dim(b).
inline Mat kron(const Mat& a, const Mat& b) {
  const auto p = a.rows();
  const auto q = b.rows();
  Mat out(p * q, p * q);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index s = 0; s < q; ++s)
        for (Eigen::Index t = 0; t < q; ++t)
          out(i * q + s, j * q + t) = a(i, j) * b(s, t);
  return out;
}

/// Reduced operator on A by summing the B index pairs.
inline Mat ptrace_keep_a(const Mat& m, Eigen::Index da, Eigen::Index db) {
  Mat out = Mat::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index s = 0; s < db; ++s)
        out(i, j) += m(i * db + s, j * db + s);
  return out;
}

/// Reduced operator on B by summing the A index pairs.
inline Mat ptrace_keep_b(const Mat& m, Eigen::Index da, Eigen::Index db) {
  Mat out = Mat::Zero(db, db);
  for (Eigen::Index s = 0; s < db; ++s)
    for (Eigen::Index t = 0; t < db; ++t)
      for (Eigen::Index i = 0; i < da; ++i)
        out(s, t) += m(i * db + s, i * db + t);
  return out;
}

/// tr(x y) as an explicit double loop.
inline Complex trace_product(const Mat& x, const Mat& y) {
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) acc += x(i, j) * y(j, i);
  return acc;
}

/// -sum lam log2 lam from an explicit eigensolve; no clamping, for use on
/// exactly valid inputs only.
inline double entropy_bits(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()[i];
    if (lam > 0.0) s -= lam * std::log2(lam);
  }
  return s;
}

// Entropy of diag(0.25, 0.75): -(1/4)log2(1/4) - (3/4)log2(3/4),
// evaluated once and frozen.
inline constexpr double kEntropyQuarterThreeQuarter = 0.8112781244591328;

}  // namespace oracle

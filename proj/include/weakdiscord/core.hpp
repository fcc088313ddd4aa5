#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace weakdiscord {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

// Validation tolerances for state matrices.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
// Eigenvalues in [-kEigClampTol, 0) are treated as eigensolver noise and
// clamped to zero; anything below -kEigClampTol marks an invalid state.
inline constexpr double kEigClampTol = 1e-8;
// Probabilities below this are treated as zero outcomes.
inline constexpr double kZeroProbTol = 1e-12;
// Largest supported Hilbert-space dimension (a qubit against a 6-qubit register).
inline constexpr Eigen::Index kMaxDim = 128;

inline Mat identity(Eigen::Index dim) { return Mat::Identity(dim, dim); }

/// Pauli matrix, indexed 1 (x), 2 (y), 3 (z).
inline const Mat& pauli(int j) {
  static const Mat sx = (Mat(2, 2) << 0, 1, 1, 0).finished();
  static const Mat sy =
      (Mat(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const Mat sz = (Mat(2, 2) << 1, 0, 0, -1).finished();
  switch (j) {
    case 1: return sx;
    case 2: return sy;
    case 3: return sz;
    default: throw std::invalid_argument("pauli: index must be 1, 2 or 3");
  }
}

inline double hermiticity_defect(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Mat& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

/// tr(x·y) without forming the product.
inline Complex trace_of_product(const Mat& x, const Mat& y) {
  return x.transpose().cwiseProduct(y).sum();
}

/// Kronecker product; block (i,j) of the result equals a(i,j)*b.
inline Mat tensor_product(const Mat& a, const Mat& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

/// A bipartite quantum state: Hermitian, unit-trace, positive-semidefinite
/// matrix on a Hilbert space of dimension dim_a * dim_b. Subsystem A is the
/// first tensor factor.
class DensityMatrix {
 public:
  /// Validates all state invariants; throws std::invalid_argument with the
  /// violated tolerance on failure.
  static DensityMatrix make(Mat m, Eigen::Index dim_a, Eigen::Index dim_b) {
    check_dims(m, dim_a, dim_b);
    double herm = hermiticity_defect(m);
    if (herm > kHermitianTol) {
      throw std::invalid_argument(
          "DensityMatrix: not Hermitian, max |m_ij - conj(m_ji)| = " +
          std::to_string(herm) + " > 1e-10");
    }
    double trace_err = std::abs(m.trace() - Complex(1.0));
    if (trace_err > kTraceTol) {
      throw std::invalid_argument("DensityMatrix: |tr - 1| = " +
                                  std::to_string(trace_err) + " > 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kEigClampTol) {
      throw std::invalid_argument(
          "DensityMatrix: not positive semidefinite, min eigenvalue = " +
          std::to_string(min_eig) + " < -1e-8");
    }
    return DensityMatrix(std::move(m), dim_a, dim_b);
  }

  /// Wraps a matrix known to satisfy the invariants by construction
  /// (constructor outputs, normalized post-measurement states). Only the
  /// dimension bookkeeping is checked.
  static DensityMatrix assume_valid(Mat m, Eigen::Index dim_a,
                                    Eigen::Index dim_b) {
    check_dims(m, dim_a, dim_b);
    return DensityMatrix(std::move(m), dim_a, dim_b);
  }

  const Mat& mat() const { return mat_; }
  Eigen::Index dim_a() const { return dim_a_; }
  Eigen::Index dim_b() const { return dim_b_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  DensityMatrix(Mat m, Eigen::Index dim_a, Eigen::Index dim_b)
      : mat_(std::move(m)), dim_a_(dim_a), dim_b_(dim_b) {}

  static void check_dims(const Mat& m, Eigen::Index dim_a,
                         Eigen::Index dim_b) {
    if (dim_a < 1 || dim_b < 1) {
      throw std::invalid_argument("DensityMatrix: subsystem dimensions must be positive");
    }
    if (m.rows() != m.cols() || m.rows() != dim_a * dim_b) {
      throw std::invalid_argument(
          "DensityMatrix: matrix dimension does not equal dimA*dimB");
    }
    if (m.rows() > kMaxDim) {
      throw std::invalid_argument("DensityMatrix: dimension exceeds 128");
    }
  }

  Mat mat_;
  Eigen::Index dim_a_;
  Eigen::Index dim_b_;
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending,
/// eigenvectors as matching columns.
struct Spectrum {
  RealVec eigenvalues;
  Mat eigenvectors;
};

inline Spectrum eigh(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eigh: matrix must be square");
  }
  if (hermiticity_defect(m) > kHermitianTol) {
    throw std::invalid_argument("eigh: matrix is not Hermitian within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver failed to converge");
  }
  Spectrum s;
  s.eigenvalues = es.eigenvalues().reverse();
  s.eigenvectors = es.eigenvectors().rowwise().reverse();
  return s;
}

enum class Subsystem { A, B };

/// Reduced state on the kept subsystem.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  const Eigen::Index da = rho.dim_a();
  const Eigen::Index db = rho.dim_b();
  const Mat& m = rho.mat();
  if (keep == Subsystem::A) {
    Mat out = Mat::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index s = 0; s < db; ++s)
          out(i, j) += m(i * db + s, j * db + s);
    return DensityMatrix::assume_valid(std::move(out), da, 1);
  }
  Mat out = Mat::Zero(db, db);
  for (Eigen::Index s = 0; s < db; ++s)
    for (Eigen::Index t = 0; t < db; ++t)
      for (Eigen::Index i = 0; i < da; ++i)
        out(s, t) += m(i * db + s, i * db + t);
  return DensityMatrix::assume_valid(std::move(out), 1, db);
}

namespace detail {

/// -sum lam*log2(lam) with 0*log0 = 0. Eigenvalues in [-1e-8, 0) are clamped
/// to zero; below that the state is invalid.
inline double entropy_bits(const RealVec& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    double lam = eigenvalues[i];
    if (lam < -kEigClampTol) {
      throw std::invalid_argument(
          "entropy: eigenvalue " + std::to_string(lam) +
          " below -1e-8 signals an invalid state");
    }
    if (lam <= 0.0) continue;
    s -= lam * std::log2(lam);
  }
  return s;
}

}  // namespace detail

/// Von Neumann entropy in bits.
inline double vn_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat(), Eigen::EigenvaluesOnly);
  return detail::entropy_bits(es.eigenvalues());
}

/// tr(rho^2); equals tr(rho^dagger rho) for Hermitian rho.
inline double purity(const DensityMatrix& rho) {
  return rho.mat().squaredNorm();
}

/// tr(O rho) for a Hermitian observable; the imaginary residue is discarded.
inline double expect(const Mat& o, const DensityMatrix& rho) {
  if (o.rows() != rho.dim() || o.cols() != rho.dim()) {
    throw std::invalid_argument("expect: observable dimension mismatch");
  }
  return trace_of_product(o, rho.mat()).real();
}

}  // namespace weakdiscord

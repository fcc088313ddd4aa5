#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "weakdiscord/core.hpp"
#include "weakdiscord/rng.hpp"

namespace weakdiscord {

/// Correlation coefficients of a Bell-diagonal two-qubit state
/// rho = (1/4)(I + sum_j c_j sigma_j x sigma_j). The coefficients must keep
/// every eigenvalue lambda_ab nonnegative; the valid region is the
/// tetrahedron spanned by (1,-1,1), (-1,1,1), (1,1,-1) and (-1,-1,-1).
struct BellDiagonalParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

namespace detail {

inline double min_bell_eigenvalue(const BellDiagonalParams& p) {
  double lo = 1.0;
  for (double sa : {1.0, -1.0}) {
    for (double sb : {1.0, -1.0}) {
      lo = std::min(lo,
                    0.25 * (1.0 + sa * p.c1 - sa * sb * p.c2 + sb * p.c3));
    }
  }
  return lo;
}

inline void check_bell_params(const BellDiagonalParams& p) {
  if (min_bell_eigenvalue(p) < -1e-12) {
    throw std::invalid_argument(
        "bell_diagonal: coefficients put an eigenvalue below -1e-12, "
        "the state is not positive semidefinite");
  }
}

}  // namespace detail

/// Eigenvalues lambda_ab = (1/4)[1 + (-1)^a c1 - (-1)^(a+b) c2 + (-1)^b c3],
/// ordered (a,b) = (0,0), (0,1), (1,0), (1,1).
inline std::array<double, 4> bell_spectrum(const BellDiagonalParams& p) {
  detail::check_bell_params(p);
  std::array<double, 4> lam{};
  int idx = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double sa = (a == 0) ? 1.0 : -1.0;
      double sb = (b == 0) ? 1.0 : -1.0;
      lam[idx++] = 0.25 * (1.0 + sa * p.c1 - sa * sb * p.c2 + sb * p.c3);
    }
  }
  return lam;
}

inline DensityMatrix bell_diagonal(const BellDiagonalParams& p) {
  detail::check_bell_params(p);
  Mat m = 0.25 * identity(4);
  m += 0.25 * p.c1 * tensor_product(pauli(1), pauli(1));
  m += 0.25 * p.c2 * tensor_product(pauli(2), pauli(2));
  m += 0.25 * p.c3 * tensor_product(pauli(3), pauli(3));
  return DensityMatrix::assume_valid(std::move(m), 2, 2);
}

/// Closed forms for Bell-diagonal correlations: mutual information from the
/// state eigenvalues, max_j = (1/2)[(1+c)log2(1+c) + (1-c)log2(1-c)] with
/// c = max_j |c_j|, discord as their difference. axis is the index (1..3) of
/// the dominant coefficient; ties resolve to the smallest index.
struct BellAnalytics {
  double mutual_info = 0.0;
  double max_j = 0.0;
  double discord = 0.0;
  int axis = 1;
};

inline BellAnalytics bell_analytics(const BellDiagonalParams& p) {
  auto lam = bell_spectrum(p);
  BellAnalytics res;
  for (double l : lam) {
    if (l > 0.0) res.mutual_info += l * std::log2(4.0 * l);
  }
  std::array<double, 3> cs = {std::abs(p.c1), std::abs(p.c2), std::abs(p.c3)};
  double c = cs[0];
  for (int j = 1; j < 3; ++j) {
    if (cs[j] > c) {
      c = cs[j];
      res.axis = j + 1;
    }
  }
  auto half_term = [](double x) { return x > 0.0 ? 0.5 * x * std::log2(x) : 0.0; };
  res.max_j = half_term(1.0 + c) + half_term(1.0 - c);
  res.discord = res.mutual_info - res.max_j;
  return res;
}

/// Bell-diagonal state with c1 = c2 = c3 = c; positive iff 3|c| <= 1.
inline DensityMatrix werner(double c) {
  if (3.0 * std::abs(c) > 1.0 + 1e-12) {
    throw std::invalid_argument("werner: 3|c| must not exceed 1");
  }
  return bell_diagonal({c, c, c});
}

/// Haar-distributed unitary: QR of a complex standard-Gaussian matrix with
/// each column rephased by R_jj/|R_jj| so the factorization is the unique
/// one with positive diagonal.
inline Mat haar_unitary(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) {
    throw std::invalid_argument("haar_unitary: dimension must be positive");
  }
  Rng rng(seed);
  Mat g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    Complex rjj = r(j, j);
    double mod = std::abs(rjj);
    if (mod > 0.0) q.col(j) *= rjj / mod;
  }
  return q;
}

/// Recipe for one random two-qubit state: target rank and the stream seed
/// that makes the draw reproducible bit-for-bit.
struct RandomStateSpec {
  int rank = 4;
  std::uint64_t seed = 0;
};

/// Two-qubit state of exactly the requested rank: `rank` eigenvalues drawn
/// i.i.d. uniform on (0,1] and normalized to unit sum, the rest zero, then
/// conjugated by a Haar unitary.
inline DensityMatrix random_mixed(const RandomStateSpec& spec) {
  if (spec.rank < 1 || spec.rank > 4) {
    throw std::invalid_argument("random_mixed: rank must lie in 1..4");
  }
  Rng rng(spec.seed);
  Eigen::Vector4d diag = Eigen::Vector4d::Zero();
  double sum = 0.0;
  for (int k = 0; k < spec.rank; ++k) {
    diag[k] = rng.uniform01();
    sum += diag[k];
  }
  diag /= sum;
  Mat u = haar_unitary(4, rng.next_u64());
  Mat m = u * diag.cast<Complex>().asDiagonal() * u.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix::assume_valid(std::move(m), 2, 2);
}

/// Rank-1 state |v><v| from a Haar-random unit vector on dimA * dimB.
inline DensityMatrix random_pure(Eigen::Index dim_a, Eigen::Index dim_b,
                                 std::uint64_t seed) {
  if (dim_a < 1 || dim_b < 1) {
    throw std::invalid_argument("random_pure: dimensions must be positive");
  }
  Rng rng(seed);
  Eigen::VectorXcd v(dim_a * dim_b);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = Complex(rng.normal(), rng.normal());
  v.normalize();
  Mat m = v * v.adjoint();
  return DensityMatrix::assume_valid(std::move(m), dim_a, dim_b);
}

/// State of the one-clean-qubit circuit after the controlled unitary:
///   (1/2^(n+1)) [ |0><0| x I + |1><1| x I + |0><1| x U^dag + |1><0| x U ],
/// with the clean qubit as subsystem A and the n-qubit register as B.
/// Satisfies rho^2 = rho / 2^n, so its purity is exactly 2^-n.
inline DensityMatrix dqc1(const Mat& u) {
  Eigen::Index n_b = u.rows();
  if (u.rows() != u.cols()) {
    throw std::invalid_argument("dqc1: unitary must be square");
  }
  if (n_b < 2 || n_b > 64 || (n_b & (n_b - 1)) != 0) {
    throw std::invalid_argument(
        "dqc1: register dimension must be a power of two in [2, 64]");
  }
  if ((u.adjoint() * u - identity(n_b)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("dqc1: input is not unitary within 1e-10");
  }
  Mat m = Mat::Zero(2 * n_b, 2 * n_b);
  m.block(0, 0, n_b, n_b) = identity(n_b);
  m.block(n_b, n_b, n_b, n_b) = identity(n_b);
  m.block(0, n_b, n_b, n_b) = u.adjoint();
  m.block(n_b, 0, n_b, n_b) = u;
  m /= static_cast<double>(2 * n_b);
  return DensityMatrix::assume_valid(std::move(m), 2, n_b);
}

}  // namespace weakdiscord

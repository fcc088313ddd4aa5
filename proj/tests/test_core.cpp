#include <catch2/catch_amalgamated.hpp>

#include "weakdiscord/core.hpp"
#include "weakdiscord/rng.hpp"

#include "oracles.hpp"

using namespace weakdiscord;

namespace {

Mat random_complex(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

/// Full-rank random state from a Gram matrix G G^dag / tr.
DensityMatrix gram_state(Eigen::Index dim_a, Eigen::Index dim_b,
                         std::uint64_t seed) {
  Mat g = random_complex(dim_a * dim_b, dim_a * dim_b, seed);
  Mat m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::make(std::move(m), dim_a, dim_b);
}

}  // namespace

TEST_CASE("tensor product of identities is the identity") {
  REQUIRE((tensor_product(identity(2), identity(2)) - identity(4))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("tensor product with diagonal factors") {
  Mat m = tensor_product(pauli(3), identity(2));
  Mat want = Eigen::Vector4cd(1, 1, -1, -1).asDiagonal();
  REQUIRE((m - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tensor product matches the index formula") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    Mat a = random_complex(2, 2, seed);
    Mat b = random_complex(2, 2, seed + 100);
    REQUIRE((tensor_product(a, b) - oracle::kron(a, b)).cwiseAbs().maxCoeff() <
            1e-14);
  }
}

TEST_CASE("density matrix validation rejects bad inputs") {
  Mat ok = 0.25 * identity(4);
  REQUIRE_NOTHROW(DensityMatrix::make(ok, 2, 2));

  Mat nonherm = ok;
  nonherm(0, 1) = Complex(0.1, 0.0);
  REQUIRE_THROWS_AS(DensityMatrix::make(nonherm, 2, 2), std::invalid_argument);

  REQUIRE_THROWS_AS(DensityMatrix::make(0.5 * identity(4), 2, 2),
                    std::invalid_argument);

  Mat negative = ok;
  negative(0, 0) = -0.05;
  negative(1, 1) = 0.55;
  REQUIRE_THROWS_AS(DensityMatrix::make(negative, 2, 2),
                    std::invalid_argument);

  REQUIRE_THROWS_AS(DensityMatrix::make(ok, 2, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(DensityMatrix::make(identity(256) / 256.0, 2, 128),
                    std::invalid_argument);
}

TEST_CASE("validation failures name the violated tolerance") {
  Mat nonherm = 0.25 * identity(4);
  nonherm(0, 1) = Complex(0.1, 0.0);
  try {
    DensityMatrix::make(nonherm, 2, 2);
    FAIL("expected a validation error");
  } catch (const std::invalid_argument& e) {
    REQUIRE(std::string(e.what()).find("1e-10") != std::string::npos);
  }
}

TEST_CASE("partial trace of a product state recovers the factors") {
  Mat rho_a = (Mat(2, 2) << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3)
                  .finished();
  Mat rho_b = (Mat(2, 2) << 0.4, Complex(0.0, -0.1), Complex(0.0, 0.1), 0.6)
                  .finished();
  DensityMatrix rho =
      DensityMatrix::make(tensor_product(rho_a, rho_b), 2, 2);
  REQUIRE((partial_trace(rho, Subsystem::A).mat() - rho_a)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  REQUIRE((partial_trace(rho, Subsystem::B).mat() - rho_b)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("partial trace of a maximally entangled state is maximally mixed") {
  Eigen::Vector4cd v(1, 0, 0, 1);
  v /= std::sqrt(2.0);
  DensityMatrix bell = DensityMatrix::make(v * v.adjoint(), 2, 2);
  REQUIRE((partial_trace(bell, Subsystem::A).mat() - 0.5 * identity(2))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("partial trace matches the index-summation oracle") {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    DensityMatrix rho = gram_state(2, 3, seed);
    REQUIRE((partial_trace(rho, Subsystem::A).mat() -
             oracle::ptrace_keep_a(rho.mat(), 2, 3))
                .cwiseAbs()
                .maxCoeff() < 1e-13);
    REQUIRE((partial_trace(rho, Subsystem::B).mat() -
             oracle::ptrace_keep_b(rho.mat(), 2, 3))
                .cwiseAbs()
                .maxCoeff() < 1e-13);
    REQUIRE(std::abs(partial_trace(rho, Subsystem::A).mat().trace().real() -
                     1.0) < 1e-10);
  }
}

TEST_CASE("eigh returns a descending spectrum that reconstructs the input") {
  Spectrum s = eigh(Eigen::Vector2cd(0.25, 0.75).asDiagonal());
  REQUIRE(s.eigenvalues[0] == Catch::Approx(0.75).margin(1e-14));
  REQUIRE(s.eigenvalues[1] == Catch::Approx(0.25).margin(1e-14));

  Spectrum sx = eigh(pauli(1));
  REQUIRE(sx.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(sx.eigenvalues[1] == Catch::Approx(-1.0).margin(1e-12));

  Mat g = random_complex(6, 6, 31);
  Mat herm = g + g.adjoint();
  Spectrum sp = eigh(herm);
  Mat rebuilt = sp.eigenvectors *
                sp.eigenvalues.cast<Complex>().asDiagonal() *
                sp.eigenvectors.adjoint();
  REQUIRE((herm - rebuilt).cwiseAbs().maxCoeff() < 1e-9);
  for (Eigen::Index i = 1; i < sp.eigenvalues.size(); ++i) {
    REQUIRE(sp.eigenvalues[i - 1] >= sp.eigenvalues[i]);
  }
}

TEST_CASE("eigh rejects non-Hermitian input") {
  Mat m = random_complex(3, 3, 41);
  REQUIRE_THROWS_AS(eigh(m), std::invalid_argument);
}

TEST_CASE("state spectra sum to one") {
  for (std::uint64_t seed : {51u, 52u}) {
    DensityMatrix rho = gram_state(2, 2, seed);
    Spectrum s = eigh(rho.mat());
    REQUIRE(std::abs(s.eigenvalues.sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("entropy of the maximally mixed qubit is one bit") {
  DensityMatrix rho = DensityMatrix::make(0.5 * identity(2), 1, 2);
  REQUIRE(vn_entropy(rho) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("pure states have zero entropy") {
  Eigen::Vector4cd v(1, 0, 0, 1);
  v /= std::sqrt(2.0);
  DensityMatrix bell = DensityMatrix::make(v * v.adjoint(), 2, 2);
  REQUIRE(vn_entropy(bell) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("entropy of an unbalanced qubit matches the frozen value") {
  DensityMatrix rho =
      DensityMatrix::make(Eigen::Vector2cd(0.25, 0.75).asDiagonal(), 1, 2);
  REQUIRE(vn_entropy(rho) ==
          Catch::Approx(oracle::kEntropyQuarterThreeQuarter).margin(1e-12));
}

TEST_CASE("entropy is invariant under a unitary change of basis") {
  DensityMatrix rho = gram_state(2, 2, 61);
  Mat g = random_complex(4, 4, 62);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat u = qr.householderQ();
  DensityMatrix rotated =
      DensityMatrix::make(u * rho.mat() * u.adjoint(), 2, 2);
  REQUIRE(std::abs(vn_entropy(rotated) - vn_entropy(rho)) < 1e-9);
  REQUIRE(vn_entropy(rho) >= 0.0);
  REQUIRE(vn_entropy(rho) <= 2.0);
}

TEST_CASE("purity spans pure to maximally mixed") {
  Eigen::Vector4cd v(0, 1, 0, 0);
  DensityMatrix pure = DensityMatrix::make(v * v.adjoint(), 2, 2);
  REQUIRE(purity(pure) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(vn_entropy(pure) <= 1e-9);

  DensityMatrix mixed = DensityMatrix::make(0.25 * identity(4), 2, 2);
  REQUIRE(purity(mixed) == Catch::Approx(0.25).margin(1e-12));

  DensityMatrix rho = gram_state(2, 2, 71);
  REQUIRE(purity(rho) >= 0.25 - 1e-12);
  REQUIRE(purity(rho) <= 1.0 + 1e-12);
}

TEST_CASE("expectation of the identity is the trace") {
  DensityMatrix rho = gram_state(2, 2, 81);
  REQUIRE(expect(identity(4), rho) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("expectation matches the naive trace oracle and is linear") {
  DensityMatrix rho = gram_state(2, 2, 91);
  Mat g1 = random_complex(4, 4, 92);
  Mat g2 = random_complex(4, 4, 93);
  Mat o1 = g1 + g1.adjoint();
  Mat o2 = g2 + g2.adjoint();
  REQUIRE(expect(o1, rho) ==
          Catch::Approx(oracle::trace_product(o1, rho.mat()).real())
              .margin(1e-12));
  double lhs = expect(2.0 * o1 + 3.0 * o2, rho);
  double rhs = 2.0 * expect(o1, rho) + 3.0 * expect(o2, rho);
  REQUIRE(lhs == Catch::Approx(rhs).margin(1e-10));
}

TEST_CASE("expectation rejects mismatched dimensions") {
  DensityMatrix rho = gram_state(2, 2, 95);
  REQUIRE_THROWS_AS(expect(identity(2), rho), std::invalid_argument);
}

TEST_CASE("trace_of_product agrees with forming the product") {
  Mat x = random_complex(4, 4, 96);
  Mat y = random_complex(4, 4, 97);
  Complex direct = (x * y).trace();
  REQUIRE(std::abs(trace_of_product(x, y) - direct) < 1e-12);
}

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "weakdiscord/core.hpp"
#include "weakdiscord/correlations.hpp"

namespace weakdiscord {

/// Post-selection operator P_f = (1 - alpha) rho + alpha I with its
/// strength parameter. P_f and its complement I - P_f = (1 - alpha)(I - rho)
/// form a two-outcome POVM on the joint space.
struct PostSelection {
  double alpha = 1.0;
  Mat pf;
};

inline PostSelection make_post_selection(const DensityMatrix& rho,
                                         double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("make_post_selection: alpha must lie in [0, 1]");
  }
  Mat pf = (1.0 - alpha) * rho.mat() + alpha * identity(rho.dim());
  Eigen::SelfAdjointEigenSolver<Mat> es(pf, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigClampTol) {
    throw std::invalid_argument("make_post_selection: P_f not positive semidefinite");
  }
  es.compute(identity(rho.dim()) - pf, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigClampTol) {
    throw std::invalid_argument(
        "make_post_selection: complement I - P_f not positive semidefinite");
  }
  return {alpha, std::move(pf)};
}

/// Weak value tr(P_f O rho) / tr(P_f rho); the imaginary residue of the
/// ratio is discarded. The trace-orthogonal case tr(P_f rho) ~ 0 has no
/// finite weak value and is rejected.
inline double weak_expect(const Mat& o, const DensityMatrix& rho,
                          const PostSelection& ps) {
  if (o.rows() != rho.dim() || o.cols() != rho.dim() ||
      ps.pf.rows() != rho.dim()) {
    throw std::invalid_argument("weak_expect: dimension mismatch");
  }
  Complex den = trace_of_product(ps.pf, rho.mat());
  if (den.real() <= kZeroProbTol) {
    throw std::runtime_error(
        "weak_expect: post-selection is trace-orthogonal to the state");
  }
  Complex num = (ps.pf * o * rho.mat()).trace();
  return (num / den).real();
}

/// Weak value of O = (P_+ - P_-) tensor I for the measurement axis m, via
/// the closed form
///   [(1 - alpha) tr(O rho^2) + alpha <O>] / [(1 - alpha) tr(rho^2) + alpha].
/// The denominator is positive for every valid state and alpha in [0, 1].
inline double qubit_weak_value(const DensityMatrix& rho,
                               const QubitMeasurement& m, double alpha) {
  if (rho.dim_a() != 2) {
    throw std::invalid_argument("qubit_weak_value: subsystem A must be a qubit");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("qubit_weak_value: alpha must lie in [0, 1]");
  }
  auto projs = measurement_projectors(m);
  Mat o = tensor_product(projs[0] - projs[1], identity(rho.dim_b()));
  double tr_o_rho2 = trace_of_product(o * rho.mat(), rho.mat()).real();
  double mean = expect(o, rho);
  return ((1.0 - alpha) * tr_o_rho2 + alpha * mean) /
         ((1.0 - alpha) * purity(rho) + alpha);
}

/// True when tr(O rho^2) = <O> tr(rho^2) within 1e-10, in which case weak
/// and projective statistics of O agree for every alpha.
inline bool coincidence_condition(const DensityMatrix& rho, const Mat& o) {
  if (o.rows() != rho.dim() || o.cols() != rho.dim()) {
    throw std::invalid_argument("coincidence_condition: dimension mismatch");
  }
  double tr_o_rho2 = trace_of_product(o * rho.mat(), rho.mat()).real();
  return std::abs(tr_o_rho2 - expect(o, rho) * purity(rho)) <= 1e-10;
}

/// Nondegenerate observable on subsystem A as a projector resolution:
/// O_A = sum_k a_k P_k with orthogonal projectors summing to the identity.
struct WeakObservable {
  std::vector<Mat> projectors;
  std::vector<double> eigenvalues;
};

/// Validates the projector resolution and assigns eigenvalues: +1/-1 for a
/// qubit, 0..d-1 otherwise (any distinct values keep the moment system
/// invertible).
inline WeakObservable make_weak_observable(std::vector<Mat> projectors) {
  const auto d = static_cast<Eigen::Index>(projectors.size());
  if (d < 2) {
    throw std::invalid_argument("make_weak_observable: need at least two projectors");
  }
  Mat sum = Mat::Zero(d, d);
  for (const Mat& p : projectors) {
    if (p.rows() != d || p.cols() != d) {
      throw std::invalid_argument(
          "make_weak_observable: projector dimension must match their count");
    }
    sum += p;
  }
  if ((sum - identity(d)).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument(
        "make_weak_observable: projectors do not sum to the identity");
  }
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    for (std::size_t k = 0; k < projectors.size(); ++k) {
      Mat prod = projectors[j] * projectors[k];
      Mat want = (j == k) ? projectors[k] : Mat::Zero(d, d);
      if ((prod - want).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument(
            "make_weak_observable: projectors are not orthogonal");
      }
    }
  }
  std::vector<double> eigenvalues(projectors.size());
  if (projectors.size() == 2) {
    eigenvalues = {1.0, -1.0};
  } else {
    for (std::size_t k = 0; k < projectors.size(); ++k)
      eigenvalues[k] = static_cast<double>(k);
  }
  return {std::move(projectors), std::move(eigenvalues)};
}

/// Outcome probabilities estimated from weak values. Values outside
/// [-1e-9, 1 + 1e-9] mark the estimate unusable (possible for dimA > 2) and
/// are reported as-is, never clamped.
struct WeakProbabilities {
  std::vector<double> values;
  bool valid = true;
};

/// Inverts the moment system <O^n>_w = sum_k a_k^n p_k^w, n = 0..d-1.
/// For a qubit with eigenvalues +1/-1 the closed form
/// p_+- = (1 +- <O>_w)/2 is used instead of the linear solve.
inline WeakProbabilities weak_probabilities(const DensityMatrix& rho,
                                            const WeakObservable& wo,
                                            const PostSelection& ps) {
  const auto d = static_cast<Eigen::Index>(wo.projectors.size());
  if (d != rho.dim_a()) {
    throw std::invalid_argument(
        "weak_probabilities: observable does not act on subsystem A");
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      if (wo.eigenvalues[j] == wo.eigenvalues[k]) {
        throw std::invalid_argument(
            "weak_probabilities: eigenvalues must be pairwise distinct");
      }
    }
  }

  WeakProbabilities out;
  Mat eye_b = identity(rho.dim_b());
  if (d == 2 && wo.eigenvalues[0] == 1.0 && wo.eigenvalues[1] == -1.0) {
    Mat o = tensor_product(wo.projectors[0] - wo.projectors[1], eye_b);
    double w = weak_expect(o, rho, ps);
    out.values = {0.5 * (1.0 + w), 0.5 * (1.0 - w)};
  } else {
    Eigen::MatrixXd vand(d, d);
    Eigen::VectorXd moments(d);
    for (Eigen::Index n = 0; n < d; ++n) {
      Mat o_n = Mat::Zero(rho.dim(), rho.dim());
      for (Eigen::Index k = 0; k < d; ++k) {
        vand(n, k) = std::pow(wo.eigenvalues[k], static_cast<double>(n));
        o_n += vand(n, k) * tensor_product(wo.projectors[k], eye_b);
      }
      moments[n] = weak_expect(o_n, rho, ps);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        vand, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) / svd.singularValues()(d - 1);
    if (!(cond <= 1e12)) {
      throw std::runtime_error(
          "weak_probabilities: moment system condition estimate exceeds 1e12");
    }
    Eigen::VectorXd p = svd.solve(moments);
    out.values.assign(p.data(), p.data() + d);
  }
  for (double p : out.values) {
    if (p < -1e-9 || p > 1.0 + 1e-9) out.valid = false;
  }
  return out;
}

/// Weak quantum discord: S(A) - S(AB) + sum_k p_k^w S(B | outcome k). The
/// measurement basis and conditioned entropies are those of the projective
/// optimum; only the probabilities are replaced by weak-value estimates.
struct WeakDiscordResult {
  std::array<double, 2> weak_probs{};
  double weak_discord = 0.0;
  bool coincides = false;
  bool prob_valid = true;
};

/// Evaluates weak discord reusing an already-optimized DiscordResult; the
/// basis is never re-optimized over alpha.
inline WeakDiscordResult weak_discord_with(const DensityMatrix& rho,
                                           const DiscordResult& disc,
                                           double alpha) {
  if (rho.dim_a() != 2) {
    throw std::invalid_argument("weak_discord: subsystem A must be a qubit");
  }
  double w = qubit_weak_value(rho, disc.optimal, alpha);
  WeakDiscordResult res;
  res.weak_probs = {0.5 * (1.0 + w), 0.5 * (1.0 - w)};
  for (double p : res.weak_probs) {
    if (p < -1e-9 || p > 1.0 + 1e-9) res.prob_valid = false;
  }
  auto projs = measurement_projectors(disc.optimal);
  res.coincides = coincidence_condition(
      rho, tensor_product(projs[0] - projs[1], identity(rho.dim_b())));
  if (!res.prob_valid) {
    res.weak_discord = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  double s_a = vn_entropy(partial_trace(rho, Subsystem::A));
  double s_ab = vn_entropy(rho);
  res.weak_discord = s_a - s_ab +
                     res.weak_probs[0] * disc.cond_entropies[0] +
                     res.weak_probs[1] * disc.cond_entropies[1];
  return res;
}

inline WeakDiscordResult weak_discord(const DensityMatrix& rho, double alpha) {
  return weak_discord_with(rho, discord(rho), alpha);
}

/// Discord variant that conditions on the post-measurement state
/// rho' = P_f rho P_f / tr(P_f rho P_f): returns I(A:B) - [S(rho_B) -
/// S(rho'_B)]. Kept for comparison; weak_discord is the default notion.
inline double alternative_weak_discord(const DensityMatrix& rho,
                                       double alpha) {
  PostSelection ps = make_post_selection(rho, alpha);
  Mat updated = ps.pf * rho.mat() * ps.pf;
  double norm = updated.trace().real();
  if (norm <= kZeroProbTol) {
    throw std::runtime_error(
        "alternative_weak_discord: post-measurement state has vanishing norm");
  }
  updated /= norm;
  updated = 0.5 * (updated + updated.adjoint()).eval();
  DensityMatrix rho_prime =
      DensityMatrix::assume_valid(std::move(updated), rho.dim_a(), rho.dim_b());
  double s_b = vn_entropy(partial_trace(rho, Subsystem::B));
  double s_b_prime = vn_entropy(partial_trace(rho_prime, Subsystem::B));
  return mutual_information(rho) - (s_b - s_b_prime);
}

/// Probability that the post-selection fires: p_f = tr(P_f rho P_f).
inline double disturbance_probability(const DensityMatrix& rho, double alpha) {
  PostSelection ps = make_post_selection(rho, alpha);
  return (ps.pf * rho.mat() * ps.pf).trace().real();
}

}  // namespace weakdiscord

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "weakdiscord/core.hpp"

namespace weakdiscord {

/// Projective measurement direction on qubit A, as Bloch-sphere angles.
struct QubitMeasurement {
  double theta = 0.0;
  double phi = 0.0;
};

/// Maps angles onto theta in [0, pi], phi in [0, 2*pi). Angles beyond the
/// theta range are reflected through the pole (theta -> 2*pi - theta flips
/// phi by pi, describing the same axis).
inline QubitMeasurement canonical(QubitMeasurement m) {
  double two_pi = 2.0 * kPi;
  double theta = std::fmod(m.theta, two_pi);
  if (theta < 0.0) theta += two_pi;
  double phi = m.phi;
  if (theta > kPi) {
    theta = two_pi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, two_pi);
  if (phi < 0.0) phi += two_pi;
  return {theta, phi};
}

inline Eigen::Vector3d bloch_axis(const QubitMeasurement& m) {
  return {std::sin(m.theta) * std::cos(m.phi),
          std::sin(m.theta) * std::sin(m.phi), std::cos(m.theta)};
}

/// Orthogonal projectors (1 +- n.sigma)/2 onto the axis eigenstates.
inline std::array<Mat, 2> measurement_projectors(const QubitMeasurement& m) {
  Eigen::Vector3d n = bloch_axis(m);
  Mat ns = n[0] * pauli(1) + n[1] * pauli(2) + n[2] * pauli(3);
  return {0.5 * (identity(2) + ns), 0.5 * (identity(2) - ns)};
}

enum class Outcome { plus, minus };

/// One branch of a projective measurement on A: outcome probability and the
/// normalized conditioned state of B. The state is absent when the outcome
/// probability is below 1e-12.
struct MeasurementOutcome {
  double prob = 0.0;
  std::optional<DensityMatrix> state;
};

inline MeasurementOutcome measurement_outcome(const DensityMatrix& rho,
                                              const QubitMeasurement& m,
                                              Outcome which) {
  if (rho.dim_a() != 2) {
    throw std::invalid_argument("measurement_outcome: subsystem A must be a qubit");
  }
  auto projs = measurement_projectors(m);
  const Mat& proj = projs[which == Outcome::plus ? 0 : 1];
  Mat joint = tensor_product(proj, identity(rho.dim_b()));
  Mat selected = joint * rho.mat() * joint;
  double p = selected.trace().real();
  if (p < kZeroProbTol) return {p, std::nullopt};
  DensityMatrix cond = partial_trace(
      DensityMatrix::assume_valid(selected / p, rho.dim_a(), rho.dim_b()),
      Subsystem::B);
  return {p, std::move(cond)};
}

/// S(A) + S(B) - S(AB), in bits.
inline double mutual_information(const DensityMatrix& rho) {
  return vn_entropy(partial_trace(rho, Subsystem::A)) +
         vn_entropy(partial_trace(rho, Subsystem::B)) - vn_entropy(rho);
}

/// sum_k p_k S(B | outcome k) for a projective measurement on A.
inline double conditional_entropy(const DensityMatrix& rho,
                                  const QubitMeasurement& m) {
  double s = 0.0;
  for (Outcome o : {Outcome::plus, Outcome::minus}) {
    MeasurementOutcome out = measurement_outcome(rho, m, o);
    if (out.state) s += out.prob * vn_entropy(*out.state);
  }
  return s;
}

namespace detail {

/// Evaluates J(theta, phi) = S(B) - sum_k p_k S(B|k) for a qubit on A.
///
/// The joint state decomposes into dimB x dimB blocks B_ij = <i|_A rho |j>_A,
/// and the unnormalized conditioned operators are
///   W_+- = [(1 +- nz) B00 +- (nx + i ny) B01 +- (nx - i ny) B10
///           + (1 -+ nz) B11] / 2,
/// with p_+- = Re tr W_+-. Only 2x2 or dimB x dimB eigenproblems remain, so a
/// dense grid over the sphere stays cheap even for dimB = 64.
class JEvaluator {
 public:
  explicit JEvaluator(const DensityMatrix& rho)
      : db_(rho.dim_b()),
        b00_(rho.mat().block(0, 0, db_, db_)),
        b01_(rho.mat().block(0, db_, db_, db_)),
        b10_(rho.mat().block(db_, 0, db_, db_)),
        b11_(rho.mat().block(db_, db_, db_, db_)),
        wp_(db_, db_),
        wm_(db_, db_),
        s_b_(vn_entropy(partial_trace(rho, Subsystem::B))) {
    if (rho.dim_a() != 2) {
      throw std::invalid_argument("JEvaluator: subsystem A must be a qubit");
    }
  }

  double s_b() const { return s_b_; }

  double operator()(double theta, double phi) {
    double nx = std::sin(theta) * std::cos(phi);
    double ny = std::sin(theta) * std::sin(phi);
    double nz = std::cos(theta);
    Complex c(nx, ny);
    Complex cbar(nx, -ny);
    wp_ = 0.5 * ((1.0 + nz) * b00_ + c * b01_ + cbar * b10_ +
                 (1.0 - nz) * b11_);
    wm_ = 0.5 * ((1.0 - nz) * b00_ - c * b01_ - cbar * b10_ +
                 (1.0 + nz) * b11_);
    return s_b_ - outcome_term(wp_) - outcome_term(wm_);
  }

 private:
  /// p * S(W/p) for an unnormalized branch operator W with p = tr W.
  double outcome_term(const Mat& w) {
    double p = w.trace().real();
    if (p < kZeroProbTol) return 0.0;
    if (db_ == 2) {
      // Closed-form eigenvalues of a Hermitian 2x2.
      double a = w(0, 0).real();
      double d = w(1, 1).real();
      double mid = 0.5 * (a + d);
      double h = 0.5 * (a - d);
      double r = std::sqrt(h * h + std::norm(w(0, 1)));
      scratch2_[0] = (mid + r) / p;
      scratch2_[1] = (mid - r) / p;
      double s = 0.0;
      for (double lam : scratch2_) {
        if (lam <= 0.0) continue;
        s -= lam * std::log2(lam);
      }
      return p * s;
    }
    solver_.compute(w, Eigen::EigenvaluesOnly);
    return p * entropy_bits(solver_.eigenvalues() / p);
  }

  Eigen::Index db_;
  Mat b00_, b01_, b10_, b11_;
  Mat wp_, wm_;
  double s_b_;
  std::array<double, 2> scratch2_{};
  Eigen::SelfAdjointEigenSolver<Mat> solver_;
};

/// Nelder-Mead maximizer for a 2-D objective; standard reflection /
/// expansion / contraction / shrink coefficients. Terminates when the value
/// spread across the simplex falls below ftol.
template <typename F>
std::pair<Eigen::Vector2d, double> nelder_mead_max_2d(
    F&& f, Eigen::Vector2d start, Eigen::Vector2d step, double ftol,
    int max_iter) {
  constexpr double alpha = 1.0, gamma = 2.0, beta = 0.5, sigma = 0.5;
  std::array<Eigen::Vector2d, 3> pts = {
      start, start + Eigen::Vector2d(step[0], 0.0),
      start + Eigen::Vector2d(0.0, step[1])};
  std::array<double, 3> vals;
  for (int i = 0; i < 3; ++i) vals[i] = f(pts[i][0], pts[i][1]);

  auto order = [&] {
    // vals[idx[0]] best (largest), vals[idx[2]] worst.
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return vals[a] > vals[b]; });
    return idx;
  };

  for (int it = 0; it < max_iter; ++it) {
    auto idx = order();
    if (vals[idx[0]] - vals[idx[2]] < ftol) break;
    Eigen::Vector2d centroid = 0.5 * (pts[idx[0]] + pts[idx[1]]);
    Eigen::Vector2d worst = pts[idx[2]];

    Eigen::Vector2d refl = centroid + alpha * (centroid - worst);
    double f_refl = f(refl[0], refl[1]);
    if (f_refl > vals[idx[0]]) {
      Eigen::Vector2d expa = centroid + gamma * (refl - centroid);
      double f_expa = f(expa[0], expa[1]);
      if (f_expa > f_refl) {
        pts[idx[2]] = expa;
        vals[idx[2]] = f_expa;
      } else {
        pts[idx[2]] = refl;
        vals[idx[2]] = f_refl;
      }
      continue;
    }
    if (f_refl > vals[idx[1]]) {
      pts[idx[2]] = refl;
      vals[idx[2]] = f_refl;
      continue;
    }
    Eigen::Vector2d cont = centroid + beta * (worst - centroid);
    double f_cont = f(cont[0], cont[1]);
    if (f_cont > vals[idx[2]]) {
      pts[idx[2]] = cont;
      vals[idx[2]] = f_cont;
      continue;
    }
    for (int i : {idx[1], idx[2]}) {
      pts[i] = pts[idx[0]] + sigma * (pts[i] - pts[idx[0]]);
      vals[i] = f(pts[i][0], pts[i][1]);
    }
  }
  auto idx = order();
  return {pts[idx[0]], vals[idx[0]]};
}

}  // namespace detail

/// Output of the discord optimization. The classical correlation max_j is
/// maximized over projective qubit measurements on A; probs and
/// cond_entropies describe the two branches of the optimal measurement.
/// discord equals mutual_info - max_j.
struct DiscordResult {
  double mutual_info = 0.0;
  double max_j = 0.0;
  double discord = 0.0;
  QubitMeasurement optimal;
  std::array<double, 2> probs{};
  std::array<double, 2> cond_entropies{};
};

/// Quantum discord with measurements on subsystem A (a qubit).
///
/// The classical correlation J(theta, phi) is scanned on a 64 x 128 grid over
/// the hemisphere theta in [0, pi/2] (antipodal axes give identical J), and
/// the five best grid points seed Nelder-Mead refinements with value
/// tolerance 1e-10. Ties below 1e-12 in J resolve toward smaller theta, then
/// smaller phi. A discord within 1e-9 below zero is optimizer slack and is
/// clamped to exactly zero.
inline DiscordResult discord(const DensityMatrix& rho) {
  if (rho.dim_a() != 2) {
    throw std::invalid_argument("discord: subsystem A must be a qubit");
  }
  detail::JEvaluator j(rho);

  constexpr int n_theta = 64;
  constexpr int n_phi = 128;
  struct GridPoint {
    double j, theta, phi;
  };
  std::vector<GridPoint> grid;
  grid.reserve(n_theta * n_phi);
  for (int it = 0; it < n_theta; ++it) {
    double theta = (kPi / 2.0) * it / (n_theta - 1);
    for (int ip = 0; ip < n_phi; ++ip) {
      double phi = 2.0 * kPi * ip / n_phi;
      grid.push_back({j(theta, phi), theta, phi});
    }
  }
  auto better = [](const GridPoint& a, const GridPoint& b) {
    if (a.j != b.j) return a.j > b.j;
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.phi < b.phi;
  };
  std::partial_sort(grid.begin(), grid.begin() + 5, grid.end(), better);

  double theta_step = 0.5 * (kPi / 2.0) / (n_theta - 1);
  double phi_step = 0.5 * (2.0 * kPi) / n_phi;
  GridPoint best{-1.0, 0.0, 0.0};
  for (int k = 0; k < 5; ++k) {
    auto [pt, val] = detail::nelder_mead_max_2d(
        j, {grid[k].theta, grid[k].phi}, {theta_step, phi_step}, 1e-10, 300);
    QubitMeasurement cand = canonical({pt[0], pt[1]});
    GridPoint refined{val, cand.theta, cand.phi};
    bool take;
    if (best.j < 0.0) {
      take = true;
    } else if (std::abs(refined.j - best.j) <= 1e-12) {
      take = refined.theta < best.theta ||
             (refined.theta == best.theta && refined.phi < best.phi);
    } else {
      take = refined.j > best.j;
    }
    if (take) best = refined;
  }

  DiscordResult res;
  res.mutual_info = mutual_information(rho);
  res.optimal = {best.theta, best.phi};
  double s_b = j.s_b();
  double cond = 0.0;
  int k = 0;
  for (Outcome o : {Outcome::plus, Outcome::minus}) {
    MeasurementOutcome out = measurement_outcome(rho, res.optimal, o);
    res.probs[k] = out.prob;
    res.cond_entropies[k] = out.state ? vn_entropy(*out.state) : 0.0;
    cond += out.prob * res.cond_entropies[k];
    ++k;
  }
  res.max_j = s_b - cond;
  res.discord = res.mutual_info - res.max_j;
  if (res.discord < 0.0) {
    if (res.discord < -1e-9) {
      throw std::runtime_error(
          "discord: optimizer produced J exceeding mutual information");
    }
    // Slack from the optimizer; pin the pair so discord = I - max_j holds.
    res.discord = 0.0;
    res.max_j = res.mutual_info;
  }
  return res;
}

/// Work a classical demon extracts after measuring A along m:
/// log2(dim) - S(A) - sum_k p_k S(B|k), in bits.
inline double classical_work(const DensityMatrix& rho,
                             const QubitMeasurement& m) {
  double log_dim = std::log2(static_cast<double>(rho.dim()));
  return log_dim - vn_entropy(partial_trace(rho, Subsystem::A)) -
         conditional_entropy(rho, m);
}

/// Work a fully quantum demon extracts: log2(dim) - S(AB), in bits.
inline double quantum_work(const DensityMatrix& rho) {
  return std::log2(static_cast<double>(rho.dim())) - vn_entropy(rho);
}

}  // namespace weakdiscord

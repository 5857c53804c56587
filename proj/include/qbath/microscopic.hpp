#pragma once

// Microscopic model: dissipation acts between dressed states at the two Bohr
// frequencies. Closed-form propagation, the Gibbs steady state, and a
// generator assembled from the jump operators for cross-validation.

#include <array>
#include <cmath>
#include <vector>

#include "qbath/basis.hpp"
#include "qbath/core.hpp"
#include "qbath/errors.hpp"
#include "qbath/generator.hpp"
#include "qbath/system.hpp"

namespace qbath {

/// Dressed-basis state: populations (aa, bb, cc, dd) and upper-triangle
/// coherences (ab, ac, ad, bc, bd, cd).
struct DressedStateVector {
  enum Coherence { ab, ac, ad, bc, bd, cd };

  std::array<double, 4> populations{};
  std::array<cplx, 6> coherences{};

  Mat4 matrix() const {
    Vec16 y{};
    for (std::size_t i = 0; i < 4; ++i) y[i] = populations[i];
    for (std::size_t k = 0; k < 6; ++k) {
      y[4 + 2 * k] = coherences[k].real();
      y[5 + 2 * k] = coherences[k].imag();
    }
    return unpack(y);
  }

  DensityMatrix4 density(const Tolerances& tol = {}) const {
    return validate_density(matrix(), Basis::Dressed, tol);
  }

  static DressedStateVector from_matrix(const Mat4& m) {
    DressedStateVector s;
    for (std::size_t i = 0; i < 4; ++i) s.populations[i] = m(i, i).real();
    for (std::size_t k = 0; k < 6; ++k) {
      const auto [i, j] = kCoherencePairs[k];
      s.coherences[k] = m(i, j);
    }
    return s;
  }

  static DressedStateVector from_density(const DensityMatrix4& rho, const DressedFrame& f) {
    return from_matrix(change_basis(rho, f, Basis::Dressed).matrix());
  }
};

/// Closed-form state at time t >= 0 from rho0 under the microscopic master
/// equation. With every rate zero the evolution is purely unitary.
inline DressedStateVector propagate_analytic(const DressedStateVector& rho0, const RateSet& r,
                                             const DressedFrame& f, double t) {
  if (!(t >= 0.0)) throw Error("propagate_analytic needs t >= 0");
  const double w1 = f.bohr_I;
  const double w2 = f.bohr_II;
  const double lam = w2 - w1;
  const double root = w1 + w2;

  using C = DressedStateVector::Coherence;
  DressedStateVector s;
  const auto& p0 = rho0.populations;
  const auto& q0 = rho0.coherences;

  const double cI = r.c_I, cII = r.c_II, bI = r.c_bar_I, bII = r.c_bar_II;
  const double sI = cI + bI;
  const double sII = cII + bII;

  if (sI == 0.0 && sII == 0.0) {
    s.populations = p0;
    const auto& e = f.energies;
    for (std::size_t k = 0; k < 6; ++k) {
      const auto [i, j] = kCoherencePairs[k];
      s.coherences[k] = q0[k] * std::exp(kI * ((e[j] - e[i]) * t));
    }
    return s;
  }
  const double k = sI * sII;
  if (k == 0.0) throw DegenerateRates("one Bohr channel has zero total rate");

  const double eI = std::exp(-sI * t);
  const double eII = std::exp(-sII * t);
  const double eS = std::exp(-(sI + sII) * t);
  const double gI = -std::expm1(-sI * t);    // 1 - eI
  const double gII = -std::expm1(-sII * t);  // 1 - eII

  const double aa0 = p0[0], bb0 = p0[1], cc0 = p0[2], dd0 = p0[3];

  s.populations[0] = (cI * cII + eI * (bI * cII * (aa0 + cc0) - cI * cII * (bb0 + dd0)) +
                      eII * (cI * bII * (aa0 + bb0) - cI * cII * (cc0 + dd0)) +
                      eS * (bI * bII * aa0 - cI * bII * bb0 - bI * cII * cc0 + cI * cII * dd0)) /
                     k;
  s.populations[1] = (bI * cII + eI * (-bI * cII * (aa0 + cc0) + cI * cII * (bb0 + dd0)) +
                      eII * (bI * bII * (aa0 + bb0) - bI * cII * (cc0 + dd0)) +
                      eS * (-bI * bII * aa0 + cI * bII * bb0 + bI * cII * cc0 - cI * cII * dd0)) /
                     k;
  s.populations[2] = (cI * bII + eI * (bI * bII * (aa0 + cc0) - cI * bII * (bb0 + dd0)) +
                      eII * (-cI * bII * (aa0 + bb0) + cI * cII * (cc0 + dd0)) +
                      eS * (-bI * bII * aa0 + cI * bII * bb0 + bI * cII * cc0 - cI * cII * dd0)) /
                     k;
  s.populations[3] = (bI * bII + eI * (-bI * bII * (aa0 + cc0) + cI * bII * (bb0 + dd0)) +
                      eII * (-bI * bII * (aa0 + bb0) + bI * cII * (cc0 + dd0)) +
                      eS * (bI * bII * aa0 - cI * bII * bb0 - bI * cII * cc0 + cI * cII * dd0)) /
                     k;

  const cplx rotI = std::exp(cplx{-0.5 * sI * t, w1 * t});
  const cplx rotII = std::exp(cplx{-0.5 * sII * t, w2 * t});
  const double half_total = 0.5 * (sI + sII) * t;

  s.coherences[C::ab] = rotI / sII * ((cII + eII * bII) * q0[C::ab] + gII * cII * q0[C::cd]);
  s.coherences[C::cd] = rotI / sII * (gII * bII * q0[C::ab] + (bII + eII * cII) * q0[C::cd]);
  s.coherences[C::ac] = rotII / sI * ((cI + eI * bI) * q0[C::ac] - gI * cI * q0[C::bd]);
  s.coherences[C::bd] = rotII / sI * (-gI * bI * q0[C::ac] + (bI + eI * cI) * q0[C::bd]);
  s.coherences[C::ad] = std::exp(cplx{-half_total, root * t}) * q0[C::ad];
  s.coherences[C::bc] = std::exp(cplx{-half_total, lam * t}) * q0[C::bc];
  return s;
}

/// Gibbs state over the dressed energies; T = 0 gives the ground state |a><a|.
inline DressedStateVector steady_state_gibbs(const DressedFrame& f, double temperature) {
  DressedStateVector s;
  const auto& e = f.energies;
  std::array<double, 4> w{1.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 1; i < 4; ++i) w[i] = boltzmann_factor(e[i] - e[0], temperature);
  const double z = w[0] + w[1] + w[2] + w[3];
  for (std::size_t i = 0; i < 4; ++i) s.populations[i] = w[i] / z;
  return s;
}

/// Stationary populations expressed through the decay coefficients.
inline DressedStateVector steady_state_from_rates(const RateSet& r) {
  const double sI = r.c_I + r.c_bar_I;
  const double sII = r.c_II + r.c_bar_II;
  const double k = sI * sII;
  if (k == 0.0) throw DegenerateRates("stationary state needs non-zero rates in both channels");
  DressedStateVector s;
  s.populations = {r.c_I * r.c_II / k, r.c_bar_I * r.c_II / k, r.c_I * r.c_bar_II / k,
                   r.c_bar_I * r.c_bar_II / k};
  return s;
}

/// Microscopic steady state. Computed as a Gibbs state and cross-checked
/// against the rate-ratio expression; requires gamma0 > 0.
inline DressedStateVector steady_state_microscopic(const RateSet& r, const DressedFrame& f,
                                                   double temperature) {
  const DressedStateVector gibbs = steady_state_gibbs(f, temperature);
  const DressedStateVector rates = steady_state_from_rates(r);
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(gibbs.populations[i] - rates.populations[i]) > 1e-12)
      throw Error("Gibbs and rate-ratio stationary states disagree; rates and frame are inconsistent");
  }
  return gibbs;
}

/// Jump operators sigma_x^(2)(w_I) and sigma_x^(2)(w_II) in the dressed basis,
/// with amplitudes taken from the frame's eigenvectors.
struct JumpOperators {
  Mat4 bohr_I;   // |a><b| and |c><d| components
  Mat4 bohr_II;  // |a><c| and |b><d| components
};

inline JumpOperators jump_operators(const DressedFrame& f) {
  const Mat4 sx = to_dressed(sigma_x_q2(), f);
  // Only the four pairs above may couple; anything else would be another Bohr frequency.
  for (std::size_t k = 0; k < 6; ++k) {
    const auto [i, j] = kCoherencePairs[k];
    const bool listed = (i == 0 && j == 1) || (i == 2 && j == 3) || (i == 0 && j == 2) || (i == 1 && j == 3);
    if (!listed && std::abs(sx(i, j)) > 1e-12)
      throw Error("sigma_x^(2) couples dressed states outside the two Bohr channels");
  }
  JumpOperators j;
  j.bohr_I(0, 1) = sx(0, 1);
  j.bohr_I(2, 3) = sx(2, 3);
  j.bohr_II(0, 2) = sx(0, 2);
  j.bohr_II(1, 3) = sx(1, 3);
  return j;
}

/// Full microscopic generator -i[H_S, rho] + D(rho) in the dressed basis,
/// built from the jump operators with emission rates gamma(w) and KMS-weighted
/// absorption rates gamma_bar(w). Trace-preserving by construction.
inline Generator build_dissipator_oracle(const SystemParams& p, const RateSet& r, const DressedFrame& f) {
  const Mat4 h = to_dressed(hamiltonian(p), f);
  const JumpOperators j = jump_operators(f);
  const std::array<Channel, 4> channels{{{r.gamma_I, j.bohr_I},
                                         {r.gamma_II, j.bohr_II},
                                         {r.gamma_bar_I, j.bohr_I.adjoint()},
                                         {r.gamma_bar_II, j.bohr_II.adjoint()}}};
  return lindblad_generator(h, channels, Basis::Dressed);
}

/// Closed-form trajectory sampled on `grid`, each snapshot validated.
inline StateTrajectory propagate_analytic_trajectory(const DressedStateVector& rho0, const RateSet& r,
                                                     const DressedFrame& f, const TimeGrid& grid,
                                                     const Tolerances& tol = Tolerances::evolved()) {
  StateTrajectory out;
  out.times = grid.times;
  out.states.reserve(grid.size());
  for (double t : grid.times)
    out.states.push_back(checked_snapshot(propagate_analytic(rho0, r, f, t).matrix(), Basis::Dressed, t, tol));
  return out;
}

}  // namespace qbath

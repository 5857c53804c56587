#pragma once

// Phenomenological model: the coupled-qubit Hamiltonian plus a local
// amplitude-damping dissipator on qubit 2 with bath rates taken at Omega.

#include <array>
#include <cmath>

#include "qbath/basis.hpp"
#include "qbath/core.hpp"
#include "qbath/generator.hpp"
#include "qbath/system.hpp"

namespace qbath {

/// Computational-basis state: populations (11, 22, 33, 44) and upper-triangle
/// coherences (12, 13, 14, 23, 24, 34), with 1=|0,0>, 2=|0,1>, 3=|1,0>, 4=|1,1>.
struct PhenomStateVector {
  enum Coherence { r12, r13, r14, r23, r24, r34 };

  std::array<double, 4> populations{};
  std::array<cplx, 6> coherences{};

  Vec16 coordinates() const {
    Vec16 y{};
    for (std::size_t i = 0; i < 4; ++i) y[i] = populations[i];
    for (std::size_t k = 0; k < 6; ++k) {
      y[4 + 2 * k] = coherences[k].real();
      y[5 + 2 * k] = coherences[k].imag();
    }
    return y;
  }

  static PhenomStateVector from_coordinates(const Vec16& y) {
    PhenomStateVector s;
    for (std::size_t i = 0; i < 4; ++i) s.populations[i] = y[i];
    for (std::size_t k = 0; k < 6; ++k) s.coherences[k] = {y[4 + 2 * k], y[5 + 2 * k]};
    return s;
  }

  Mat4 matrix() const { return unpack(coordinates()); }
  static PhenomStateVector from_matrix(const Mat4& m) { return from_coordinates(pack(m)); }

  DensityMatrix4 density(const Tolerances& tol = {}) const {
    return validate_density(matrix(), Basis::Computational, tol);
  }
};

/// Time derivative of the ten independent matrix elements; the lower triangle
/// follows from Hermiticity.
inline PhenomStateVector phenom_rhs(const PhenomStateVector& s, const SystemParams& p, const RateSet& r) {
  using C = PhenomStateVector::Coherence;
  const double g = r.gamma_phen;
  const double gb = r.gamma_bar_phen;
  const double om = p.omega;
  const cplx h{0.0, 0.5 * p.lambda};  // i lambda / 2
  const double half = 0.5 * (g + gb);

  const double p11 = s.populations[0], p22 = s.populations[1];
  const double p33 = s.populations[2], p44 = s.populations[3];
  const cplx r12 = s.coherences[C::r12], r13 = s.coherences[C::r13], r14 = s.coherences[C::r14];
  const cplx r23 = s.coherences[C::r23], r24 = s.coherences[C::r24], r34 = s.coherences[C::r34];
  const cplx r41 = std::conj(r14), r32 = std::conj(r23), r42 = std::conj(r24);
  const cplx r43 = std::conj(r34), r21 = std::conj(r12);

  PhenomStateVector d;
  d.populations[0] = (-gb * p11 + g * p22 + h * r14 - h * r41).real();
  d.populations[1] = (gb * p11 - g * p22 + h * r23 - h * r32).real();
  d.populations[2] = (-gb * p33 + g * p44 + h * r32 - h * r23).real();
  d.populations[3] = (gb * p33 - g * p44 + h * r41 - h * r14).real();

  d.coherences[C::r12] = cplx{-half, om} * r12 + h * r13 - h * r42;
  d.coherences[C::r13] = h * r12 + cplx{-gb, om} * r13 + g * r24 - h * r43;
  d.coherences[C::r14] = cplx{-half, 2.0 * om} * r14 + h * p11 - h * p44;
  d.coherences[C::r23] = h * p22 - half * r23 - h * p33;
  d.coherences[C::r24] = -h * r34 + cplx{-g, om} * r24 + gb * r13 + h * r21;
  d.coherences[C::r34] = cplx{-half, om} * r34 - h * r24 + h * std::conj(r13);
  return d;
}

/// phenom_rhs as a computational-basis generator for the RK4 core.
inline Generator phenom_generator(const SystemParams& p, const RateSet& r) {
  return generator_from_map(
      [&](const Vec16& y) { return phenom_rhs(PhenomStateVector::from_coordinates(y), p, r).coordinates(); },
      Basis::Computational);
}

/// RK4 propagation from a computational-basis rho0 with the default step bound.
inline StateTrajectory propagate_phenom(const DensityMatrix4& rho0, const SystemParams& p, const RateSet& r,
                                        const TimeGrid& grid, const Tolerances& tol = Tolerances::evolved()) {
  return propagate_numeric(rho0, phenom_generator(p, r), grid, default_max_step(p, r), tol);
}

/// Closed-form stationary state; only the X-shaped elements are non-zero.
inline PhenomStateVector steady_state_phenom(const SystemParams& p, const RateSet& r) {
  using C = PhenomStateVector::Coherence;
  const double g = r.gamma_phen;
  const double gb = r.gamma_bar_phen;
  const double sum = g + gb;
  if (!(sum > 0.0)) throw DegenerateRates("phenomenological steady state needs gamma + gamma_bar > 0");
  const double l2 = p.lambda * p.lambda;
  const double o2 = p.omega * p.omega;
  const double den = sum * sum + 2.0 * l2 + 8.0 * o2;
  const double pden = 2.0 * sum * sum * den;
  const double g2 = g * g, g3 = g2 * g, g4 = g3 * g;
  const double b2 = gb * gb, b3 = b2 * gb;

  PhenomStateVector s;
  s.populations[0] = (3.0 * g3 * gb + g2 * (3.0 * b2 + l2 + 16.0 * o2) + g * (2.0 * l2 * gb + b3) + l2 * b2 + g4) / pden;
  s.populations[1] = (g3 * gb + g2 * (3.0 * b2 + l2) + g * gb * (3.0 * b2 + 2.0 * (l2 + 8.0 * o2)) + b2 * (b2 + l2)) / pden;
  s.populations[2] = (3.0 * g3 * gb + g2 * (3.0 * b2 + l2) + g * gb * (b2 + 2.0 * (l2 + 8.0 * o2)) + l2 * b2 + g4) / pden;
  s.populations[3] = (g3 * gb + g2 * (3.0 * b2 + l2) + b2 * (b2 + l2 + 16.0 * o2) + g * (2.0 * l2 * gb + 3.0 * b3)) / pden;
  s.coherences[C::r23] = cplx{0.0, p.lambda * (gb - g) / (2.0 * den)};
  // real part negative for g > gb; this is what makes phenom_rhs vanish
  s.coherences[C::r14] = cplx{-2.0 * p.lambda * p.omega * (g - gb) / (sum * den), p.lambda * (g - gb) / (2.0 * den)};
  return s;
}

/// The phenomenological stationary state rewritten element by element in the
/// dressed basis.
inline DensityMatrix4 steady_state_phenom_dressed(const SystemParams& p, const RateSet& r, const DressedFrame& f,
                                                  const Tolerances& tol = {}) {
  using C = PhenomStateVector::Coherence;
  const PhenomStateVector s = steady_state_phenom(p, r);
  const double ap = f.alpha_plus, am = f.alpha_minus;
  const double p11 = s.populations[0], p22 = s.populations[1];
  const double p33 = s.populations[2], p44 = s.populations[3];
  const cplx r14 = s.coherences[C::r14];
  const cplx r23 = s.coherences[C::r23];

  Mat4 m;
  m(0, 0) = am * am * p44 + ap * ap * p11 - 2.0 * ap * am * r14.real();
  m(1, 1) = 0.5 * (p22 + p33) - r23.real();
  m(2, 2) = 0.5 * (p22 + p33) + r23.real();
  m(3, 3) = am * am * p11 + ap * ap * p44 + 2.0 * ap * am * r14.real();
  m(0, 3) = ap * am * (p11 - p44) + ap * ap * r14 - am * am * std::conj(r14);
  m(3, 0) = ap * am * (p11 - p44) + ap * ap * std::conj(r14) - am * am * r14;
  m(1, 2) = cplx{0.5 * (p33 - p22), -r23.imag()};
  m(2, 1) = cplx{0.5 * (p33 - p22), r23.imag()};
  return validate_density(m, Basis::Dressed, tol);
}

}  // namespace qbath

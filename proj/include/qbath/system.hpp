#pragma once

// Two resonant qubits with full (counter-rotating) XX coupling, qubit 2
// attached to a thermal bath with a Lorentzian spectral density.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qbath/core.hpp"
#include "qbath/errors.hpp"
#include "qbath/matrix.hpp"

namespace qbath {

/// k_B / hbar in s^-1 K^-1. Converts a temperature to an angular frequency.
inline constexpr double kBoltzmannOverHbar = 1.309193e11;

/// Physical parameters. All frequencies are angular, in s^-1; temperature in K.
struct SystemParams {
  double omega = 1.0;        // qubit frequency (both qubits)
  double lambda = 0.0;       // qubit-qubit coupling; the Hamiltonian carries lambda/2
  double gamma0 = 0.0;       // single-qubit decay rate, peak of J
  double gamma_width = 1.0;  // Lorentzian half-width
  double omega0 = 1.0;       // Lorentzian centre
  double temperature = 0.0;

  /// Checks the invariants; throws InvalidParams.
  void validate() const {
    auto bad = [](const std::string& what) { throw InvalidParams(what); };
    if (!std::isfinite(omega) || !(omega > 0.0)) bad("omega must be > 0");
    if (!std::isfinite(gamma_width) || !(gamma_width > 0.0)) bad("gamma_width must be > 0");
    if (!std::isfinite(gamma0) || gamma0 < 0.0) bad("gamma0 must be >= 0");
    if (!std::isfinite(lambda) || lambda < 0.0) bad("lambda must be >= 0");
    if (!std::isfinite(temperature) || temperature < 0.0) bad("temperature must be >= 0");
    if (!std::isfinite(omega0)) bad("omega0 must be finite");
  }

  /// Builds parameters from per-qubit frequencies; only the resonant case exists.
  static SystemParams from_qubit_frequencies(double omega1, double omega2, double lambda,
                                             double gamma0, double gamma_width, double omega0,
                                             double temperature) {
    if (omega1 != omega2)
      throw InvalidParams("detuned qubits (omega1 != omega2) are not supported");
    SystemParams p{omega1, lambda, gamma0, gamma_width, omega0, temperature};
    p.validate();
    return p;
  }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// H_S in the computational basis:
/// Omega (n1 + n2) + (lambda/2)(s+ s- + s- s+ + s+ s+ + s- s-) = Omega (n1 + n2) + (lambda/2) X(x)X.
inline Mat4 hamiltonian(const SystemParams& p) {
  const Mat2 n = pauli::raising() * pauli::lowering();
  const Mat2 id = Mat2::identity();
  Mat4 h = (kron(n, id) + kron(id, n)) * cplx{p.omega};
  h += kron(pauli::x(), pauli::x()) * cplx{0.5 * p.lambda};
  return h;
}

/// sigma_x acting on qubit 2, the operator that couples to the bath.
inline Mat4 sigma_x_q2() { return kron(Mat2::identity(), pauli::x()); }

/// Eigenstructure of H_S ("dressed" states a < b < c < d).
struct DressedFrame {
  std::array<double, 4> energies{};  // E_a, E_b, E_c, E_d
  double alpha_plus = 1.0;
  double alpha_minus = 0.0;
  double alpha = 0.0;  // <a|sx2|b>, negative
  double eta = 0.0;    // <a|sx2|c>
  double bohr_I = 0.0;   // E_b - E_a = E_d - E_c
  double bohr_II = 0.0;  // E_c - E_a = E_d - E_b
  /// Columns are |a>, |b>, |c>, |d> in the computational basis.
  Mat4 unitary;
};

inline DressedFrame dressed_frame(const SystemParams& p) {
  p.validate();
  const double root = std::hypot(p.lambda, 2.0 * p.omega);  // sqrt(lambda^2 + 4 Omega^2)
  const double x = 2.0 * p.omega / root;
  DressedFrame f;
  f.energies = {p.omega - 0.5 * root, p.omega - 0.5 * p.lambda, p.omega + 0.5 * p.lambda,
                p.omega + 0.5 * root};
  f.alpha_plus = std::sqrt(0.5 + p.omega / root);
  f.alpha_minus = std::sqrt(std::max(0.0, 0.5 - p.omega / root));
  f.alpha = -0.5 * (std::sqrt(1.0 + x) + std::sqrt(std::max(0.0, 1.0 - x)));
  f.eta = 0.5 * (std::sqrt(1.0 + x) - std::sqrt(std::max(0.0, 1.0 - x)));
  f.bohr_I = 0.5 * (root - p.lambda);
  f.bohr_II = 0.5 * (root + p.lambda);

  const double r2 = 1.0 / std::sqrt(2.0);
  Mat4& u = f.unitary;
  // |a> = a+|00> - a-|11>
  u(0, 0) = f.alpha_plus;
  u(3, 0) = -f.alpha_minus;
  // |b> = (|10> - |01>)/sqrt2
  u(1, 1) = -r2;
  u(2, 1) = r2;
  // |c> = (|10> + |01>)/sqrt2
  u(1, 2) = r2;
  u(2, 2) = r2;
  // |d> = a-|00> + a+|11>
  u(0, 3) = f.alpha_minus;
  u(3, 3) = f.alpha_plus;
  return f;
}

/// Lorentzian spectral density J(w) = gamma0 Gamma^2 / ((w - Omega0)^2 + Gamma^2).
inline double spectral_density(const SystemParams& p, double w) {
  const double d = w - p.omega0;
  const double g2 = p.gamma_width * p.gamma_width;
  return p.gamma0 * g2 / (d * d + g2);
}

/// exp(-w / ((k_B/hbar) T)); exactly 0 at T = 0.
inline double boltzmann_factor(double w, double temperature) {
  if (temperature == 0.0) return 0.0;
  return std::exp(-w / (kBoltzmannOverHbar * temperature));
}

/// Bose-Einstein occupancy of a bath mode at angular frequency w.
inline double thermal_occupancy(double w, double temperature) {
  if (!(w > 0.0)) throw NonPositiveFrequency("thermal_occupancy needs w > 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(w / (kBoltzmannOverHbar * temperature));
}

/// Emission rate gamma(w) = J(w) (1 + n(w)).
inline double emission_rate(const SystemParams& p, double w) {
  return spectral_density(p, w) * (1.0 + thermal_occupancy(w, p.temperature));
}

/// Bath rates at the two Bohr frequencies plus the single pair at Omega used by
/// the phenomenological model. Barred rates are absorption (KMS partners).
struct RateSet {
  double gamma_I = 0.0, gamma_II = 0.0;
  double gamma_bar_I = 0.0, gamma_bar_II = 0.0;
  double c_I = 0.0, c_II = 0.0;
  double c_bar_I = 0.0, c_bar_II = 0.0;
  double gamma_phen = 0.0, gamma_bar_phen = 0.0;

  double max_rate() const {
    return std::max({gamma_I, gamma_II, gamma_bar_I, gamma_bar_II, gamma_phen, gamma_bar_phen});
  }
};

inline RateSet rate_set(const SystemParams& p, const DressedFrame& f) {
  RateSet r;
  r.gamma_I = emission_rate(p, f.bohr_I);
  r.gamma_II = emission_rate(p, f.bohr_II);
  r.gamma_bar_I = r.gamma_I * boltzmann_factor(f.bohr_I, p.temperature);
  r.gamma_bar_II = r.gamma_II * boltzmann_factor(f.bohr_II, p.temperature);
  const double a2 = f.alpha * f.alpha;
  const double e2 = f.eta * f.eta;
  r.c_I = a2 * r.gamma_I;
  r.c_II = e2 * r.gamma_II;
  r.c_bar_I = a2 * r.gamma_bar_I;
  r.c_bar_II = e2 * r.gamma_bar_II;
  r.gamma_phen = emission_rate(p, p.omega);
  r.gamma_bar_phen = r.gamma_phen * boltzmann_factor(p.omega, p.temperature);
  return r;
}

/// How well bath quantities at the Bohr frequencies match those at Omega.
struct FairnessReport {
  double j_dev_I = 0.0, j_dev_II = 0.0;
  double n_dev_I = 0.0, n_dev_II = 0.0;
  double threshold = 0.15;
  bool unfair = false;
  /// gamma0 > 0.1 min(w_I, w_II): outside the weak-damping regime.
  bool strong_damping = false;

  double worst() const { return std::max({j_dev_I, j_dev_II, n_dev_I, n_dev_II}); }
};

inline FairnessReport fairness_check(const SystemParams& p, double threshold = 0.15,
                                     double occupancy_floor = 1e-3) {
  const DressedFrame f = dressed_frame(p);
  FairnessReport r;
  r.threshold = threshold;
  const double j0 = spectral_density(p, p.omega);
  auto jdev = [&](double w) { return j0 > 0.0 ? std::abs(spectral_density(p, w) - j0) / j0 : 0.0; };
  const double n0 = thermal_occupancy(p.omega, p.temperature);
  const double nden = std::max(n0, occupancy_floor);
  auto ndev = [&](double w) { return std::abs(thermal_occupancy(w, p.temperature) - n0) / nden; };
  r.j_dev_I = jdev(f.bohr_I);
  r.j_dev_II = jdev(f.bohr_II);
  r.n_dev_I = ndev(f.bohr_I);
  r.n_dev_II = ndev(f.bohr_II);
  r.unfair = r.worst() > threshold;
  r.strong_damping = p.gamma0 > 0.1 * std::min(f.bohr_I, f.bohr_II);
  return r;
}

}  // namespace qbath

#pragma once

// Correlation measures of two-qubit states: concurrence, approximate and
// brute-force quantum discord (measurement on qubit 2), and entropies.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "qbath/basis.hpp"
#include "qbath/core.hpp"
#include "qbath/errors.hpp"
#include "qbath/microscopic.hpp"
#include "qbath/system.hpp"

namespace qbath {

/// The six X-shaped entries of a computational-basis state.
struct XStateElements {
  double q11 = 0.0, q22 = 0.0, q33 = 0.0, q44 = 0.0;
  cplx q14{}, q23{};

  /// Throws InvalidDensity on a trace or X-block positivity violation.
  void validate(double tol = 1e-10, double psd_tol = 1e-9) const {
    std::vector<InvariantFailure> fs;
    const double terr = std::abs(q11 + q22 + q33 + q44 - 1.0);
    if (terr > tol) fs.push_back({Violation::TraceNotOne, terr});
    const double e14 = std::norm(q14) - q11 * q44;
    const double e23 = std::norm(q23) - q22 * q33;
    const double worst = std::max(e14, e23);
    if (worst > psd_tol) fs.push_back({Violation::NotPSD, worst});
    if (std::min({q11, q22, q33, q44}) < -psd_tol)
      fs.push_back({Violation::NotPSD, -std::min({q11, q22, q33, q44})});
    if (!fs.empty()) throw InvalidDensity(std::move(fs));
  }

  Mat4 matrix() const {
    Mat4 m = Mat4::diagonal({q11, q22, q33, q44});
    m(0, 3) = q14;
    m(3, 0) = std::conj(q14);
    m(1, 2) = q23;
    m(2, 1) = std::conj(q23);
    return m;
  }

  /// Reads the X entries of a computational-basis state, ignoring the rest.
  static XStateElements from_computational(const DensityMatrix4& rho) {
    if (rho.basis() != Basis::Computational) throw WrongBasis("X elements need a computational-basis state");
    const Mat4& m = rho.matrix();
    return {m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(), m(0, 3), m(1, 2)};
  }

  /// Largest entry outside the X pattern.
  static double off_x_magnitude(const Mat4& m) {
    double w = 0.0;
    for (const auto& [i, j] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}})
      w = std::max(w, std::abs(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j))));
    return w;
  }
};

/// Q elements from dressed populations and the b-c coherence. Valid only when
/// rho_ad vanishes; otherwise throws AssumptionViolated and the caller must use
/// change_basis instead.
inline XStateElements x_elements_from_dressed(const DressedStateVector& s, const DressedFrame& f,
                                              double ad_tol = 1e-10) {
  using C = DressedStateVector::Coherence;
  if (std::abs(s.coherences[C::ad]) > ad_tol)
    throw AssumptionViolated("rho_ad is non-zero; Q elements need the full basis change");
  const double ap2 = f.alpha_plus * f.alpha_plus;
  const double am2 = f.alpha_minus * f.alpha_minus;
  const double aa = s.populations[0], bb = s.populations[1], cc = s.populations[2], dd = s.populations[3];
  const cplx bc = s.coherences[C::bc];
  XStateElements x;
  x.q11 = ap2 * aa + am2 * dd;
  x.q22 = 0.5 * (bb + cc) - bc.real();
  x.q33 = 0.5 * (bb + cc) + bc.real();
  x.q44 = am2 * aa + ap2 * dd;
  x.q14 = f.alpha_plus * f.alpha_minus * (dd - aa);
  x.q23 = cplx{0.5 * (cc - bb), -bc.imag()};
  return x;
}

/// X-state concurrence 2 max(0, |q14| - sqrt(q22 q33), |q23| - sqrt(q11 q44)).
inline double concurrence_x(const XStateElements& x) {
  const double c1 = std::abs(x.q14) - std::sqrt(std::max(0.0, x.q22 * x.q33));
  const double c2 = std::abs(x.q23) - std::sqrt(std::max(0.0, x.q11 * x.q44));
  return std::clamp(2.0 * std::max({0.0, c1, c2}), 0.0, 1.0);
}

/// Wootters concurrence from the spectrum of sqrt(rho) rho~ sqrt(rho), whose
/// eigenvalues equal those of rho rho~.
inline double concurrence_general(const DensityMatrix4& rho, double psd_tol = 1e-9) {
  if (rho.basis() != Basis::Computational) throw WrongBasis("concurrence needs a computational-basis state");
  const auto eig = hermitian_eigs(rho.matrix());
  if (eig.values.front() < -psd_tol) throw NegativeEigenvalue(eig.values.front());

  Mat4 root_lambda;
  for (std::size_t k = 0; k < 4; ++k) root_lambda(k, k) = std::sqrt(std::max(0.0, eig.values[k]));
  const Mat4 sqrt_rho = eig.vectors * root_lambda * eig.vectors.adjoint();
  const Mat4 yy = kron(pauli::y(), pauli::y());
  const Mat4 flipped = yy * rho.matrix().conjugate() * yy;
  Mat4 r = sqrt_rho * flipped * sqrt_rho;
  r = (r + r.adjoint()) * cplx{0.5};

  auto xi = hermitian_eigs(r).values;
  std::array<double, 4> s;
  for (std::size_t k = 0; k < 4; ++k) s[k] = std::sqrt(std::max(0.0, xi[k]));
  std::sort(s.begin(), s.end(), std::greater<>());
  return std::clamp(s[0] - s[1] - s[2] - s[3], 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Entropies

/// -p log2 p with 0 log 0 = 0; the argument is clamped to [1e-300, 1].
inline double entropy_term(double p) {
  if (p <= 0.0) return 0.0;
  const double q = std::clamp(p, 1e-300, 1.0);
  return -q * std::log2(q);
}

/// Base-2 von Neumann entropy.
template <std::size_t N>
double von_neumann_entropy(const Matrix<cplx, N>& m, double psd_tol = 1e-9) {
  const auto vals = hermitian_eigs(m).values;
  if (vals.front() < -psd_tol) throw InvalidDensity({{Violation::NotPSD, -vals.front()}});
  double s = 0.0;
  for (double v : vals) s += entropy_term(std::clamp(v, 0.0, 1.0));
  return s;
}

inline double von_neumann_entropy(const QubitState2& q) { return von_neumann_entropy(q.matrix()); }
inline double von_neumann_entropy(const DensityMatrix4& rho) { return von_neumann_entropy(rho.matrix()); }

/// Closed-form spectrum of an X state (two 2x2 blocks).
inline std::array<double, 4> x_spectrum(const XStateElements& x) {
  const double r1 = std::sqrt((x.q11 - x.q44) * (x.q11 - x.q44) + 4.0 * std::norm(x.q14));
  const double r2 = std::sqrt((x.q22 - x.q33) * (x.q22 - x.q33) + 4.0 * std::norm(x.q23));
  return {0.5 * (x.q11 + x.q44 + r1), 0.5 * (x.q11 + x.q44 - r1), 0.5 * (x.q22 + x.q33 + r2),
          0.5 * (x.q22 + x.q33 - r2)};
}

/// Pieces of the approximate discord, kept for reporting.
struct DiscordBreakdown {
  double entropy_q2 = 0.0;     // S(rho_q2)
  double entropy_total = 0.0;  // S(rho)
  double n1 = 0.0;             // binary-entropy branch
  double n2 = 0.0;             // sigma_z measurement branch
  double raw = 0.0;            // before clamping
  double value = 0.0;          // max(raw, 0)
  bool clamped = false;        // raw was negative
};

inline DiscordBreakdown discord_approx_q2_breakdown(const XStateElements& x) {
  DiscordBreakdown d;
  d.entropy_q2 = entropy_term(x.q11 + x.q33) + entropy_term(x.q22 + x.q44);
  for (double v : x_spectrum(x)) d.entropy_total += entropy_term(std::max(0.0, v));

  const double m = x.q11 - x.q44 + x.q22 - x.q33;
  const double c = std::abs(x.q14) + std::abs(x.q23);
  const double y = std::clamp(0.5 * (1.0 + std::sqrt(m * m + 4.0 * c * c)), 0.0, 1.0);
  d.n1 = entropy_term(y) + entropy_term(1.0 - y);

  auto cond = [](double qa, double qb) {
    if (qa <= 0.0) return 0.0;
    return -qa * std::log2(qa / (qa + qb));
  };
  d.n2 = cond(x.q11, x.q33) + cond(x.q22, x.q44) + cond(x.q33, x.q11) + cond(x.q44, x.q22);

  d.raw = d.entropy_q2 - d.entropy_total + std::min(d.n1, d.n2);
  d.clamped = d.raw < 0.0;
  d.value = std::max(0.0, d.raw);
  return d;
}

/// Approximate discord D_2 (measurement on qubit 2) of an X state.
inline double discord_approx_q2(const XStateElements& x) { return discord_approx_q2_breakdown(x).value; }

/// Brute-force D_2: minimum conditional entropy over projective measurements
/// on qubit 2 along grid_n Fibonacci-sphere directions plus the three axes.
/// An upper bound on the exact discord; intended as a test oracle.
inline double discord_oracle_q2(const DensityMatrix4& rho, int grid_n) {
  if (rho.basis() != Basis::Computational) throw WrongBasis("discord oracle needs a computational-basis state");
  if (grid_n < 64) throw Error("discord oracle needs grid_n >= 64");
  const Mat4& r = rho.matrix();
  const double base = von_neumann_entropy(partial_trace_q1(rho)) - von_neumann_entropy(rho);

  auto conditional = [&r](double nx, double ny, double nz) {
    double total = 0.0;
    for (double sign : {1.0, -1.0}) {
      // Projector on qubit 2: (I + sign n.sigma)/2
      Mat2 proj;
      proj(0, 0) = 0.5 * (1.0 + sign * nz);
      proj(1, 1) = 0.5 * (1.0 - sign * nz);
      proj(0, 1) = 0.5 * sign * cplx{nx, -ny};
      proj(1, 0) = 0.5 * sign * cplx{nx, ny};
      // Tr_q2[(I x P) rho]
      Mat2 q1;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
          cplx acc{};
          for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t l = 0; l < 2; ++l) acc += proj(l, k) * r(2 * i + k, 2 * j + l);
          q1(i, j) = acc;
        }
      const double prob = q1.trace().real();
      if (prob <= 1e-15) continue;
      q1 *= cplx{1.0 / prob};
      q1 = (q1 + q1.adjoint()) * cplx{0.5};
      total += prob * von_neumann_entropy(q1, 1e-7);
    }
    return total;
  };

  double best = std::min({conditional(0, 0, 1), conditional(1, 0, 0), conditional(0, 1, 0)});
  const double golden = std::numbers::pi * (1.0 + std::sqrt(5.0));
  for (int k = 0; k < grid_n; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / grid_n;
    const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * (k + 0.5);
    best = std::min(best, conditional(rad * std::cos(phi), rad * std::sin(phi), z));
  }
  return base + best;
}

// ---------------------------------------------------------------------------
// Linear entropy of qubit 1

/// 1 - Tr rho_q1^2 via the partial trace.
inline double linear_entropy_q1(const DensityMatrix4& rho) {
  const Mat2 q = partial_trace_q2(rho).matrix();
  const double purity = std::norm(q(0, 0)) + std::norm(q(1, 1)) + 2.0 * std::norm(q(0, 1));
  return std::clamp(1.0 - purity, 0.0, 0.5);
}

/// 2 P0 (1 - P0) with P0 = q11 + q22; exact when the reduced state is diagonal.
inline double linear_entropy_q1(const XStateElements& x) {
  const double p0 = x.q11 + x.q22;
  return std::clamp(2.0 * p0 * (1.0 - p0), 0.0, 0.5);
}

}  // namespace qbath

#pragma once

// Linear generators of two-qubit dynamics on the 16 real coordinates of a
// Hermitian 4x4 operator, and the fixed-step RK4 core shared by every
// numerically propagated model.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qbath/core.hpp"
#include "qbath/errors.hpp"
#include "qbath/matrix.hpp"
#include "qbath/system.hpp"

namespace qbath {

using Vec16 = std::array<double, 16>;
using RealMat16 = Matrix<double, 16>;

/// Upper-triangle pairs in coordinate order: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
inline constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kCoherencePairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Coordinates of a Hermitian operator: four diagonal entries, then (Re, Im)
/// of each upper-triangle entry in kCoherencePairs order. Only the upper
/// triangle is read.
inline Vec16 pack(const Mat4& m) {
  Vec16 y{};
  for (std::size_t i = 0; i < 4; ++i) y[i] = m(i, i).real();
  for (std::size_t k = 0; k < 6; ++k) {
    const auto [i, j] = kCoherencePairs[k];
    y[4 + 2 * k] = m(i, j).real();
    y[5 + 2 * k] = m(i, j).imag();
  }
  return y;
}

/// Inverse of pack; the lower triangle is mirrored so the result is Hermitian.
inline Mat4 unpack(const Vec16& y) {
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = y[i];
  for (std::size_t k = 0; k < 6; ++k) {
    const auto [i, j] = kCoherencePairs[k];
    const cplx z{y[4 + 2 * k], y[5 + 2 * k]};
    m(i, j) = z;
    m(j, i) = std::conj(z);
  }
  return m;
}

/// d/dt y = matrix * y, with y = pack(rho) written in `basis`.
struct Generator {
  RealMat16 matrix;
  Basis basis = Basis::Computational;

  Vec16 apply(const Vec16& y) const { return matrix * y; }
};

/// Builds the generator of a linear, Hermiticity-preserving map by probing it
/// with the 16 coordinate directions.
template <typename Map>
Generator generator_from_map(Map&& map, Basis basis) {
  Generator g;
  g.basis = basis;
  for (std::size_t col = 0; col < 16; ++col) {
    Vec16 e{};
    e[col] = 1.0;
    const Vec16 out = map(e);
    for (std::size_t row = 0; row < 16; ++row) g.matrix(row, col) = out[row];
  }
  return g;
}

/// One dissipative channel rate * D[L].
struct Channel {
  double rate;
  Mat4 jump;
};

/// -i[H, rho] + sum_k rate_k (L rho L^dagger - {L^dagger L, rho}/2).
inline Mat4 lindblad_rhs(const Mat4& h, std::span<const Channel> channels, const Mat4& rho) {
  Mat4 out = (h * rho - rho * h) * cplx{0.0, -1.0};
  for (const auto& ch : channels) {
    if (ch.rate == 0.0) continue;
    const Mat4 ld = ch.jump.adjoint();
    const Mat4 ldl = ld * ch.jump;
    Mat4 term = ch.jump * rho * ld - (ldl * rho + rho * ldl) * cplx{0.5};
    out += term * cplx{ch.rate};
  }
  return out;
}

inline Generator lindblad_generator(const Mat4& h, std::span<const Channel> channels, Basis basis) {
  return generator_from_map([&](const Vec16& y) { return pack(lindblad_rhs(h, channels, unpack(y))); },
                            basis);
}

// ---------------------------------------------------------------------------
// RK4

/// One classic RK4 step of size h.
inline Vec16 rk4_step(const Generator& g, const Vec16& y, double h) {
  auto axpy = [](const Vec16& a, double s, const Vec16& b) {
    Vec16 r;
    for (std::size_t i = 0; i < 16; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const Vec16 k1 = g.apply(y);
  const Vec16 k2 = g.apply(axpy(y, 0.5 * h, k1));
  const Vec16 k3 = g.apply(axpy(y, 0.5 * h, k2));
  const Vec16 k4 = g.apply(axpy(y, h, k3));
  Vec16 out;
  for (std::size_t i = 0; i < 16; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

/// For a linear right-hand side an RK4 step is multiplication by
/// I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24.
inline RealMat16 rk4_step_matrix(const Generator& g, double h) {
  const RealMat16 hl = g.matrix * h;
  const RealMat16 id = RealMat16::identity();
  RealMat16 acc = id + hl * 0.25;
  acc = id + (hl * acc) * (1.0 / 3.0);
  acc = id + (hl * acc) * 0.5;
  return id + hl * acc;
}

inline RealMat16 matrix_power(RealMat16 base, std::size_t n) {
  RealMat16 result = RealMat16::identity();
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n) base = base * base;
  }
  return result;
}

/// Number of equal RK4 steps covering dt without exceeding max_step.
inline std::size_t rk4_step_count(double dt, double max_step) {
  if (dt <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(dt / max_step - 1e-9));
}

/// Exact composition of n = rk4_step_count(dt, max_step) RK4 steps of size dt/n.
inline RealMat16 rk4_interval_matrix(const Generator& g, double dt, double max_step) {
  const std::size_t n = rk4_step_count(dt, max_step);
  if (n == 0) return RealMat16::identity();
  return matrix_power(rk4_step_matrix(g, dt / static_cast<double>(n)), n);
}

/// True when the population rows of L sum to zero column by column, i.e. the
/// generator conserves the trace up to rounding.
inline bool conserves_trace(const Generator& g) {
  const double scale = g.matrix.max_abs();
  for (std::size_t j = 0; j < 16; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < 4; ++i) col += g.matrix(i, j);
    if (std::abs(col) > 1e-12 * scale) return false;
  }
  return true;
}

/// Rank-one fix of the trace row of a propagator: sum of population rows
/// becomes exactly (1,1,1,1,0,...). Only for trace-conserving generators, where
/// any deviation is accumulated rounding from long step products.
inline void restore_trace_row(RealMat16& m) {
  for (std::size_t j = 0; j < 16; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < 4; ++i) col += m(i, j);
    const double fix = ((j < 4 ? 1.0 : 0.0) - col) / 4.0;
    for (std::size_t i = 0; i < 4; ++i) m(i, j) += fix;
  }
}

/// Step bound: h <= min(1e-2 / max_rate, 1e-2 / sqrt(lambda^2 + 4 Omega^2)).
inline double default_max_step(const SystemParams& p, const RateSet& r) {
  double h = 1e-2 / std::hypot(p.lambda, 2.0 * p.omega);
  const double mr = r.max_rate();
  if (mr > 0.0) h = std::min(h, 1e-2 / mr);
  return h;
}

// ---------------------------------------------------------------------------
// Time grids and trajectories

struct TimeGrid {
  std::vector<double> times;

  static TimeGrid uniform(double t_max, std::size_t n) {
    if (n < 2) throw Error("time grid needs at least 2 points");
    if (!(t_max > 0.0)) throw Error("time grid needs t_max > 0");
    TimeGrid g;
    g.times.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      g.times[k] = t_max * static_cast<double>(k) / static_cast<double>(n - 1);
    g.times.back() = t_max;
    return g;
  }

  /// t = 0 followed by n - 1 geometrically spaced points from t_first to t_max.
  static TimeGrid logarithmic(double t_first, double t_max, std::size_t n) {
    if (n < 3) throw Error("log grid needs at least 3 points");
    if (!(t_first > 0.0) || !(t_max > t_first)) throw Error("log grid needs 0 < t_first < t_max");
    TimeGrid g;
    g.times.resize(n);
    g.times[0] = 0.0;
    const double ratio = std::log(t_max / t_first);
    for (std::size_t k = 1; k < n; ++k)
      g.times[k] = t_first * std::exp(ratio * static_cast<double>(k - 1) / static_cast<double>(n - 2));
    g.times.back() = t_max;
    return g;
  }

  std::size_t size() const { return times.size(); }
};

struct StateTrajectory {
  std::vector<double> times;
  std::vector<DensityMatrix4> states;
};

/// Checks a propagated snapshot: trace drift first (StepTooLarge), then the
/// remaining invariants (InvariantViolation).
inline DensityMatrix4 checked_snapshot(const Mat4& m, Basis basis, double t, const Tolerances& tol) {
  const double drift = std::abs(m.trace() - cplx{1.0});
  if (!(drift <= tol.trace)) throw StepTooLarge(t, drift);
  auto failures = check_density(m, tol);
  if (!failures.empty()) {
    throw InvariantViolation("state invariant violated at t = " + std::to_string(t) + ": " +
                             InvalidDensity(std::move(failures)).what());
  }
  return DensityMatrix4::unchecked(m, basis);
}

/// Fixed-step RK4 propagation of rho0 over `grid`. The step never exceeds
/// max_step; each output interval is split into equal steps.
inline StateTrajectory propagate_numeric(const DensityMatrix4& rho0, const Generator& g,
                                         const TimeGrid& grid, double max_step,
                                         const Tolerances& tol = Tolerances::evolved()) {
  if (rho0.basis() != g.basis) throw WrongBasis("initial state and generator use different bases");
  if (!(max_step > 0.0)) throw Error("max_step must be > 0");
  StateTrajectory out;
  out.times = grid.times;
  out.states.reserve(grid.size());

  Vec16 y = pack(rho0.matrix());
  double t_prev = 0.0;
  double dt_cached = -1.0;
  RealMat16 step_map = RealMat16::identity();
  const bool fix_trace = conserves_trace(g);
  for (double t : grid.times) {
    const double dt = t - t_prev;
    if (dt < 0.0) throw Error("time grid must be non-decreasing and start at t >= 0");
    if (dt > 0.0) {
      if (std::abs(dt - dt_cached) > 1e-12 * dt) {
        step_map = rk4_interval_matrix(g, dt, max_step);
        if (fix_trace) restore_trace_row(step_map);
        dt_cached = dt;
      }
      y = step_map * y;
    }
    out.states.push_back(checked_snapshot(unpack(y), g.basis, t, tol));
    t_prev = t;
  }
  return out;
}

}  // namespace qbath

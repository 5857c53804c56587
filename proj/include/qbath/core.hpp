#pragma once

// Density operators of one and two qubits, their validation, reduction to
// one qubit, and a cyclic Jacobi eigensolver for small Hermitian matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qbath/errors.hpp"
#include "qbath/matrix.hpp"

namespace qbath {

/// Basis in which a two-qubit operator is written.
///   Computational: |0,0>, |0,1>, |1,0>, |1,1>   (first label = qubit 1)
///   Dressed:       |a>, |b>, |c>, |d>           (ascending energy)
enum class Basis { Computational, Dressed };

inline const char* to_string(Basis b) {
  return b == Basis::Computational ? "computational" : "dressed";
}

/// Acceptance thresholds for density-operator invariants.
struct Tolerances {
  double hermiticity = 1e-12;
  double trace = 1e-10;
  double psd = 1e-9;

  /// Looser bounds applied to numerically propagated snapshots.
  static constexpr Tolerances evolved() { return {1e-10, 1e-8, 1e-7}; }
};

// ---------------------------------------------------------------------------
// Hermitian eigensolver

template <std::size_t N>
struct EigenDecomposition {
  std::array<double, N> values;  // ascending
  Matrix<cplx, N> vectors;       // column k belongs to values[k]

  Matrix<cplx, N> reconstruct() const {
    Matrix<cplx, N> lam;
    for (std::size_t k = 0; k < N; ++k) lam(k, k) = values[k];
    return vectors * lam * vectors.adjoint();
  }
};

namespace detail {

// A <- A J with J the unit-determinant rotation in the (p, q) plane
// J_pp = J_qq = c, J_pq = s*ph, J_qp = -s*conj(ph).
template <std::size_t N>
void rotate_columns(Matrix<cplx, N>& a, std::size_t p, std::size_t q, double c, double s, cplx ph) {
  for (std::size_t k = 0; k < N; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = c * akp - s * std::conj(ph) * akq;
    a(k, q) = s * ph * akp + c * akq;
  }
}

// A <- J^dagger A
template <std::size_t N>
void rotate_rows(Matrix<cplx, N>& a, std::size_t p, std::size_t q, double c, double s, cplx ph) {
  for (std::size_t k = 0; k < N; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = c * apk - s * ph * aqk;
    a(q, k) = s * std::conj(ph) * apk + c * aqk;
  }
}

}  // namespace detail

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Sweeps visit (p, q) pairs in row order, so the result is deterministic.
/// The input must be Hermitian to `herm_tol` relative to its largest entry
/// (absolute below unit scale); the anti-Hermitian residue is discarded.
template <std::size_t N>
EigenDecomposition<N> hermitian_eigs(const Matrix<cplx, N>& m, double herm_tol = 1e-10) {
  const double scale = std::max(1.0, m.max_abs());
  const double herr = hermiticity_error(m);
  if (!(herr <= herm_tol * scale)) throw NotHermitian(herr);

  Matrix<cplx, N> a = (m + m.adjoint()) * cplx{0.5};
  Matrix<cplx, N> v = Matrix<cplx, N>::identity();

  auto off_norm2 = [&a] {
    double s = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) s += std::norm(a(p, q));
    return s;
  };
  double total2 = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) total2 += std::norm(a(i, j));
  const double stop = total2 * std::numeric_limits<double>::epsilon() *
                      std::numeric_limits<double>::epsilon() * 1e-2;

  for (int sweep = 0; sweep < 100 && off_norm2() > stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const cplx ph = a(p, q) / mag;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 0.5 / tau;
        } else {
          t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        detail::rotate_columns(a, p, q, c, s, ph);
        detail::rotate_rows(a, p, q, c, s, ph);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        detail::rotate_columns(v, p, q, c, s, ph);
      }
    }
  }

  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < N; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

template <std::size_t N>
std::array<double, N> hermitian_eigenvalues(const Matrix<cplx, N>& m, double herm_tol = 1e-10) {
  return hermitian_eigs(m, herm_tol).values;
}

// ---------------------------------------------------------------------------
// Density operators

/// Every invariant `m` fails as a density operator, empty when valid.
template <std::size_t N>
std::vector<InvariantFailure> check_density(const Matrix<cplx, N>& m, const Tolerances& tol = {}) {
  std::vector<InvariantFailure> out;
  if (!m.all_finite()) {
    out.push_back({Violation::NonFinite, std::numeric_limits<double>::infinity()});
    return out;
  }
  const double herr = hermiticity_error(m);
  if (herr > tol.hermiticity) out.push_back({Violation::NotHermitian, herr});
  const double terr = std::abs(m.trace() - cplx{1.0});
  if (terr > tol.trace) out.push_back({Violation::TraceNotOne, terr});
  // Spectrum of the Hermitian part; always well defined.
  const Matrix<cplx, N> h = (m + m.adjoint()) * cplx{0.5};
  const double lo = hermitian_eigs(h).values.front();
  if (lo < -tol.psd) out.push_back({Violation::NotPSD, -lo});
  return out;
}

/// A validated two-qubit density operator tagged with its basis.
class DensityMatrix4 {
 public:
  /// Wraps `m` without checking; callers own the invariants.
  static DensityMatrix4 unchecked(const Mat4& m, Basis basis) { return DensityMatrix4(m, basis); }

  const Mat4& matrix() const { return m_; }
  Basis basis() const { return basis_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  DensityMatrix4(const Mat4& m, Basis b) : m_(m), basis_(b) {}
  Mat4 m_;
  Basis basis_;
};

/// Reduced state of a single qubit.
class QubitState2 {
 public:
  static QubitState2 unchecked(const Mat2& m) { return QubitState2(m); }
  const Mat2& matrix() const { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  explicit QubitState2(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

/// Throws InvalidDensity listing every failed invariant with its magnitude.
inline DensityMatrix4 validate_density(const Mat4& m, Basis basis = Basis::Computational,
                                       const Tolerances& tol = {}) {
  auto failures = check_density(m, tol);
  if (!failures.empty()) throw InvalidDensity(std::move(failures));
  return DensityMatrix4::unchecked(m, basis);
}

inline QubitState2 validate_qubit(const Mat2& m, const Tolerances& tol = {}) {
  auto failures = check_density(m, tol);
  if (!failures.empty()) throw InvalidDensity(std::move(failures));
  return QubitState2::unchecked(m);
}

/// Reduced state of qubit 1 (trace over qubit 2).
inline QubitState2 partial_trace_q2(const DensityMatrix4& rho) {
  if (rho.basis() != Basis::Computational)
    throw WrongBasis("partial_trace_q2 needs a computational-basis state");
  const Mat4& r = rho.matrix();
  Mat2 q;
  q(0, 0) = r(0, 0) + r(1, 1);
  q(1, 1) = r(2, 2) + r(3, 3);
  q(0, 1) = r(0, 2) + r(1, 3);
  q(1, 0) = r(2, 0) + r(3, 1);
  return QubitState2::unchecked(q);
}

/// Reduced state of qubit 2 (trace over qubit 1).
inline QubitState2 partial_trace_q1(const DensityMatrix4& rho) {
  if (rho.basis() != Basis::Computational)
    throw WrongBasis("partial_trace_q1 needs a computational-basis state");
  const Mat4& r = rho.matrix();
  Mat2 q;
  q(0, 0) = r(0, 0) + r(2, 2);
  q(1, 1) = r(1, 1) + r(3, 3);
  q(0, 1) = r(0, 1) + r(2, 3);
  q(1, 0) = r(1, 0) + r(3, 2);
  return QubitState2::unchecked(q);
}

/// |psi><psi| for a normalized 4-vector.
inline Mat4 projector(const std::array<cplx, 4>& psi) {
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = psi[i] * std::conj(psi[j]);
  return m;
}

/// Computational basis ket |q1, q2>.
inline std::array<cplx, 4> ket(int q1, int q2) {
  std::array<cplx, 4> v{};
  v[static_cast<std::size_t>(2 * q1 + q2)] = 1.0;
  return v;
}

}  // namespace qbath

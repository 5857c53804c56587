#pragma once

// Fixed-size dense matrices for two-qubit work: 2x2 and 4x4 complex
// operators and the 16x16 real generators acting on vectorized states.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <ostream>

namespace qbath {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

namespace detail {
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const cplx& z) { return std::abs(z); }
inline double conj_of(double x) { return x; }
inline cplx conj_of(const cplx& z) { return std::conj(z); }
inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
}  // namespace detail

/// Row-major N x N matrix with value semantics.
template <typename T, std::size_t N>
class Matrix {
 public:
  using value_type = T;
  static constexpr std::size_t dim = N;

  constexpr Matrix() : data_{} {}

  static Matrix zero() { return Matrix{}; }

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = T{1};
    return m;
  }

  static Matrix diagonal(const std::array<T, N>& d) {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * N + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * N + j]; }

  Matrix adjoint() const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(j, i) = detail::conj_of((*this)(i, j));
    return r;
  }

  Matrix transpose() const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Matrix conjugate() const {
    Matrix r;
    for (std::size_t k = 0; k < N * N; ++k) r.data_[k] = detail::conj_of(data_[k]);
    return r;
  }

  T trace() const {
    T t{};
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest entry magnitude.
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, detail::magnitude(x));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return detail::finite(x); });
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend std::array<T, N> operator*(const Matrix& a, const std::array<T, N>& v) {
    std::array<T, N> r{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r[i] += a(i, j) * v[j];
    return r;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) os << (j ? " " : "") << m(i, j);
      os << '\n';
    }
    return os;
  }

 private:
  std::array<T, N * N> data_;
};

using Mat2 = Matrix<cplx, 2>;
using Mat4 = Matrix<cplx, 4>;

/// Max entrywise |a - b|.
template <typename T, std::size_t N>
double max_abs_diff(const Matrix<T, N>& a, const Matrix<T, N>& b) {
  return (a - b).max_abs();
}

/// Max entrywise |m - m^dagger|.
template <std::size_t N>
double hermiticity_error(const Matrix<cplx, N>& m) {
  return max_abs_diff(m, m.adjoint());
}

/// Kronecker product; the left factor acts on qubit 1 (the most significant index).
inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

namespace pauli {
inline Mat2 identity() { return Mat2::identity(); }
inline Mat2 x() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}
inline Mat2 y() {
  Mat2 m;
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}
inline Mat2 z() { return Mat2::diagonal({1.0, -1.0}); }
/// |1><0| with |0> the ground state.
inline Mat2 raising() {
  Mat2 m;
  m(1, 0) = 1.0;
  return m;
}
/// |0><1|.
inline Mat2 lowering() {
  Mat2 m;
  m(0, 1) = 1.0;
  return m;
}
}  // namespace pauli

}  // namespace qbath

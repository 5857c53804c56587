#pragma once

#include "qbath/core.hpp"
#include "qbath/system.hpp"

namespace qbath {

/// Raw conjugation: dressed -> computational is U rho U^dagger, the reverse U^dagger rho U.
inline Mat4 to_computational(const Mat4& dressed, const DressedFrame& f) {
  return f.unitary * dressed * f.unitary.adjoint();
}

inline Mat4 to_dressed(const Mat4& computational, const DressedFrame& f) {
  return f.unitary.adjoint() * computational * f.unitary;
}

/// Re-expresses `rho` in `target`. The frame must come from the parameters
/// that produced `rho`.
inline DensityMatrix4 change_basis(const DensityMatrix4& rho, const DressedFrame& f, Basis target,
                                   const Tolerances& tol = {}) {
  if (rho.basis() == target) return rho;
  const Mat4 m = target == Basis::Computational ? to_computational(rho.matrix(), f)
                                                : to_dressed(rho.matrix(), f);
  return validate_density(m, target, tol);
}

}  // namespace qbath

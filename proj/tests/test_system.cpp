#include <gtest/gtest.h>

#include <cmath>

#include "qbath/basis.hpp"
#include "qbath/system.hpp"

using namespace qbath;

namespace {

SystemParams fig2() { return {4e9, 4e9, 5e7, 5e10, 8e9, 5e-4}; }
SystemParams fig3() { return {4e9, 4e9, 5e7, 5e10, 8e9, 1.5e-2}; }

}  // namespace

TEST(Params, RejectsBadValues) {
  SystemParams p;
  p.omega = 0.0;
  EXPECT_THROW(p.validate(), InvalidParams);
  p = {};
  p.gamma_width = -1.0;
  EXPECT_THROW(p.validate(), InvalidParams);
  p = {};
  p.temperature = -1e-3;
  EXPECT_THROW(p.validate(), InvalidParams);
  p = {};
  p.gamma0 = std::nan("");
  EXPECT_THROW(p.validate(), InvalidParams);
}

TEST(Params, DetunedQubitsRejected) {
  EXPECT_THROW(SystemParams::from_qubit_frequencies(1.0, 1.1, 0.1, 0.01, 1.0, 2.0, 0.0), InvalidParams);
  EXPECT_NO_THROW(SystemParams::from_qubit_frequencies(1.0, 1.0, 0.1, 0.01, 1.0, 2.0, 0.0));
}

TEST(Hamiltonian, UncoupledIsDiagonal) {
  SystemParams p;
  p.omega = 2.5;
  p.lambda = 0.0;
  EXPECT_LT(max_abs_diff(hamiltonian(p), Mat4::diagonal({0.0, 2.5, 2.5, 5.0})), 1e-15);
}

TEST(Hamiltonian, CounterRotatingElement) {
  SystemParams p;
  p.omega = 1.0;
  p.lambda = 0.8;
  const Mat4 h = hamiltonian(p);
  EXPECT_DOUBLE_EQ(h(0, 3).real(), 0.4);
  EXPECT_DOUBLE_EQ(h(1, 2).real(), 0.4);
  EXPECT_LT(hermiticity_error(h), 1e-16);
}

TEST(Frame, DiagonalisesHamiltonian) {
  for (double lam : {0.0, 0.1, 1.0, 10.0}) {
    SystemParams p;
    p.omega = 1.0;
    p.lambda = lam;
    const DressedFrame f = dressed_frame(p);
    const Mat4 hd = to_dressed(hamiltonian(p), f);
    EXPECT_LT(max_abs_diff(hd, Mat4::diagonal({f.energies[0], f.energies[1], f.energies[2], f.energies[3]})), 1e-14) << "lambda " << lam;
    EXPECT_LT(max_abs_diff(f.unitary.adjoint() * f.unitary, Mat4::identity()), 1e-15);
  }
}

TEST(Frame, UncoupledLimit) {
  SystemParams p;
  p.omega = 1.0;
  p.lambda = 0.0;
  const DressedFrame f = dressed_frame(p);
  EXPECT_DOUBLE_EQ(f.alpha_plus, 1.0);
  EXPECT_DOUBLE_EQ(f.alpha_minus, 0.0);
  EXPECT_NEAR(f.alpha, -std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(f.eta, std::sqrt(0.5), 1e-15);
  EXPECT_DOUBLE_EQ(f.bohr_I, 1.0);
  EXPECT_DOUBLE_EQ(f.bohr_II, 1.0);
}

TEST(Frame, BohrFrequenciesAtEqualCoupling) {
  SystemParams p;
  p.omega = 1.0;
  p.lambda = 1.0;
  const DressedFrame f = dressed_frame(p);
  EXPECT_NEAR(f.bohr_I, 0.6180339887498949, 1e-15);
  EXPECT_NEAR(f.bohr_II, 1.6180339887498949, 1e-15);
}

TEST(Frame, BohrProductIsOmegaSquared) {
  for (double lam : {0.01, 0.5, 3.0, 40.0}) {
    SystemParams p;
    p.omega = 1.7;
    p.lambda = lam;
    const DressedFrame f = dressed_frame(p);
    EXPECT_NEAR(f.bohr_I * f.bohr_II, p.omega * p.omega, 1e-13);
    EXPECT_NEAR(f.energies[1] - f.energies[0], f.bohr_I, 1e-14);
    EXPECT_NEAR(f.energies[3] - f.energies[2], f.bohr_I, 1e-14);
    EXPECT_NEAR(f.energies[2] - f.energies[0], f.bohr_II, 1e-14);
    EXPECT_NEAR(f.energies[3] - f.energies[1], f.bohr_II, 1e-14);
  }
}

TEST(Frame, CouplingAmplitudes) {
  // <a|sx2|b> = alpha, <c|sx2|d> = -alpha, <a|sx2|c> = <b|sx2|d> = eta
  for (double lam : {0.0, 0.3, 1.0, 10.0}) {
    SystemParams p;
    p.omega = 1.0;
    p.lambda = lam;
    const DressedFrame f = dressed_frame(p);
    const Mat4 s = to_dressed(sigma_x_q2(), f);
    EXPECT_NEAR(s(0, 1).real(), f.alpha, 1e-14);
    EXPECT_NEAR(s(2, 3).real(), -f.alpha, 1e-14);
    EXPECT_NEAR(s(0, 2).real(), f.eta, 1e-14);
    EXPECT_NEAR(s(1, 3).real(), f.eta, 1e-14);
    EXPECT_NEAR(f.alpha, -(f.alpha_plus + f.alpha_minus) / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(f.alpha * f.alpha + f.eta * f.eta, 1.0, 1e-14);
    // nothing else couples
    EXPECT_NEAR(std::abs(s(0, 3)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s(1, 2)), 0.0, 1e-14);
  }
}

TEST(SpectralDensity, PeakAndHalfWidth) {
  const SystemParams p = fig2();
  EXPECT_DOUBLE_EQ(spectral_density(p, p.omega0), p.gamma0);
  EXPECT_NEAR(spectral_density(p, p.omega0 + p.gamma_width), p.gamma0 / 2, 1e-9 * p.gamma0);
  EXPECT_NEAR(spectral_density(p, p.omega0 - p.gamma_width), p.gamma0 / 2, 1e-9 * p.gamma0);
}

TEST(SpectralDensity, Fig2PlugIn) {
  // oracle: 0.9936406995230525 gamma0
  EXPECT_NEAR(spectral_density(fig2(), 4e9) / 5e7, 0.9936406995230525, 1e-14);
}

TEST(Occupancy, Examples) {
  EXPECT_EQ(thermal_occupancy(1e9, 0.0), 0.0);
  const double temp = 0.01;
  EXPECT_NEAR(thermal_occupancy(std::log(2.0) * kBoltzmannOverHbar * temp, temp), 1.0, 1e-14);
  // oracle: 0.3966426823042646
  EXPECT_NEAR(thermal_occupancy(2.472e9, 1.5e-2), 0.3966426823042646, 1e-13);
  EXPECT_THROW(thermal_occupancy(0.0, 1.0), NonPositiveFrequency);
  EXPECT_THROW(thermal_occupancy(-1.0, 1.0), NonPositiveFrequency);
}

TEST(Rates, ZeroTemperature) {
  SystemParams p = fig2();
  p.temperature = 0.0;
  const DressedFrame f = dressed_frame(p);
  const RateSet r = rate_set(p, f);
  EXPECT_EQ(r.c_bar_I, 0.0);
  EXPECT_EQ(r.c_bar_II, 0.0);
  EXPECT_EQ(r.gamma_bar_phen, 0.0);
  EXPECT_DOUBLE_EQ(r.c_I, f.alpha * f.alpha * spectral_density(p, f.bohr_I));
  EXPECT_DOUBLE_EQ(r.c_II, f.eta * f.eta * spectral_density(p, f.bohr_II));
}

TEST(Rates, UncoupledChannelsAreEqual) {
  SystemParams p = fig3();
  p.lambda = 0.0;
  const DressedFrame f = dressed_frame(p);
  const RateSet r = rate_set(p, f);
  EXPECT_NEAR(r.c_I, r.gamma_phen / 2, 1e-12 * r.gamma_phen);
  EXPECT_NEAR(r.c_II, r.gamma_phen / 2, 1e-12 * r.gamma_phen);
}

TEST(Rates, KmsRatioFig3) {
  const SystemParams p = fig3();
  const DressedFrame f = dressed_frame(p);
  const RateSet r = rate_set(p, f);
  // oracle: 0.28397759021180907
  EXPECT_NEAR(r.gamma_bar_I / r.gamma_I, 0.28397759021180907, 1e-13);
  EXPECT_NEAR(r.gamma_bar_II / r.gamma_II, std::exp(-f.bohr_II / (kBoltzmannOverHbar * p.temperature)), 1e-14);
  EXPECT_NEAR(r.c_bar_I / r.c_I, r.gamma_bar_I / r.gamma_I, 1e-14);
}

TEST(Rates, AllFiniteAndNonNegative) {
  for (double temp : {0.0, 1e-4, 1e-2, 1.0, 100.0}) {
    SystemParams p = fig2();
    p.temperature = temp;
    const RateSet r = rate_set(p, dressed_frame(p));
    for (double v : {r.gamma_I, r.gamma_II, r.gamma_bar_I, r.gamma_bar_II, r.gamma_phen, r.gamma_bar_phen}) {
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_GE(v, 0.0);
    }
  }
}

TEST(Fairness, UncoupledHasNoDeviation) {
  SystemParams p = fig3();
  p.lambda = 0.0;
  const FairnessReport r = fairness_check(p);
  EXPECT_EQ(r.worst(), 0.0);
  EXPECT_FALSE(r.unfair);
}

TEST(Fairness, Fig2SpectralDeviationSmall) {
  const FairnessReport r = fairness_check(fig2());
  EXPECT_LT(r.j_dev_I, 0.02);
  EXPECT_LT(r.j_dev_II, 0.02);
}

TEST(Fairness, NarrowBathFlagged) {
  SystemParams p;
  p.omega = 1.0;
  p.lambda = 1.0;
  p.gamma0 = 1e-3;
  p.gamma_width = 0.01;
  p.omega0 = 1.0;
  const FairnessReport r = fairness_check(p);
  EXPECT_TRUE(r.unfair);
  EXPECT_GT(r.j_dev_II, 0.15);
}

TEST(Fairness, StrongDampingWarning) {
  const SystemParams fig1{4e8, 4e9, 5e8, 5e10, 8e8, 0.0};
  EXPECT_TRUE(fairness_check(fig1).strong_damping);
  EXPECT_FALSE(fairness_check(fig2()).strong_damping);
}

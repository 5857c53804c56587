#include <gtest/gtest.h>

#include <cmath>

#include "qbath/basis.hpp"
#include "qbath/metrics.hpp"
#include "qbath/phenomenological.hpp"
#include "test_support.hpp"

using namespace qbath;

namespace {

SystemParams fig1() { return {4e8, 4e9, 5e8, 5e10, 8e8, 0.0}; }
SystemParams fig2() { return {4e9, 4e9, 5e7, 5e10, 8e9, 5e-4}; }
SystemParams fig3() { return {4e9, 4e9, 5e7, 5e10, 8e9, 1.5e-2}; }

Generator generic_phenom_generator(const SystemParams& p, const RateSet& r) {
  const std::array<Channel, 2> ch{{{r.gamma_phen, kron(Mat2::identity(), pauli::lowering())},
                                   {r.gamma_bar_phen, kron(Mat2::identity(), pauli::raising())}}};
  return lindblad_generator(hamiltonian(p), ch, Basis::Computational);
}

using Frozen = std::array<std::array<double, 2>, 16>;

// Computational-basis state at t = 1e-7 s from |1,0>, numpy oracle (expm).
constexpr Frozen kFig2Phenom{{{0.7833027380875502, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-0.18343495839492976, 0.0006479459700514753},
                              {0.0, 0.0}, {0.1058185669737664, 0.0}, {0.0, 0.034390960560006845}, {0.0, 0.0},
                              {0.0, 0.0}, {0.0, -0.03439096056000496}, {0.061167716265912477, 0.0}, {0.0, 0.0},
                              {-0.18343495839492976, -0.0006479459700491206}, {0.0, 0.0}, {0.0, 0.0}, {0.049710978672788536, 0.0}}};
constexpr Frozen kFig3Phenom{{{0.6544720346051072, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-0.14783018170380946, 0.000633343967430291},
                              {0.0, 0.0}, {0.1517917611181086, 0.0}, {0.0, 0.0159542043634711}, {0.0, 0.0},
                              {0.0, 0.0}, {0.0, -0.015954204363469747}, {0.13047255902771035, 0.0}, {0.0, 0.0},
                              {-0.14783018170380935, -0.0006333439674308576}, {0.0, 0.0}, {0.0, 0.0}, {0.06326364524906825, 0.0}}};

Mat4 frozen_matrix(const Frozen& z) {
  Mat4 m;
  for (std::size_t k = 0; k < 16; ++k) m(k / 4, k % 4) = cplx{z[k][0], z[k][1]};
  return m;
}

}  // namespace

TEST(PhenomRhs, EqualsGenericLindbladForm) {
  for (const SystemParams& p : {fig1(), fig2(), fig3(), SystemParams{1.0, 0.7, 0.1, 5.0, 2.0, 1e-11}}) {
    const RateSet r = rate_set(p, dressed_frame(p));
    const Generator a = phenom_generator(p, r);
    const Generator b = generic_phenom_generator(p, r);
    const double scale = b.matrix.max_abs();
    EXPECT_LT(max_abs_diff(a.matrix, b.matrix), 1e-14 * scale);
  }
}

TEST(PhenomRhs, UnitaryDiagonalStateIsFixed) {
  SystemParams p = fig2();
  p.gamma0 = 0.0;
  const RateSet r = rate_set(p, dressed_frame(p));
  PhenomStateVector s;
  s.populations = {0.3, 0.2, 0.2, 0.3};  // XX coupling mixes 00-11 and 01-10 unless these pairs match
  const auto d = phenom_rhs(s, p, r);
  for (double v : d.coordinates()) EXPECT_EQ(v, 0.0);
}

TEST(PhenomRhs, DecayFromState01) {
  const SystemParams p = fig2();
  RateSet r = rate_set(p, dressed_frame(p));
  r.gamma_bar_phen = 0.0;
  PhenomStateVector s;
  s.populations = {0.0, 1.0, 0.0, 0.0};
  const auto d = phenom_rhs(s, p, r);
  EXPECT_DOUBLE_EQ(d.populations[0], r.gamma_phen);
  EXPECT_DOUBLE_EQ(d.populations[1], -r.gamma_phen);
  EXPECT_EQ(d.coherences[PhenomStateVector::r23], (cplx{0.0, p.lambda / 2}));
}

TEST(PhenomRhs, TraceOfDerivativeVanishes) {
  const SystemParams p = fig3();
  const RateSet r = rate_set(p, dressed_frame(p));
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = PhenomStateVector::from_matrix(fixture::random_density());
    const auto d = phenom_rhs(s, p, r);
    EXPECT_NEAR(d.populations[0] + d.populations[1] + d.populations[2] + d.populations[3], 0.0,
                1e-6 * r.gamma_phen);
  }
}

TEST(PhenomPropagate, TimeZero) {
  const SystemParams p = fig2();
  const RateSet r = rate_set(p, dressed_frame(p));
  const auto rho0 = validate_density(projector(ket(1, 0)));
  const auto traj = propagate_phenom(rho0, p, r, TimeGrid::uniform(1e-9, 2));
  EXPECT_EQ(traj.states.front().matrix(), rho0.matrix());
}

TEST(PhenomPropagate, MatchesFrozenOracle) {
  for (const auto& [p, frozen] : {std::pair{fig2(), kFig2Phenom}, std::pair{fig3(), kFig3Phenom}}) {
    const RateSet r = rate_set(p, dressed_frame(p));
    const auto traj = propagate_phenom(validate_density(projector(ket(1, 0))), p, r, TimeGrid::uniform(1e-7, 2));
    EXPECT_LT(max_abs_diff(traj.states.back().matrix(), frozen_matrix(frozen)), 1e-8);
  }
}

TEST(PhenomPropagate, SingleQubitDecay) {
  SystemParams p = fig2();
  p.temperature = 0.0;
  p.lambda = 0.0;
  const RateSet r = rate_set(p, dressed_frame(p));
  const auto traj = propagate_phenom(validate_density(projector(ket(0, 1))), p, r,
                                     TimeGrid::uniform(3.0 / r.gamma_phen, 4));
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    EXPECT_NEAR(traj.states[k](1, 1).real(), std::exp(-r.gamma_phen * traj.times[k]), 1e-9);
}

TEST(PhenomPropagate, LongTimeReachesClosedForm) {
  const SystemParams p = fig2();
  const RateSet r = rate_set(p, dressed_frame(p));
  const double t = 50.0 / (r.gamma_phen + r.gamma_bar_phen);
  const auto traj = propagate_phenom(validate_density(projector(ket(1, 0))), p, r, TimeGrid::uniform(t, 3));
  EXPECT_LT(max_abs_diff(traj.states.back().matrix(), steady_state_phenom(p, r).matrix()), 1e-6);
}

TEST(PhenomSteady, IsStationary) {
  for (const SystemParams& p : {fig1(), fig2(), fig3()}) {
    const RateSet r = rate_set(p, dressed_frame(p));
    const auto d = phenom_rhs(steady_state_phenom(p, r), p, r);
    for (double v : d.coordinates()) EXPECT_LE(std::abs(v), 1e-12 * (r.gamma_phen + r.gamma_bar_phen));
  }
}

TEST(PhenomSteady, MatchesFrozenOracle) {
  // numpy null space of the generic Lindblad superoperator, fig2 and fig3 presets
  struct Case {
    SystemParams p;
    std::array<double, 4> pops;
    cplx r14, r23;
  };
  const Case cases[] = {
      {fig2(), {0.8499946006669856, 0.049999228666711165, 0.05000694199959136, 0.04999922866671186},
       {-0.19999691466684835, 0.0006210158568500602}, {0.0, -0.0006210158568500524}},
      {fig3(), {0.6760288693964454, 0.13165511123818324, 0.13166513847414146, 0.0606508808912298},
       {-0.15384199031731433, 0.0006210092465475006}, {0.0, -0.000621009246547496}},
      {fig1(), {0.2804948695648698, 0.2385925330816632, 0.2423200642718039, 0.23859253308166312},
       {-0.0954370132326652, 0.0298221580170948}, {0.0, -0.0298221580170948}},
  };
  for (const auto& c : cases) {
    const auto s = steady_state_phenom(c.p, rate_set(c.p, dressed_frame(c.p)));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.populations[i], c.pops[i], 1e-12);
    EXPECT_NEAR(std::abs(s.coherences[PhenomStateVector::r14] - c.r14), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s.coherences[PhenomStateVector::r23] - c.r23), 0.0, 1e-12);
  }
}

TEST(PhenomSteady, ZeroTemperatureIsNotGround) {
  SystemParams p = fig2();
  p.temperature = 0.0;
  const RateSet r = rate_set(p, dressed_frame(p));
  const auto s = steady_state_phenom(p, r);
  const double g = r.gamma_phen;
  const cplx want{0.0, -p.lambda * g / (2.0 * (g * g + 2.0 * p.lambda * p.lambda + 8.0 * p.omega * p.omega))};
  EXPECT_NEAR(std::abs(s.coherences[PhenomStateVector::r23] - want), 0.0, 1e-15);
  EXPECT_GT(std::abs(s.coherences[PhenomStateVector::r23]), 0.0);
}

TEST(PhenomSteady, PopulationsSumToOne) {
  for (int trial = 0; trial < 100; ++trial) {
    SystemParams p;
    p.omega = std::pow(10.0, fixture::uniform(6.0, 10.0));
    p.lambda = p.omega * std::pow(10.0, fixture::uniform(-3.0, 1.0));
    p.gamma0 = p.omega * std::pow(10.0, fixture::uniform(-4.0, -1.0));
    p.gamma_width = p.omega * std::pow(10.0, fixture::uniform(-1.0, 2.0));
    p.omega0 = p.omega * fixture::uniform(0.5, 3.0);
    p.temperature = std::pow(10.0, fixture::uniform(-5.0, 0.0));
    const auto s = steady_state_phenom(p, rate_set(p, dressed_frame(p)));
    EXPECT_NEAR(s.populations[0] + s.populations[1] + s.populations[2] + s.populations[3], 1.0, 1e-12);
  }
}

TEST(PhenomSteady, DegenerateRatesRejected) {
  SystemParams p = fig2();
  p.gamma0 = 0.0;
  EXPECT_THROW(steady_state_phenom(p, rate_set(p, dressed_frame(p))), DegenerateRates);
}

TEST(PhenomSteadyDressed, EqualsGenericBasisChange) {
  for (const SystemParams& p : {fig1(), fig2(), fig3()}) {
    const DressedFrame f = dressed_frame(p);
    const RateSet r = rate_set(p, f);
    const auto direct = steady_state_phenom_dressed(p, r, f);
    const auto generic = change_basis(steady_state_phenom(p, r).density(), f, Basis::Dressed);
    EXPECT_LT(max_abs_diff(direct.matrix(), generic.matrix()), 1e-12);
  }
}

TEST(PhenomSteadyDressed, BcCoherenceForm) {
  const SystemParams p = fig3();
  const DressedFrame f = dressed_frame(p);
  const RateSet r = rate_set(p, f);
  const auto s = steady_state_phenom(p, r);
  const auto d = steady_state_phenom_dressed(p, r, f);
  const cplx want{0.5 * (s.populations[2] - s.populations[1]), -s.coherences[PhenomStateVector::r23].imag()};
  EXPECT_NEAR(std::abs(d(1, 2) - want), 0.0, 1e-15);
}

TEST(PhenomSteadyDressed, StrongCouplingZeroTemperatureUnentangled) {
  const SystemParams p = fig1();
  const auto s = steady_state_phenom(p, rate_set(p, dressed_frame(p)));
  EXPECT_EQ(concurrence_x(XStateElements::from_computational(s.density())), 0.0);
}

TEST(PhenomPropagate, LongWeakCouplingSpanKeepsTrace) {
  // ~1e8 RK4 steps; rounding alone used to push the trace past 1e-8
  const SystemParams p{5e6, 4e4, 5e2, 5e5, 1e7, 0.0};
  const RateSet r = rate_set(p, dressed_frame(p));
  const auto traj = propagate_phenom(validate_density(projector(ket(1, 0))), p, r, TimeGrid::uniform(0.8, 400));
  EXPECT_NEAR(traj.states.back().matrix().trace().real(), 1.0, 1e-12);
}

TEST(PhenomPropagate, TraceRowLeftAloneForLossyGenerator) {
  const SystemParams p = fig2();
  const RateSet r = rate_set(p, dressed_frame(p));
  Generator g = phenom_generator(p, r);
  EXPECT_TRUE(conserves_trace(g));
  g.matrix(0, 0) -= 1e7;  // population leak
  EXPECT_FALSE(conserves_trace(g));
  EXPECT_THROW(propagate_numeric(validate_density(projector(ket(0, 0))), g, TimeGrid::uniform(1e-6, 3),
                                 default_max_step(p, r)),
               StepTooLarge);
}

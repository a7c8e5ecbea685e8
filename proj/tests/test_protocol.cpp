#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "rqt/protocol.hpp"

using namespace rqt;
using Catch::Approx;

namespace {

const double isq2 = 1.0 / std::sqrt(2.0);

InfoQubit balanced_info(std::optional<double> r0 = std::nullopt) {
  std::optional<AccelerationParam> acc;
  if (r0) acc = AccelerationParam(*r0);
  return InfoQubit(cplx{isq2, 0}, cplx{isq2, 0}, acc);
}

InfoQubit random_info(std::mt19937& rng, bool complex_ok = true) {
  std::normal_distribution<double> g(0.0, 1.0);
  cplx a{g(rng), complex_ok ? g(rng) : 0.0};
  cplx b{g(rng), complex_ok ? g(rng) : 0.0};
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return InfoQubit(a / n, b / n);
}

RegisterAcceleration uniform3(double r) {
  return RegisterAcceleration::uniform(3, AccelerationParam(r));
}

}  // namespace

TEST_CASE("information density operator") {
  const DensityOperator pure = info_density(InfoQubit(cplx{1, 0}, cplx{0, 0}));
  CHECK(pure.entry(0, 0).real() == Approx(1.0));

  // accelerated |0>: diag(C0^2, S0^2)
  const DensityOperator acc0 =
      info_density(InfoQubit(cplx{1, 0}, cplx{0, 0}, AccelerationParam(0.3)));
  CHECK(acc0.entry(0, 0).real() == Approx(std::cos(0.3) * std::cos(0.3)));
  CHECK(acc0.entry(1, 1).real() == Approx(std::sin(0.3) * std::sin(0.3)));
  CHECK(std::abs(acc0.entry(0, 1)) == Approx(0.0).margin(tol::exact));

  // balanced amplitudes, r0 = 0.5: off-diagonal alpha beta C0 = cos(0.5)/2
  const DensityOperator accb = info_density(balanced_info(0.5));
  CHECK(accb.entry(0, 1).real() == Approx(0.5 * std::cos(0.5)).margin(tol::exact));
  CHECK(accb.entry(0, 1).real() == Approx(0.4387912809451864).margin(1e-12));

  // general real amplitudes reproduce the tabulated pattern
  std::mt19937 rng(41);
  for (int it = 0; it < 10; ++it) {
    const InfoQubit q = random_info(rng, false);
    const double a = q.alpha.real(), b = q.beta.real();
    const double r0 = 0.1 + 0.07 * it;
    const DensityOperator rho =
        info_density(InfoQubit(q.alpha, q.beta, AccelerationParam(r0)));
    const double C0 = std::cos(r0), S0 = std::sin(r0);
    CHECK(rho.entry(0, 0).real() == Approx(a * a * C0 * C0).margin(tol::exact));
    CHECK(rho.entry(0, 1).real() == Approx(a * b * C0).margin(tol::exact));
    CHECK(rho.entry(1, 1).real() == Approx(a * a * S0 * S0 + b * b).margin(tol::exact));
  }
}

TEST_CASE("normalization of the information qubit is enforced") {
  CHECK_THROWS_AS(InfoQubit(cplx{1, 0}, cplx{1, 0}), std::invalid_argument);
}

TEST_CASE("Bell projectors") {
  // psi+ applied to |00>: picks the (|00>+|11>)/2 component, squared norm 1/2
  const auto r = project(outer(StateVector::basis(2, 0)), bell_projector(BellOutcome::PsiPlus),
                         {0, 1});
  CHECK(r.probability == Approx(0.5));

  // the four projectors sum to the identity
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      cplx sum{0, 0};
      for (BellOutcome b : kAllBellOutcomes) sum += bell_projector(b).entry(i, j);
      CHECK(std::abs(sum - (i == j ? cplx{1, 0} : cplx{0, 0})) < tol::exact);
    }

  // <01| phi- |10> = -1/2
  CHECK(bell_projector(BellOutcome::PhiMinus).entry(1, 2).real() == Approx(-0.5));
}

TEST_CASE("Charlie projectors") {
  CHECK(project(outer(StateVector::basis(1, 0)), charlie_projector(CharlieOutcome::Z0), {0})
            .probability == Approx(1.0));
  CHECK(project(outer(StateVector::basis(1, 0)), charlie_projector(CharlieOutcome::XPlus), {0})
            .probability == Approx(0.5));
  const StateVector minus(1, {cplx{isq2, 0}, cplx{-isq2, 0}});
  CHECK(project(outer(minus), charlie_projector(CharlieOutcome::XMinus), {0}).probability ==
        Approx(1.0));
}

TEST_CASE("correction table") {
  CHECK(correction_for(ChannelKind::W, BellOutcome::PsiPlus, CharlieOutcome::Z0).pauli ==
        Pauli::X);
  CHECK(correction_for(ChannelKind::GHZ, BellOutcome::PhiMinus, CharlieOutcome::XMinus).pauli ==
        Pauli::X);
  CHECK(correction_for(ChannelKind::GHZLike, BellOutcome::PsiMinus, CharlieOutcome::Z1).pauli ==
        Pauli::Z);
  for (BellOutcome b : kAllBellOutcomes) {
    CHECK_FALSE(correction_for(ChannelKind::W, b, CharlieOutcome::Z1).valid);
    CHECK(correction_for(ChannelKind::GHZLike, b, CharlieOutcome::Z1).valid);
  }
  CHECK_THROWS_AS(correction_for(ChannelKind::W, BellOutcome::PsiPlus, CharlieOutcome::XPlus),
                  std::domain_error);
  CHECK_THROWS_AS(correction_for(ChannelKind::GHZ, BellOutcome::PsiPlus, CharlieOutcome::Z0),
                  std::domain_error);
}

TEST_CASE("Pauli corrections are involutions") {
  std::mt19937 rng(59);
  for (int it = 0; it < 10; ++it) {
    const InfoQubit q = random_info(rng);
    const DensityOperator rho = info_density(q);
    for (Pauli p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
      const DensityOperator twice = apply(pauli_op(p), apply(pauli_op(p), rho, {0}), {0});
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          CHECK(std::abs(twice.entry(i, j) - rho.entry(i, j)) < tol::exact);
    }
  }
}

TEST_CASE("teleportation is exact on every valid branch at zero acceleration") {
  std::mt19937 rng(61);
  for (int it = 0; it < 8; ++it) {
    const InfoQubit info = random_info(rng);  // complex amplitudes included
    for (ChannelKind kind : kAllChannels) {
      const ChannelRealization chan = ChannelRealization::make(kind, uniform3(0.0));
      for (const BranchResult& b : enumerate_branches(chan, info)) {
        if (!b.valid) continue;
        CHECK(b.fidelity_oracle == Approx(1.0).margin(tol::exact));
      }
    }
  }
}

TEST_CASE("W branch fidelity at the reference point") {
  // alpha^2 = 1/2, r1 = r2 = r3 = 0.5, branch (psi+, z0); the tabulated
  // polynomial and the full four-qubit pipeline agree at 0.6816419756…
  const ChannelRealization chan = ChannelRealization::make(ChannelKind::W, uniform3(0.5));
  const BranchResult b =
      run_branch(chan, balanced_info(), BellOutcome::PsiPlus, CharlieOutcome::Z0);
  REQUIRE(b.fidelity_closed.has_value());
  CHECK(*b.fidelity_closed == Approx(0.6816419756498).margin(1e-9));
  CHECK(b.fidelity_oracle == Approx(*b.fidelity_closed).margin(tol::exact));
  CHECK(b.valid);
}

TEST_CASE("W failure branches are flagged regardless of acceleration") {
  for (double r : {0.0, 0.3, 0.6}) {
    const ChannelRealization chan = ChannelRealization::make(ChannelKind::W, uniform3(r));
    for (BellOutcome bell : kAllBellOutcomes) {
      const BranchResult b =
          run_branch(chan, balanced_info(), bell, CharlieOutcome::Z1);
      CHECK_FALSE(b.valid);
    }
  }
}

TEST_CASE("branch probabilities sum to one") {
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi / 4);
  for (int it = 0; it < 12; ++it) {
    const ChannelKind kind = kAllChannels[static_cast<std::size_t>(it) % 3];
    RegisterAcceleration acc({AccelerationParam(u(rng)), AccelerationParam(u(rng)),
                              AccelerationParam(u(rng))});
    const ChannelRealization chan = ChannelRealization::make(kind, acc);
    InfoQubit info = random_info(rng);
    if (it % 2 == 0) info = InfoQubit(info.alpha, info.beta, AccelerationParam(u(rng)));
    double total = 0.0;
    for (const BranchResult& b : enumerate_branches(chan, info)) total += b.probability;
    CHECK(total == Approx(1.0).margin(tol::chain));
  }
}

TEST_CASE("oracle fidelity is invariant under a global phase") {
  const ChannelRealization chan = ChannelRealization::make(ChannelKind::GHZ, uniform3(0.4));
  const cplx phase = std::polar(1.0, 1.1);
  const InfoQubit plain(cplx{0.6, 0}, cplx{0.8, 0});
  const InfoQubit rotated(phase * cplx{0.6, 0}, phase * cplx{0.8, 0});
  for (const CharlieOutcome c : charlie_domain(ChannelKind::GHZ))
    for (BellOutcome b : kAllBellOutcomes) {
      const double f1 = run_branch(chan, plain, b, c).fidelity_oracle;
      const double f2 = run_branch(chan, rotated, b, c).fidelity_oracle;
      CHECK(f1 == Approx(f2).margin(tol::exact));
    }
}

TEST_CASE("closed forms evaluate to one at rest and are keyed to their branches") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> th(0.0, 2.0 * std::numbers::pi);
  for (int it = 0; it < 10; ++it) {
    const double t = th(rng);
    const double a = std::cos(t), b = std::sin(t);
    for (ChannelKind kind : kAllChannels)
      for (InfoKind ik : {InfoKind::NonAccelerated, InfoKind::Accelerated})
        for (BellOutcome bell : kAllBellOutcomes)
          for (CharlieOutcome ch : charlie_domain(kind)) {
            const auto f = closed_form_fidelity(kind, ik, bell, ch, 0, 0, 0, 0, a, b);
            CHECK(f.has_value() == has_closed_form(kind, ik, bell, ch));
            if (f) CHECK(*f == Approx(1.0).margin(tol::exact));
          }
  }
  // exactly eight tabulated expressions
  int count = 0;
  for (ChannelKind kind : kAllChannels)
    for (InfoKind ik : {InfoKind::NonAccelerated, InfoKind::Accelerated})
      for (BellOutcome bell : kAllBellOutcomes)
        for (CharlieOutcome ch : charlie_domain(kind))
          count += has_closed_form(kind, ik, bell, ch) ? 1 : 0;
  CHECK(count == 8);
}

TEST_CASE("accelerated W closed form at a resting channel") {
  // r0 = 0.4, channel at rest, balanced amplitudes:
  // (C0^4 + S0^4)/4 + 1/4 + (C0^2 + S0^2)/2 = 0.9356750…
  const auto f = closed_form_fidelity(ChannelKind::W, InfoKind::Accelerated,
                                      BellOutcome::PhiPlus, CharlieOutcome::Z0, 0.4, 0, 0, 0,
                                      isq2, isq2);
  REQUIRE(f.has_value());
  CHECK(*f == Approx(0.93567503).margin(1e-7));

  // the pipeline value at the same point differs; both are recorded by the audit
  const ChannelRealization chan = ChannelRealization::make(ChannelKind::W, uniform3(0.0));
  const BranchResult b = run_branch(chan, balanced_info(0.4), BellOutcome::PhiPlus,
                                    CharlieOutcome::Z0);
  const double C0 = std::cos(0.4), S0 = std::sin(0.4);
  const double expect = 0.25 * C0 * C0 + 0.5 * C0 + 0.25 + 0.25 * S0 * S0;
  CHECK(b.fidelity_oracle == Approx(expect).margin(tol::exact));
}

TEST_CASE("complex amplitudes disable the closed form but not the pipeline") {
  const InfoQubit complex_info(cplx{isq2, 0}, cplx{0, isq2});
  const ChannelRealization chan = ChannelRealization::make(ChannelKind::W, uniform3(0.3));
  const BranchResult b =
      run_branch(chan, complex_info, BellOutcome::PsiPlus, CharlieOutcome::Z0);
  CHECK_FALSE(b.fidelity_closed.has_value());
  CHECK(b.fidelity_oracle > 0.0);
}

TEST_CASE("average fidelity") {
  // all branches valid and exact for GHZ at rest
  const ChannelRealization ghz0 = ChannelRealization::make(ChannelKind::GHZ, uniform3(0.0));
  const AverageFidelity a1 = average_fidelity(ghz0, balanced_info());
  CHECK(a1.average == Approx(1.0).margin(tol::exact));
  CHECK(a1.valid_probability == Approx(1.0).margin(tol::chain));

  // W at rest: a third of the probability mass sits on failure branches
  const ChannelRealization w0 = ChannelRealization::make(ChannelKind::W, uniform3(0.0));
  const AverageFidelity a2 = average_fidelity(w0, balanced_info());
  CHECK(a2.valid_probability == Approx(2.0 / 3.0).margin(tol::chain));
  CHECK(a2.average == Approx(1.0).margin(tol::exact));

  // balanced amplitudes make all eight GHZ branches equivalent, so the
  // enumeration average collapses onto the reference branch
  const ChannelRealization ghz = ChannelRealization::make(ChannelKind::GHZ, uniform3(0.3));
  const AverageFidelity a3 = average_fidelity(ghz, balanced_info());
  const BranchResult ref =
      run_branch(ghz, balanced_info(), BellOutcome::PsiPlus, CharlieOutcome::XPlus);
  CHECK(a3.valid_probability == Approx(1.0).margin(tol::chain));
  CHECK(a3.average == Approx(ref.fidelity_oracle).margin(tol::chain));
}

TEST_CASE("closed-channel pipeline runs without validation") {
  // the W table carries transcription typos at asymmetric accelerations;
  // the closed-form pipeline must still produce a result for the audit
  RegisterAcceleration acc({AccelerationParam(0.1), AccelerationParam(0.4),
                            AccelerationParam(0.7)});
  const ChannelRealization chan = ChannelRealization::make(ChannelKind::W, acc);
  const BranchResult b = run_branch(chan, balanced_info(), BellOutcome::PsiPlus,
                                    CharlieOutcome::Z0, /*use_oracle=*/false);
  CHECK(b.probability > 0.0);
}

TEST_CASE("reference branches") {
  CHECK(reference_branch(ChannelKind::W) ==
        std::pair{BellOutcome::PsiPlus, CharlieOutcome::Z0});
  CHECK(reference_branch(ChannelKind::GHZ) ==
        std::pair{BellOutcome::PsiPlus, CharlieOutcome::XPlus});
  CHECK(reference_branch(ChannelKind::GHZLike) ==
        std::pair{BellOutcome::PhiPlus, CharlieOutcome::Z0});
}

TEST_CASE("full-matrix cross-check of the Bell projection") {
  // independent 16x16 brute force of projecting qubits (0,1) of
  // |psi0> (x) |W> onto psi+
  const double a = isq2, b = isq2;
  std::vector<cplx> v(16, cplx{0, 0});
  const double w = 1.0 / std::sqrt(3.0);
  // info qubit is bit 0; channel partners are bits 1..3
  for (std::size_t chan_label : {1u, 2u, 4u}) {
    v[(chan_label << 1) | 0] += a * w;
    v[(chan_label << 1) | 1] += b * w;
  }
  // psi+ projector on bits (0,1), identity on bits (2,3)
  double p = 0.0;
  for (std::size_t hi = 0; hi < 4; ++hi) {
    cplx amp{0, 0};
    // component along (|00> + |11>)/sqrt(2) for fixed high bits
    amp += v[(hi << 2) | 0] * isq2;
    amp += v[(hi << 2) | 3] * isq2;
    p += std::norm(amp);
  }
  const auto lib = project(outer(StateVector(3, {w, 0, w, 0, w, 0, 0, 0})),
                           bell_projector(BellOutcome::PsiPlus), {0, 1});
  // assemble via library tensor as well
  const DensityOperator rho_tot =
      tensor(info_density(balanced_info()), outer(minkowski_state(ChannelKind::W)));
  const auto lib2 = project(rho_tot, bell_projector(BellOutcome::PsiPlus), {0, 1});
  CHECK(lib2.probability == Approx(p).margin(tol::exact));
  CHECK(p == Approx(0.25).margin(tol::exact));  // (1 + alpha^2) / 6 at alpha^2 = 1/2
  (void)lib;
}

#include <cmath>
#include <random>

#include <doctest.h>

#include "bellbench/correlation.hpp"
#include "bellbench/types.hpp"
#include "oracles.hpp"

using namespace bellbench;

namespace {

const double root2 = std::sqrt(2.0);

double random_angle(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 180.0)(rng);
}

}  // namespace

TEST_SUITE("correlation") {

TEST_CASE("singlet density matrix has the textbook form") {
  const TwoQubitState s = singlet_state();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      double expected = 0.0;
      if ((r == 1 && c == 1) || (r == 2 && c == 2)) expected = 0.5;
      if ((r == 1 && c == 2) || (r == 2 && c == 1)) expected = -0.5;
      CHECK(std::abs(s.rho(r, c) - expected) < 1e-15);
    }
  }
  CHECK(s.is_physical());
  CHECK_NEAR((s.rho * s.rho).trace().real(), 1.0, 1e-12);  // pure

  // Both reduced states are maximally mixed.
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      std::complex<double> red_a = 0.0, red_b = 0.0;
      for (int k = 0; k < 2; ++k) {
        red_a += s.rho(2 * i + k, 2 * j + k);
        red_b += s.rho(2 * k + i, 2 * k + j);
      }
      const double expected = (i == j) ? 0.5 : 0.0;
      CHECK(std::abs(red_a - expected) < 1e-12);
      CHECK(std::abs(red_b - expected) < 1e-12);
    }
  }
}

TEST_CASE("werner family interpolates between singlet and white noise") {
  const TwoQubitState w1 = werner_state(1.0);
  CHECK((w1.rho - singlet_state().rho).cwiseAbs().maxCoeff() < 1e-15);

  const TwoQubitState w0 = werner_state(0.0);
  CHECK((w0.rho - Eigen::Matrix4cd::Identity() * 0.25).cwiseAbs().maxCoeff() <
        1e-15);

  for (double v : {0.0, 0.3, 0.9, 0.999, 1.0})
    CHECK(werner_state(v).is_physical());
  CHECK_THROWS_AS(werner_state(1.2), std::domain_error);
  CHECK_THROWS_AS(werner_state(-0.1), std::domain_error);
}

TEST_CASE("is_physical rejects a non-positive matrix") {
  TwoQubitState bad;
  bad.rho = Eigen::Matrix4cd::Zero();
  bad.rho(0, 0) = 1.2;
  bad.rho(1, 1) = -0.2;
  CHECK_FALSE(bad.is_physical());
}

TEST_CASE("singlet outcome probabilities at reference settings") {
  const TwoQubitState s = singlet_state();

  OutcomeProbabilities p = outcome_probabilities(s, {0.0, 0.0});
  CHECK_NEAR(p.pp, 0.0, 1e-12);
  CHECK_NEAR(p.pm, 0.5, 1e-12);
  CHECK_NEAR(p.mp, 0.5, 1e-12);
  CHECK_NEAR(p.mm, 0.0, 1e-12);

  p = outcome_probabilities(s, {0.0, 90.0});
  CHECK_NEAR(p.pp, 0.5, 1e-12);
  CHECK_NEAR(p.mm, 0.5, 1e-12);
  CHECK_NEAR(p.pm, 0.0, 1e-12);
  CHECK_NEAR(p.mp, 0.0, 1e-12);

  p = outcome_probabilities(s, {0.0, 22.5});
  const double lo = (1.0 - 1.0 / root2) / 4.0;  // 0.0732233...
  const double hi = (1.0 + 1.0 / root2) / 4.0;
  CHECK_NEAR(p.pp, lo, 1e-12);
  CHECK_NEAR(p.mm, lo, 1e-12);
  CHECK_NEAR(p.pm, hi, 1e-12);
  CHECK_NEAR(p.mp, hi, 1e-12);
}

TEST_CASE("singlet correlation is -cos 2(a - b)") {
  const TwoQubitState s = singlet_state();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const double a = random_angle(rng);
    const double b = random_angle(rng);
    const double expected = -std::cos(2.0 * (a - b) * testref::pi / 180.0);
    CHECK_NEAR(correlation(s, {a, b}), expected, 1e-12);
  }
  CHECK_NEAR(correlation(s, {30.0, 30.0}), -1.0, 1e-12);
  CHECK_NEAR(correlation(s, {10.0, 55.0}), 0.0, 1e-12);
}

TEST_CASE("werner correlation scales the singlet fringe by v") {
  const TwoQubitState w = werner_state(0.999);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const double a = random_angle(rng);
    const double b = random_angle(rng);
    const double expected =
        -0.999 * std::cos(2.0 * (a - b) * testref::pi / 180.0);
    CHECK_NEAR(correlation(w, {a, b}), expected, 1e-12);
  }
}

TEST_CASE("chsh at the canonical angle tuples") {
  const TwoQubitState s = singlet_state();
  CHECK_NEAR(chsh_value(s, 0.0, 45.0, 22.5, 67.5), -2.0 * root2, 1e-12);
  // Reflecting Bob's settings through 90 degrees flips the sign.
  CHECK_NEAR(chsh_value(s, 0.0, 45.0, 112.5, 157.5), 2.0 * root2, 1e-12);
  // Mixing the two tuples cancels the combination entirely.
  CHECK_NEAR(chsh_value(s, 0.0, 45.0, 22.5, 157.5), 0.0, 1e-12);
}

TEST_CASE("chsh angle symmetries") {
  const TwoQubitState s = singlet_state();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const double a = random_angle(rng), b = random_angle(rng);
    // Polarizer axes are lines: +180 degrees is the same orientation.
    CHECK_NEAR(correlation(s, {a + 180.0, b}), correlation(s, {a, b}), 1e-12);
    // Rotating one analyzer by 90 degrees swaps transmit and absorb.
    CHECK_NEAR(correlation(s, {a + 90.0, b}), -correlation(s, {a, b}), 1e-12);
  }
}

TEST_CASE("model with unit visibilities reproduces the singlet") {
  const CorrelationModel ideal;
  const TwoQubitState s = singlet_state();
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const double a = random_angle(rng), b = random_angle(rng);
    CHECK_NEAR(model_correlation(ideal, {a, b}), correlation(s, {a, b}),
               1e-12);
  }
  CHECK_NEAR(model_chsh(ideal, 0.0, 45.0, 22.5, 67.5), -2.0 * root2, 1e-12);
}

TEST_CASE("model misalignments shift the fringe phase") {
  const CorrelationModel m{1.0, 1.0, -0.9, 1.7};
  std::mt19937_64 rng(15);
  for (int i = 0; i < 50; ++i) {
    const double a = random_angle(rng), b = random_angle(rng);
    const double expected =
        -std::cos(2.0 * ((a - 0.9) - (b + 1.7)) * testref::pi / 180.0);
    CHECK_NEAR(model_correlation(m, {a, b}), expected, 1e-12);
  }
}

TEST_CASE("model chsh maxima follow 2 sqrt(vhv^2 + v45^2)") {
  // Unequal visibilities combine in quadrature, not as the mean.
  const CorrelationModel uneven{1.0, 0.999, 0.0, 0.0};
  testref::ChshMaximum best =
      testref::chsh_maximum_for_plane(testref::correlation_plane(uneven));
  CHECK_NEAR(best.s, 2.8270132649140507, 1e-9);
  CHECK_NEAR(best.s, 2.0 * std::sqrt(1.0 + 0.999 * 0.999), 1e-9);
  // The library evaluates to the same maximum at the maximizing angles.
  CHECK_NEAR(std::abs(model_chsh(uneven, best.a0_deg, best.a1_deg, best.b0_deg,
                                 best.b1_deg)),
             best.s, 1e-9);

  const CorrelationModel even{0.999, 0.999, 0.0, 0.0};
  best = testref::chsh_maximum_for_plane(testref::correlation_plane(even));
  CHECK_NEAR(best.s, 0.999 * 2.0 * root2, 1e-9);
}

TEST_CASE("werner chsh maximum scales linearly with visibility") {
  for (double v : {0.9, 0.99, 0.999}) {
    const testref::ChshMaximum best = testref::chsh_maximum_for_plane(
        testref::correlation_plane(werner_state(v)));
    CHECK_NEAR(best.s, v * 2.0 * root2, 1e-7);
    CHECK_NEAR(std::abs(chsh_value(werner_state(v), best.a0_deg, best.a1_deg,
                                   best.b0_deg, best.b1_deg)),
               v * 2.0 * root2, 1e-7);
  }
}

TEST_CASE("outcome probabilities are a distribution for random states") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 200; ++i) {
    const TwoQubitState state = testref::random_state(rng);
    const OutcomeProbabilities p =
        outcome_probabilities(state, {random_angle(rng), random_angle(rng)});
    CHECK_NEAR(p.sum(), 1.0, 1e-10);
    for (double x : {p.pp, p.pm, p.mp, p.mm}) {
      CHECK(x >= -1e-12);
      CHECK(x <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("no state and angle choice beats the quantum bound") {
  std::mt19937_64 rng(17);
  double max_seen = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const TwoQubitState state = testref::random_state(rng);
    const double s = chsh_value(state, random_angle(rng), random_angle(rng),
                                random_angle(rng), random_angle(rng));
    max_seen = std::max(max_seen, std::abs(s));
  }
  CHECK(max_seen <= 2.0 * root2 + 1e-9);
  CHECK(max_seen > 1.0);  // the sweep actually explored the landscape
}

TEST_CASE("numeric maximization matches the library value for random states") {
  std::mt19937_64 rng(18);
  for (int i = 0; i < 30; ++i) {
    const TwoQubitState state = testref::random_state(rng);
    const testref::ChshMaximum best =
        testref::chsh_maximum_for_plane(testref::correlation_plane(state));
    const double via_library =
        chsh_value(state, best.a0_deg, best.a1_deg, best.b0_deg, best.b1_deg);
    CHECK_NEAR(std::abs(via_library), best.s, 1e-7);
    CHECK(best.s <= 2.0 * root2 + 1e-9);
  }
}

}  // TEST_SUITE

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nontwist/hamiltonian.hpp"

using namespace nontwist;
using doctest::Approx;

TEST_CASE("energy values") {
  const Params p(1.5, 0.5, 0.018);
  CHECK(energy(p, {0.0, 0.0}) == -0.018);
  CHECK(energy(p, {kPi, 0.0}) == 0.018);
  CHECK(energy(p, {kPi, 1.0}) == Approx(-0.5 + 0.5 - 0.125 + 0.018).epsilon(1e-14));
  CHECK(energy(p, {kPi, 1.0}) == Approx(-0.107).epsilon(1e-12));
  CHECK(energy_profile(p, 1.0) == Approx(-0.125).epsilon(1e-14));
}

TEST_CASE("vector field") {
  const Params p(1.5, 0.5, 0.018);
  const Velocity v0 = vector_field(p, 0.0, 0.0);
  CHECK(v0.dx_dt == 0.0);
  CHECK(v0.dy_dt == 0.0);
  const Velocity v = vector_field(p, kPi / 2, 0.2);
  CHECK(v.dx_dt == Approx(0.144).epsilon(1e-14));
  CHECK(v.dy_dt == Approx(0.018).epsilon(1e-14));
}

TEST_CASE("vector field is the symplectic gradient of energy") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.5, 3.0), ub(-3.0, 3.0), uk(0.0, 0.1), ux(0.0, kTwoPi), uy(-1.5, 1.5);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const Params p(ua(rng), ub(rng), uk(rng));
    const double x = ux(rng), y = uy(rng);
    const Velocity v = vector_field(p, x, y);
    const double dHdy = (energy(p, {x, y + h}) - energy(p, {x, y - h})) / (2 * h);
    const double dHdx = (energy(p, {x + h, y}) - energy(p, {x - h, y})) / (2 * h);
    CHECK(std::abs(v.dx_dt + dHdy) <= 1e-6);
    CHECK(std::abs(v.dy_dt - dHdx) <= 1e-6);
  }
}

TEST_CASE("jacobian") {
  const Params p(1.5, 0.5, 0.018);
  const Matrix2 J = jacobian(p, {0.0, 0.0});
  CHECK(J[0][0] == 0.0);
  CHECK(J[0][1] == 1.0);
  CHECK(J[1][0] == 0.018);
  CHECK(J[1][1] == 0.0);
  CHECK(std::sqrt(eigenvalue_squared(p, {0.0, 0.0})) == Approx(0.134164).epsilon(1e-6));
  const Matrix2 K = jacobian(p, {1.3, 0.7});
  CHECK(K[0][0] + K[1][1] == 0.0);
}

TEST_CASE("reversal") {
  CHECK(reversal({0.0, 0.4}).x == 0.0);
  CHECK(reversal({kPi, 0.4}).x == Approx(kPi).epsilon(1e-15));
  const PhasePoint r = reversal({1.0, 0.3});
  CHECK(r.x == Approx(kTwoPi - 1.0).epsilon(1e-15));
  CHECK(r.y == 0.3);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ux(0.0, kTwoPi), uy(-1.5, 1.5);
  const Params p(1.5, 0.5, 0.018);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint q{ux(rng), uy(rng)};
    const PhasePoint rr = reversal(reversal(q));
    CHECK(std::abs(angle_difference(rr.x, q.x)) <= 1e-15);
    // R o X_H = -X_H o R: first component even in x, second odd.
    const Velocity v = vector_field(p, q);
    const Velocity w = vector_field(p, reversal(q));
    CHECK(std::abs(w.dx_dt - v.dx_dt) <= 1e-12);
    CHECK(std::abs(w.dy_dt + v.dy_dt) <= 1e-12);
  }
}

TEST_CASE("equilibria at b = 0.5") {
  const Params p(1.5, 0.5, 0.018);
  const auto eqs = equilibria(p);
  REQUIRE(eqs.size() == 6);
  struct Want {
    EquilibriumLabel label;
    double x, y;
    Stability s;
  };
  const Want want[] = {{EquilibriumLabel::P1, 0.0, 0.0, Stability::hyperbolic},
                       {EquilibriumLabel::P2, kPi, 0.0, Stability::elliptic},
                       {EquilibriumLabel::P3, 0.0, 1.0, Stability::elliptic},
                       {EquilibriumLabel::P4, kPi, 1.0, Stability::hyperbolic},
                       {EquilibriumLabel::P5, 0.0, 2.0, Stability::hyperbolic},
                       {EquilibriumLabel::P6, kPi, 2.0, Stability::elliptic}};
  for (const auto& w : want) {
    const auto e = find_equilibrium(eqs, w.label);
    REQUIRE(e);
    CHECK(e->position.x == Approx(w.x).epsilon(1e-15));
    CHECK(e->position.y == Approx(w.y).epsilon(1e-14));
    CHECK(e->stability == w.s);
  }
  CHECK(chain_saddle(eqs, Chain::I)->label == EquilibriumLabel::P1);
  CHECK(chain_saddle(eqs, Chain::II)->label == EquilibriumLabel::P4);
  CHECK(chain_saddle(eqs, Chain::III)->label == EquilibriumLabel::P5);
}

TEST_CASE("equilibria at the chain merger and beyond") {
  const auto four = equilibria(Params(1.5, 0.5625, 0.018));
  REQUIRE(four.size() == 4);
  const auto A = find_equilibrium(four, EquilibriumLabel::A);
  const auto B = find_equilibrium(four, EquilibriumLabel::B);
  REQUIRE(A);
  REQUIRE(B);
  CHECK(A->position.y == Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(B->position.x == Approx(kPi).epsilon(1e-15));
  CHECK(A->stability == Stability::degenerate);
  CHECK(B->stability == Stability::degenerate);
  CHECK(std::abs(A->eigenvalue_squared) <= kDegeneracyTolerance);

  const auto two = equilibria(Params(1.5, 0.6, 0.018));
  REQUIRE(two.size() == 2);
  CHECK(two[0].position.y == 0.0);
  CHECK(two[1].position.y == 0.0);

  CHECK_THROWS_AS(equilibria(Params(1.5, 0.0, 0.018)), DomainError);
}

TEST_CASE("equilibrium properties over random parameters") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ua(0.5, 3.0), u01(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = ua(rng);
    const double b = u01(rng) < 0.5 ? -5.0 * u01(rng) - 1e-3 : a * a / 2.0 * u01(rng) + 1e-3;
    const double k = 0.001 + 0.099 * u01(rng);
    const Params p(a, b, k);
    const auto eqs = equilibria(p);
    const double disc = a * a - 4.0 * b;
    CHECK(eqs.size() == (disc > 0 ? 6u : disc == 0 ? 4u : 2u));

    for (const auto& e : eqs) {
      const Velocity v = vector_field(p, e.position);
      // F is evaluated in double: its rounding floor grows with the size of its terms.
      const double y = std::abs(e.position.y);
      CHECK(std::abs(v.dx_dt) <= 1e-12 * (1.0 + y + a * y * y + std::abs(b) * y * y * y));
      CHECK(std::abs(v.dy_dt) <= 1e-12);
    }
    // Opposite pairing across the symmetry lines.
    for (const auto& e : eqs) {
      if (e.position.x != 0.0) continue;
      for (const auto& f : eqs)
        if (f.position.x != 0.0 && f.position.y == e.position.y && e.stability != Stability::degenerate) {
          CHECK(e.eigenvalue_squared * f.eigenvalue_squared < 0.0);
          CHECK(e.stability != f.stability);
        }
    }
    // Alternation along each line.
    if (disc > 0) {
      for (const auto& line : kSymmetryLines) {
        std::vector<Equilibrium> on;
        for (const auto& e : eqs)
          if (line.contains(e.position)) on.push_back(e);
        std::sort(on.begin(), on.end(), [](const auto& l, const auto& r) { return l.position.y < r.position.y; });
        REQUIRE(on.size() == 3);
        CHECK(on[0].stability != on[1].stability);
        CHECK(on[1].stability != on[2].stability);
      }
    }
  }
}

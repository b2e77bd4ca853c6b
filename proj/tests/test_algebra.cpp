#include "support.hpp"

using namespace qhm;
using namespace qhm::test;

TEST_CASE("D and E are associative *-algebras with unit") {
  for (Rational nu : {Rational(1, 8), Rational(1, 4)}) {
    GridSpec g = small_grid(1, Rational(1, 2), nu);
    std::mt19937_64 rng(11);
    for (int s = 0; s < 3; ++s) {
      CAPTURE(s);
      DField a = random_D(g, rng), b = random_D(g, rng), c = random_D(g, rng);
      CHECK(rel_diff(d_mul(d_mul(a, b), c), d_mul(a, d_mul(b, c))) < 1e-12);
      CHECK(rel_diff(d_star(d_mul(a, b)), d_mul(d_star(b), d_star(a))) < 1e-12);
      CHECK(rel_diff(d_star(d_star(a)), a) < 1e-15);
      CHECK(rel_diff(d_mul(make_identity_D(g), a), a) < 1e-15);
      CHECK(std::abs(trace_D(d_mul(a, b)) - trace_D(d_mul(b, a))) < 1e-12);

      EField x = random_E(g, rng), y = random_E(g, rng), z = random_E(g, rng);
      CHECK(rel_diff(e_mul(e_mul(x, y), z), e_mul(x, e_mul(y, z))) < 1e-12);
      CHECK(rel_diff(e_star(e_mul(x, y)), e_mul(e_star(y), e_star(x))) < 1e-12);
      CHECK(rel_diff(e_mul(x, make_identity_E(g)), x) < 1e-15);
      CHECK(std::abs(trace_E(e_mul(x, y)) - trace_E(e_mul(y, x))) < 1e-12);
      CHECK(invariance_residual(x) < 1e-12);
      CHECK(invariance_residual(a) < 1e-12);
    }
  }
}

TEST_CASE("identity traces") {
  GridSpec g = small_grid(1, Rational(3, 4), Rational(1, 8));
  CHECK(std::abs(trace_D(make_identity_D(g)) - 1.0) < 1e-14);
  CHECK(std::abs(trace_E(make_identity_E(g)) - 1.5) < 1e-14);
}

TEST_CASE("E is noncommutative") {
  std::mt19937_64 rng(4);
  for (Rational nu : {Rational(1, 8), Rational(1, 4)}) {
    GridSpec g = small_grid(1, Rational(1, 2), nu);
    EField a = random_E(g, rng), b = random_E(g, rng);
    CHECK(max_abs(e_mul(a, b) - e_mul(b, a)) > 1e-3);
    // p = 0 multiplication-type elements commute.
    EField m1 = make_mult_type_E(g, [](double, double y) { return cplx(std::cos(2 * kPi * y)); });
    EField m2 = make_mult_type_E(g, [](double, double y) { return cplx(0.0, std::sin(4 * kPi * y)); });
    CHECK(max_abs(e_mul(m1, m2) - e_mul(m2, m1)) < 1e-15);
  }
}

TEST_CASE("multiplication-type elements multiply pointwise") {
  GridSpec g = small_grid(1, Rational(1, 2), Rational(1, 4));
  const double mu = g.mu_d();
  auto F = [mu](double x, double) { return cplx(std::cos(kPi * x / mu)); };
  auto G = [](double, double y) { return cplx(0.0, std::sin(4 * kPi * y)); };
  EField a = make_mult_type_E(g, F), b = make_mult_type_E(g, G);
  EField ab = make_mult_type_E(g, [&](double x, double y) { return F(x, y) * G(x, y); });
  CHECK(rel_diff(e_mul(a, b), ab) < 1e-13);
  CHECK(max_abs_offdiag(e_mul(a, b)) < 1e-14);
  CHECK(invariance_residual(a) < 1e-13);
  CHECK(skew_residual(b) < 1e-15);
}

TEST_CASE("inverse square root and purification") {
  // a^-1/2 has unbounded p-support; a wide P keeps the truncation small.
  GridSpec g = with_p_radius(small_grid(), 8);
  std::mt19937_64 rng(8);
  EField b = random_E(g, rng);
  EField a = make_identity_E(g) + scale(0.05, e_mul(e_star(b), b));
  InvSqrtResult info;
  EField r = inv_sqrt_E(a, {}, &info);
  CHECK(rel_diff(e_mul(e_mul(r, a), r), make_identity_E(g)) < 1e-8);
  CHECK(info.spectrum.lambda_min > 0.0);
  CHECK(info.condition_bound >= 1.0);
  CHECK_THROWS_AS(inv_sqrt_E(scale(-1.0, a)), NumericalError);
  CHECK_THROWS_AS(inv_sqrt_E(b + scale(kI, make_identity_E(g))), NumericalError);

  // A mildly perturbed identity purifies back to a projection.
  EField Q = make_identity_E(g) + scale(0.02, b + e_star(b));
  EField Qp = flatten_projection_E(Q);
  CHECK(rel_diff(e_mul(Qp, Qp), Qp) < 1e-9);
}

TEST_CASE("tolerance sets are validated") {
  ToleranceSet t;
  CHECK_NOTHROW(t.validate());
  t.alg = 1e-3;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("low-order products against direct sums") {
  GridSpec g = make_grid(1, Rational(1, 2), Rational(1, 8), 16, 16, Rational(-4), Rational(4), 2);
  std::mt19937_64 rng(17);
  DField a = random_D(g, rng), b = random_D(g, rng);
  DField ab = d_mul(a, b);
  const long long sx = 2 * (g.mu * g.nx).numerator() / (g.mu * g.nx).denominator();  // 2 mu nx
  const long long sy = g.sy;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      cplx s = 0.0;
      for (int q = -g.P; q <= g.P; ++q) s += a.value(i, j, q) * b.value(i - q * sx, j - q * sy, -q);
      REQUIRE(std::abs(ab.at(0, i, j) - s) < 1e-13);
    }
  EField x = random_E(g, rng), y = random_E(g, rng);
  EField xy = e_mul(x, y);
  for (int i = 0; i < g.Ne; ++i)
    for (int j = 0; j < g.ny; ++j) {
      cplx s = 0.0;
      for (int q = -g.P; q <= g.P; ++q) s += x.value(i, j, q) * y.value(i + q * g.nx, j, 1 - q);
      REQUIRE(std::abs(xy.at(1, i, j) - s) < 1e-13);
    }
}

TEST_CASE("H_Z * H_Z = -cos^2 and invariance of H_Z") {
  GridSpec g = small_grid(1, Rational(1, 2), Rational(1, 4));
  const double mu = g.mu_d();
  for (double alpha : {1.0, 2.0, 0.125}) {
    CAPTURE(alpha);
    auto hz = [=](double x, double) { return cplx(0.0, std::cos(alpha * kPi * x / mu)); };
    EField H = make_mult_type_E(g, hz);
    EField sq = e_mul(H, H);
    double err = 0.0;
    for (int i = 0; i < g.Ne; ++i) {
      double c = std::cos(alpha * kPi * g.x_at(i) / mu);
      err = std::max(err, std::abs(sq.at(0, i, 3) + c * c));
    }
    CHECK(err < 1e-14);
    double inv = invariance_residual(
        g, [&](long long m, long long j, int p) { return p == 0 ? hz(g.x_at(m), g.y_at(j)) : cplx(0.0); },
        Action::Gamma);
    if (alpha == std::floor(alpha))
      CHECK(inv < 1e-12);
    else
      CHECK(inv > 1e-3);
  }
}

TEST_CASE("scalar functional calculus on multiplication-type elements") {
  GridSpec g = small_grid();
  EField four = scale(4.0, make_identity_E(g));
  CHECK(rel_diff(inv_sqrt_E(four), scale(0.5, make_identity_E(g))) < 1e-12);
  EField G = make_mult_type_E(g, [](double, double y) { return cplx(2.0 + std::cos(2 * kPi * y)); });
  EField R = make_mult_type_E(g, [](double, double y) { return cplx(1.0 / std::sqrt(2.0 + std::cos(2 * kPi * y))); });
  CHECK(rel_diff(inv_sqrt_E(G), R) < 1e-11);

  CHECK(rel_diff(flatten_projection_E(make_identity_E(g)), make_identity_E(g)) < 1e-14);
  CHECK(max_abs(flatten_projection_E(EField(g))) == 0.0);
  // 0.9 on half the cell, 0.1 elsewhere, smoothly joined.  The crossings sit
  // half a sample off the grid so no sample is exactly 1/2.
  const double mu = g.mu_d(), off = 0.5 / g.nx;
  EField step = make_mult_type_E(g, [=](double x, double) {
    return cplx(0.5 + 0.4 * std::tanh(8.0 * std::sin(kPi * (x + off) / mu)));
  });
  EField Pp = flatten_projection_E(step);
  CHECK(rel_diff(e_mul(Pp, Pp), Pp) < 1e-10);
  CHECK(std::abs(trace_E(Pp) - mu) < 1e-12);
}

TEST_CASE("commutators of multiplication-type elements are traceless") {
  GridSpec g = small_grid();
  const double mu = g.mu_d();
  EField A = make_mult_type_E(g, [mu](double x, double y) { return cplx(std::cos(kPi * x / mu), std::sin(2 * kPi * y)); });
  std::mt19937_64 rng(3);
  EField B = random_E(g, rng);
  CHECK(std::abs(trace_E(e_mul(A, B) - e_mul(B, A))) < 1e-12);
}

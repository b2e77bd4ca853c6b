#include "support.hpp"

using namespace qhm;
using namespace qhm::test;

TEST_CASE("minimize a quadratic") {
  Objective q;
  q.dim = 2;
  q.f = [](const std::vector<double>& t) {
    return 3.0 + (t[0] - 1.0) * (t[0] - 1.0) + 4.0 * (t[1] + 0.5) * (t[1] + 0.5);
  };
  auto gr = grad_fd(q, {0.0, 0.0});
  CHECK(gr[0] == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(gr[1] == doctest::Approx(4.0).epsilon(1e-8));
  MinimizeOptions o;
  o.tol = 1e-8;
  MinimizeResult r = minimize(q, {0.0, 0.0}, o);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.theta[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.theta[1] == doctest::Approx(-0.5).epsilon(1e-6));
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) CHECK(r.trajectory[i].value <= r.trajectory[i - 1].value);
}

TEST_CASE("an empty family yields a single trajectory row") {
  Objective q;
  q.dim = 0;
  q.f = [](const std::vector<double>&) { return 7.0; };
  MinimizeResult r = minimize(q, {});
  REQUIRE(r.trajectory.size() == 1);
  CHECK(r.trajectory[0].value == 7.0);
  CHECK(r.trajectory[0].grad_norm == 0.0);
}

TEST_CASE("strict basis terms are invariant characters") {
  GridSpec g = default_grid(1, Rational(1, 2), Rational(1, 4));
  PerturbationBasis b = thm47_basis(g);
  CHECK(b.mode == PerturbationBasis::Mode::Strict);
  for (std::size_t k = 0; k < b.size(); ++k) {
    std::vector<double> th(b.size(), 0.0);
    th[k] = 1.0;
    CAPTURE(b.terms[k].label);
    CHECK(h_from_params(g, b, th).invariance_residual() < 1e-12);
  }
  BasisTerm t = strict_term(g, Dir::Y, 1, 0, false);
  CHECK(t.fx == doctest::Approx(1.0));  // (k - 2 n nu) / (2 mu) with k = 1, n = 0, mu = 1/2
}

TEST_CASE("closed forms") {
  CHECK(thm51_closed_form(1, 0.5, 0.125) == doctest::Approx(36.7281983).epsilon(1e-8));
  CHECK(thm51_closed_form(1, 0.5, 0.25) == doctest::Approx(28.6457475).epsilon(1e-8));
  CHECK(thm51_closed_form(2, 0.5, 0.125) == doctest::Approx(39.1831280).epsilon(1e-8));
  CHECK(thm51_closed_form(1, 0.5, 0.125) < 4 * kPi * kPi);
  CHECK(thm51_closed_form_literal(1, 0.5, 0.125) > 4 * kPi * kPi);
}

TEST_CASE("YM objective on the strict family is flat") {
  GridSpec g = make_grid(1, Rational(1, 2), Rational(1, 4), 64, 64, Rational(-4), Rational(4), 4);
  Objective obj = ym_objective(make_nabla0(g), thm47_basis(g));
  const double ym0 = 2 * kPi * kPi / g.mu_d();
  CHECK(obj.f(std::vector<double>(8, 0.0)) == doctest::Approx(ym0).epsilon(1e-6));
  CHECK(obj.f({0.4, 0.0, -0.3, 0.0, 0.0, 0.2, 0.0, 0.1}) == doctest::Approx(ym0).epsilon(1e-6));
}

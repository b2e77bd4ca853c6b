#include "support.hpp"

#include <sstream>

using namespace qhm;
using namespace qhm::test;

TEST_CASE("grid derived integers") {
  GridSpec g = make_grid(1, Rational(3, 4), Rational(1, 8), 64, 64, Rational(-4), Rational(4), 4);
  CHECK(g.Nx == 512);
  CHECK(g.Ne == 96);
  CHECK(g.sy == 16);
  CHECK(g.m_lo == -256);
  GridSpec g2 = rescale(g, 2);
  CHECK(g2.nx == 128);
  CHECK(g2.ny == 128);
  CHECK(g2.Ne == 192);
  CHECK(with_p_radius(g, 6).P == 6);
  CHECK(g.same_as(make_grid(1, Rational(3, 4), Rational(1, 8), 64, 64, Rational(-4), Rational(4), 4)));
  CHECK_FALSE(g.same_as(g2));
}

TEST_CASE("misaligned grids are rejected with a hint") {
  try {
    make_grid(1, Rational(1, 3), Rational(1, 4), 64, 64, Rational(-4), Rational(4), 4);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("smallest conforming nx_per_unit is 192") != std::string::npos);
  }
  try {
    make_grid(1, Rational(1, 2), Rational(1, 3), 64, 64, Rational(-4), Rational(4), 4);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("smallest conforming ny is 192") != std::string::npos);
  }
  CHECK_THROWS_AS(make_grid(0, Rational(1, 2), Rational(1, 4), 64, 64, Rational(-4), Rational(4), 4), ConfigError);
  CHECK_THROWS_AS(make_grid(1, Rational(1, 2), Rational(1, 4), 64, 64, Rational(4), Rational(-4), 4), ConfigError);
  CHECK_THROWS_AS(make_grid(1, Rational(1, 2), Rational(1, 4), 64, 64, Rational(-1, 3), Rational(4), 4),
                  ConfigError);
}

TEST_CASE("phases are exact characters") {
  GridSpec g = small_grid();
  // phase_D(k,p,j) = e(c k p (y_j - p nu))
  for (int k : {-2, 1, 3})
    for (int p : {-1, 2})
      for (int j : {0, 5, 63}) {
        double arg = g.c * k * p * (g.y_at(j) - p * g.nu_d());
        CHECK(std::abs(g.phase_D(k, p, j) - std::exp(cplx(0.0, 2 * kPi * arg))) < 1e-12);
      }
}

TEST_CASE("derivatives and quadrature") {
  GridSpec g = small_grid();
  auto f = sample_module(g, [](double x, double y) { return std::exp(-2 * x * x) * std::sin(2 * kPi * y); });
  auto fx = sample_module(g, [](double x, double y) { return -4 * x * std::exp(-2 * x * x) * std::sin(2 * kPi * y); });
  auto fy = sample_module(g, [](double x, double y) { return 2 * kPi * std::exp(-2 * x * x) * std::cos(2 * kPi * y); });
  CHECK(rel_diff(diff_x(f), fx) < 1e-8);
  CHECK(rel_diff(diff_y(f), fy) < 1e-12);
  cplx v = integrate(g, [](double, double y) { return cplx(std::cos(2 * kPi * y) * std::cos(2 * kPi * y)); }, Cell::E);
  CHECK(std::abs(v - 0.5 * 2 * g.mu_d()) < 1e-13);
  double w = 0.0;
  for (int k = 0; k <= 8; ++k) w += boole_weight(k, 8);
  CHECK(w == doctest::Approx(8.0));
}

TEST_CASE("diff_x refuses fields reaching the window edge") {
  GridSpec g = small_grid();
  auto f = sample_module(g, [](double, double) { return cplx(1.0); });
  CHECK_THROWS_AS(diff_x(f), NumericalError);
}

TEST_CASE("config parsing") {
  RunConfig c = parse_config(R"(
# comment line
c = 2
mu = 3/4
nu = [1, 8]
nx_per_unit = 64
ny = 32     # trailing comment
window = [-6, 13/2]
p_radius = 5
tolerances = {alg: 1e-11, calc: 1e-7}
seed = 99
connection.kind = thm51
connection.alpha = 0.25
connection.coefficients = [1, -0.5]
note = kept
)");
  CHECK(c.c == 2);
  CHECK(c.mu == Rational(3, 4));
  CHECK(c.nu == Rational(1, 8));
  CHECK(c.nx_per_unit == 64);
  CHECK(c.ny == 32);
  CHECK(c.x_lo == Rational(-6));
  CHECK(c.x_hi == Rational(13, 2));
  CHECK(c.p_radius == 5);
  CHECK(c.tol.alg == 1e-11);
  CHECK(c.tol.calc == 1e-7);
  CHECK(c.seed == 99);
  CHECK(c.connection.kind == "thm51");
  CHECK(c.connection.alpha == 0.25);
  REQUIRE(c.connection.coefficients.size() == 2);
  CHECK(c.connection.coefficients[1] == -0.5);
  CHECK(c.extra.at("note") == "kept");
  CHECK(c.grid().Nx == 800);

  RunConfig d = parse_config(format_config(c));
  CHECK(format_config(d) == format_config(c));
  CHECK(d.tol.alg == c.tol.alg);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("mu 1/2"), ConfigError);
  CHECK_THROWS_AS(parse_config("mu = 1/0"), ConfigError);
  CHECK_THROWS_AS(parse_config("mu = [1, 2, 3]"), ConfigError);
  CHECK_THROWS_AS(parse_config("c = one"), ConfigError);
  CHECK_THROWS_AS(parse_config("window = [1]"), ConfigError);
  CHECK_THROWS_AS(parse_config("tolerances.alg = 1e-3\ntolerances.calc = 1e-6"), ConfigError);
  CHECK_THROWS_AS(parse_config("tolerances = {foo: 1}"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/qhm.cfg"), ConfigError);
  RunConfig m = parse_config("mu = 1/3\nnx_per_unit = 64");
  CHECK_THROWS_AS(m.grid(), ConfigError);
  CHECK(parse_rational(" -7/14 ") == Rational(-1, 2));
}

TEST_CASE("field dumps round-trip") {
  GridSpec g = small_grid(1, Rational(1, 2), Rational(1, 8), 32);
  std::mt19937_64 rng(5);
  ModuleField f = random_module_field(g, rng);
  EField e = random_E(g, rng);
  DField d = random_D(g, rng);
  std::stringstream s1, s2, s3;
  write_field(s1, f);
  write_field(s2, e);
  write_field(s3, d);
  ModuleField f2 = read_module_field(s1);
  EField e2 = read_e_field(s2);
  DField d2 = read_d_field(s3);
  CHECK(f2.grid.same_as(g));
  CHECK(max_abs(f2 - f) == 0.0);
  CHECK(max_abs(e2 - e) == 0.0);
  CHECK(max_abs(d2 - d) == 0.0);

  std::stringstream bad("qhm-field E c=1 mu=1/2 nu=1/8 nx=32 ny=32 x_lo=-4 x_hi=4 P=4 margin=8 n=3\n");
  CHECK_THROWS_AS(read_e_field(bad), ConfigError);
  std::stringstream wrong;
  write_field(wrong, d);
  CHECK_THROWS_AS(read_e_field(wrong), ConfigError);
}

#include <doctest.h>

#include "sbp/fft.hpp"
#include "sbp/grid.hpp"
#include "sbp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace sbp;

namespace {

ScalarField random_field(const GridSpec& g, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Array v(g.total());
  for (long i = 0; i < g.total(); ++i) v[i] = dist(rng);
  return ScalarField(g, std::move(v));
}

}  // namespace

TEST_SUITE("fields") {

TEST_CASE("grid spec invariants") {
  GridSpec g(8, 4.0);
  CHECK(g.h() == 1.0);
  CHECK(g.h() == 2.0 * g.L / g.n);
  CHECK(g.total() == 512);
  CHECK(g.coord(0) == -4.0);
  CHECK_THROWS_AS(GridSpec(7, 4.0), DimensionError);   // odd
  CHECK_THROWS_AS(GridSpec(6, 4.0), DimensionError);   // too small
  CHECK_THROWS_AS(GridSpec(8, 0.0), DimensionError);   // bad box
  CHECK_THROWS_AS(GridSpec(8, -1.0), DimensionError);
}

TEST_CASE("field length must match the grid") {
  GridSpec g(8, 4.0);
  CHECK_THROWS_AS(ScalarField(g, Array::Zero(100)), DimensionError);
}

TEST_CASE("integrate: constant field is volume") {
  GridSpec g(8, 4.0);
  ScalarField one(g, Array::Constant(g.total(), 1.0));
  CHECK(integrate(one) == doctest::Approx(512.0).epsilon(1e-14));
  CHECK(integrate(ScalarField(g)) == 0.0);
}

TEST_CASE("integrate: centered Gaussian matches the closed form") {
  // int exp(-|x|^2) over R^3 = pi^(3/2)
  GridSpec g(64, 8.0);
  const double exact = std::pow(M_PI, 1.5);
  CHECK(integrate(gaussian_field(g)) == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("integrate is linear") {
  GridSpec g(12, 4.0);
  ScalarField u = random_field(g, 1);
  ScalarField v = random_field(g, 2);
  const double a = 1.7, b = -0.3;
  ScalarField mix(g, a * u.values + b * v.values);
  const double lhs = integrate(mix);
  const double rhs = a * integrate(u) + b * integrate(v);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
}

TEST_CASE("gradient energy: zero and constant fields vanish") {
  GridSpec g(16, 4.0);
  SpectralWorkspace ws(g);
  CHECK(ws.gradient_sq_integral(ScalarField(g)) == 0.0);
  ScalarField c(g, Array::Constant(g.total(), 3.25));
  CHECK(ws.gradient_sq_integral(c) <= 1e-10);
}

TEST_CASE("gradient energy: plane wave closed form") {
  // u = sin(pi x / L): int |grad u|^2 = (pi/L)^2 (2L)^3 / 2, exactly one mode
  GridSpec g(16, 5.0);
  SpectralWorkspace ws(g);
  ScalarField u = sample_field(g, [&](double x, double, double) {
    return std::sin(M_PI * x / g.L);
  });
  const double exact = std::pow(M_PI / g.L, 2) * std::pow(2 * g.L, 3) / 2.0;
  CHECK(ws.gradient_sq_integral(u) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("gradient energy: Gaussian closed form") {
  // int |grad exp(-|x|^2)|^2 = 3 (pi/2)^(3/2)
  GridSpec g(64, 8.0);
  SpectralWorkspace ws(g);
  const double exact = 3.0 * std::pow(M_PI / 2.0, 1.5);
  CHECK(ws.gradient_sq_integral(gaussian_field(g)) == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("gradient energy is nonnegative") {
  GridSpec g(12, 4.0);
  SpectralWorkspace ws(g);
  for (uint64_t s = 0; s < 20; ++s) CHECK(ws.gradient_sq_integral(random_field(g, s)) >= 0.0);
}

TEST_CASE("shift round trip is the identity") {
  GridSpec g(12, 4.0);
  ScalarField u = random_field(g, 7);
  ScalarField back = shift(shift(u, 3, -2, 5), -3, 2, -5);
  CHECK((back.values - u.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("trilinear interpolation reproduces grid samples") {
  GridSpec g(12, 4.0);
  ScalarField u = random_field(g, 11);
  CHECK(interpolate(u, Vec3(g.coord(3), g.coord(7), g.coord(1))) ==
        doctest::Approx(u.at(3, 7, 1)).epsilon(1e-14));
}

TEST_CASE("radial weights sum to the ball volume") {
  RadialGrid rg(2000, 10.0);
  const double ball = 4.0 / 3.0 * M_PI * std::pow(rg.r_max, 3);
  CHECK(radial_weights(rg).sum() == doctest::Approx(ball).epsilon(1e-2));
  RadialProfile one(rg, Array::Constant(rg.m, 1.0));
  CHECK(radial_integrate(one) == doctest::Approx(ball).epsilon(1e-2));
}

TEST_CASE("radial interpolation hits the nodes and dies beyond r_max") {
  RadialGrid rg(64, 8.0);
  Array v(rg.m);
  for (int j = 0; j < rg.m; ++j) v[j] = std::exp(-0.2 * rg.r(j));
  RadialProfile p(rg, v);
  CHECK(radial_interpolate(p, rg.r(17)) == doctest::Approx(v[17]).epsilon(1e-14));
  CHECK(radial_interpolate(p, rg.r_max + 1.0) == 0.0);
}

TEST_CASE("BPF1 round trip is bit exact") {
  GridSpec g(10, 3.0);
  ScalarField u = random_field(g, 21);
  const std::string path = "roundtrip.bpf1";
  write_field(path, u);
  ScalarField back = read_field(path);
  CHECK(back.grid == g);
  CHECK((back.values - u.values).abs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("BPF1 rejects wrong magic") {
  const std::string path = "badmagic.bpf1";
  {
    std::ofstream os(path, std::ios::binary);
    os << "NOPE" << std::string(64, '\0');
  }
  CHECK_THROWS_AS(read_field(path), FormatError);
  std::remove(path.c_str());
}

TEST_CASE("BPF1 rejects truncated payload") {
  GridSpec g(16, 4.0);
  const std::string path = "trunc.bpf1";
  write_field(path, ScalarField(g));
  {
    // chop the payload in half, keep the header intact
    std::ifstream is(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os.write(bytes.data(), static_cast<long>(bytes.size() / 2));
  }
  CHECK_THROWS_AS(read_field(path), FormatError);
  std::remove(path.c_str());
}

TEST_CASE("repeated reductions are deterministic") {
  GridSpec g(16, 4.0);
  ScalarField u = random_field(g, 33);
  SpectralWorkspace ws(g);
  const double i1 = integrate(u), i2 = integrate(u);
  const double g1 = ws.gradient_sq_integral(u), g2 = ws.gradient_sq_integral(u);
  CHECK(i1 == i2);
  CHECK(g1 == g2);
}

}  // TEST_SUITE

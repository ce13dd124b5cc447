#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlqw/errors.hpp"
#include "nlqw/spectral.hpp"
#include "oracles/quadrature.hpp"

using namespace nlqw;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRoot = std::numbers::sqrt2 / 2.0;
const Complex kI{0.0, 1.0};

std::vector<BaseCoin> test_coins() {
  return {
      BaseCoin::hadamard_like(),
      BaseCoin::make({0.0, kRoot}, kRoot),
      BaseCoin::make(std::polar(0.3, 2.0), std::polar(std::sqrt(1 - 0.09), -0.4)),
      BaseCoin::make(std::polar(0.95, 4.0), std::polar(std::sqrt(1 - 0.95 * 0.95), 1.1)),
  };
}

double residual(const Matrix2& m, const Eigenpair& e) {
  const Spinor lhs = m.apply(e.phi);
  return std::sqrt(std::norm(lhs.up - e.lambda * e.phi.up) + std::norm(lhs.down - e.lambda * e.phi.down));
}

// <u, G(v0) u> evaluated in momentum space: (1/2pi) int sum_j G(v_j(k)) |<phi_j(k), u^(k)>|^2 dk.
// Trapezoid on a periodic smooth integrand; independent of the velocity-space quadrature.
Complex momentum_expectation(const LatticeState& u, const BaseCoin& coin, const std::function<Complex(double)>& G,
                             int points = 4096) {
  Complex acc{};
  for (int i = 0; i < points; ++i) {
    const double k = 2.0 * kPi * i / points;
    const Spinor uk = fourier_eval(u, k);
    for (int band = 1; band <= 2; ++band) {
      const Spinor phi = eigenpair(coin, k, band).phi;
      const Complex amp = std::conj(phi.up) * uk.up + std::conj(phi.down) * uk.down;
      acc += G(group_velocity(coin, k, band)) * std::norm(amp);
    }
  }
  return acc / static_cast<double>(points);
}

}  // namespace

TEST_CASE("u0_symbol") {
  const auto h = u0_symbol(BaseCoin::hadamard_like(), 0.0);
  CHECK(std::abs(h(0, 0) - kRoot) < 1e-16);
  CHECK(std::abs(h(0, 1) - kRoot) < 1e-16);
  CHECK(std::abs(h(1, 0) + kRoot) < 1e-16);
  CHECK(std::abs(h(1, 1) - kRoot) < 1e-16);
  for (const auto& coin : test_coins()) {
    for (int i = 0; i < 1024; ++i) {
      const auto m = u0_symbol(coin, 2.0 * kPi * i / 1024);
      CHECK(unitarity_defect(m) <= 1e-14);
      CHECK(std::abs(m.det() - 1.0) <= 1e-14);
    }
  }
}

TEST_CASE("eigenpairs agree with the characteristic-polynomial oracle") {
  const auto hk0 = eigenpair(BaseCoin::hadamard_like(), 0.0, 1);
  CHECK(std::abs(hk0.lambda - std::polar(1.0, kPi / 4)) < 1e-15);
  CHECK(std::abs(eigenpair(BaseCoin::hadamard_like(), 0.0, 2).lambda - std::polar(1.0, -kPi / 4)) < 1e-15);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> k_dist(-kPi, 3 * kPi);
  for (const auto& coin : test_coins()) {
    for (int i = 0; i < 1024; ++i) {
      const double k = k_dist(rng);
      const auto m = u0_symbol(coin, k);
      const auto oracle = oracle::eigenvalues_by_characteristic_polynomial(m);
      const auto s = dispersion_sample(coin, k);
      CHECK(std::abs(s.lambda[0] - oracle[0]) <= 1e-12);
      CHECK(std::abs(s.lambda[1] - oracle[1]) <= 1e-12);
      CHECK(std::abs(std::abs(s.lambda[0]) - 1.0) <= 1e-12);
      CHECK(std::abs(s.lambda[0] * s.lambda[1] - m.det()) <= 1e-12);
      CHECK(std::abs(s.lambda[1] - std::conj(s.lambda[0])) <= 1e-15);
      for (int band = 1; band <= 2; ++band) {
        const auto e = eigenpair(coin, k, band);
        CHECK(residual(m, e) <= 1e-12);
        CHECK(std::abs(e.phi.norm_sq() - 1.0) <= 1e-12);
        CHECK(e.phi.up.imag() == 0.0);
        CHECK(e.phi.up.real() > 0.0);
        CHECK(std::abs(s.v[band - 1]) <= coin.abs_a() + 1e-15);
      }
      CHECK(std::abs(std::conj(s.phi[0].up) * s.phi[1].up + std::conj(s.phi[0].down) * s.phi[1].down) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(eigenpair(BaseCoin::hadamard_like(), 0.0, 3), OutOfRange);
}

TEST_CASE("group velocity") {
  for (const auto& coin : test_coins()) {
    const double th = coin.theta_a();
    CHECK(std::abs(group_velocity(coin, -th, 1)) < 1e-15);
    CHECK(std::abs(group_velocity(coin, -th, 2)) < 1e-15);
    CHECK(group_velocity(coin, kPi / 2 - th, 2) == doctest::Approx(coin.abs_a()).epsilon(1e-14));
    CHECK(group_velocity(coin, kPi / 2 - th, 1) == doctest::Approx(-coin.abs_a()).epsilon(1e-14));

    // i lambda'(k) / lambda(k) by central differences.
    constexpr double h = 1e-5;
    for (int i = 0; i < 256; ++i) {
      const double k = 2.0 * kPi * (i + 0.3) / 256;
      for (int band = 1; band <= 2; ++band) {
        const Complex dl =
            (eigenpair(coin, k + h, band).lambda - eigenpair(coin, k - h, band).lambda) / (2.0 * h);
        const Complex fd = kI * dl / eigenpair(coin, k, band).lambda;
        CHECK(std::abs(fd.imag()) <= 1e-7);
        CHECK(std::abs(fd.real() - group_velocity(coin, k, band)) <= 1e-7);
      }
    }
  }
}

TEST_CASE("Konno density") {
  CHECK(konno_density(0.0, kRoot) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(konno_density(0.9, kRoot) == 0.0);
  CHECK(konno_density(kRoot, kRoot) == 0.0);
  CHECK(konno_density(-kRoot, kRoot) == 0.0);
  CHECK_THROWS_AS(konno_density(0.0, 1.0), OutOfRange);
  CHECK_THROWS_AS(konno_density(0.0, 0.0), OutOfRange);

  for (const double r : {0.3, kRoot, 0.95}) {
    // Adaptive algebraic-singularity quadrature.
    CHECK(std::abs(oracle::konno_weighted_integral(r, [](double) { return 1.0; }) - 1.0) <= 1e-8);
    // Same integral through the library's substituted weights.
    const auto coin = BaseCoin::make(r, std::sqrt(1.0 - r * r));
    const auto d = limit_density(LatticeState::delta(0, {1.0, 0.0}), coin);
    double mass = 0.0;
    for (const double q : d.quad_weight) mass += q;
    CHECK(std::abs(mass - 1.0) <= 1e-8);
    // And the closed-form second moment of f_K, 1 - sqrt(1 - r^2).
    const double m2 = oracle::konno_weighted_integral(r, [](double v) { return v * v; });
    CHECK(std::abs(m2 - (1.0 - std::sqrt(1.0 - r * r))) <= 1e-10);
  }
}

TEST_CASE("branch inverses k_{j,m}") {
  const auto had = BaseCoin::hadamard_like();
  CHECK(k_branch(had.abs_a(), 1, 0, had) == doctest::Approx(-kPi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(k_branch(had.abs_a() + 1e-9, 1, 0, had), OutOfRange);
  CHECK_THROWS_AS(k_branch(0.0, 0, 0, had), OutOfRange);
  CHECK_THROWS_AS(k_branch(0.0, 1, 2, had), OutOfRange);
  CHECK_NOTHROW(k_branch(had.abs_a() + 5e-13, 2, 1, had));

  for (const auto& coin : test_coins()) {
    const double r = coin.abs_a();
    const double th = coin.theta_a();
    for (int band = 1; band <= 2; ++band) {
      for (int m = 0; m <= 1; ++m) {
        CHECK(k_branch(0.0, band, m, coin) == doctest::Approx(-th + m * kPi).epsilon(1e-15));
        constexpr double h = 1e-6;
        for (int i = 0; i < 100; ++i) {
          const double v = r * (-1.0 + 2.0 * (i + 1) / 101.0);
          const double k = k_branch(v, band, m, coin);
          CHECK(k >= kPi * (m - 0.5) - th - 1e-12);
          CHECK(k <= kPi * (m + 0.5) - th + 1e-12);
          CHECK(std::abs(group_velocity(coin, k, band) - v) <= 1e-10);
          const double fd = (k_branch(v + h, band, m, coin) - k_branch(v - h, band, m, coin)) / (2 * h);
          const double sign = (band + m) % 2 == 0 ? 1.0 : -1.0;
          CHECK(std::abs(fd - sign * kPi * konno_density(v, r)) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("K transforms") {
  const auto coin = test_coins()[2];
  CHECK(k_transform(LatticeState::zeros(-4, 4), 0.1, 1, 0, coin) == Complex(0.0));

  const auto e0 = LatticeState::delta(0, {1.0, 0.0});
  for (const double v : {-0.25, 0.0, 0.2}) {
    for (int band = 1; band <= 2; ++band) {
      for (int m = 0; m <= 1; ++m) {
        const auto phi = eigenpair(coin, k_branch(v, band, m, coin), band).phi;
        CHECK(std::abs(k_transform(e0, v, band, m, coin) - std::conj(phi.up)) <= 1e-15);
      }
    }
  }

  SUBCASE("phase convention does not reach |K u|") {
    std::mt19937_64 rng(31);
    const auto u = oracle::random_state(rng, -8, 16);
    for (const double v : {-0.2, 0.05, 0.28}) {
      const double k = k_branch(v, 2, 1, coin);
      const auto phi = eigenpair(coin, k, 2).phi;
      const Spinor uk = fourier_eval(u, k);
      const Complex gauge = std::polar(1.0, 2.1);
      const Complex rotated = std::conj(gauge * phi.up) * uk.up + std::conj(gauge * phi.down) * uk.down;
      CHECK(std::abs(std::norm(rotated) - std::norm(k_transform(u, v, 2, 1, coin))) <= 1e-14);
    }
  }

  SUBCASE("completeness: 1/2 sum int |K u|^2 f_K dv = |u|^2") {
    std::mt19937_64 rng(41);
    for (const auto& c : test_coins()) {
      const auto u = oracle::random_state(rng, -16, 32, false);
      const double expected = norm_l2(u) * norm_l2(u);
      const double oracle_mass = oracle::konno_weighted_integral(c.abs_a(), [&](double v) {
        double w = 0.0;
        for (int band = 1; band <= 2; ++band)
          for (int m = 0; m <= 1; ++m) w += std::norm(k_transform(u, v, band, m, c));
        return 0.5 * w;
      });
      CHECK(std::abs(oracle_mass - expected) <= 1e-6 * expected);
      CHECK(std::abs(limit_density(u, c).total_mass - expected) <= 1e-6 * std::max(1.0, expected));
    }
  }
}

TEST_CASE("limit density") {
  const auto had = BaseCoin::hadamard_like();

  SUBCASE("symmetric initial state flattens the weight") {
    const auto d = limit_density(LatticeState::delta(0, {kRoot, kI * kRoot}), had);
    CHECK(d.size() == kDefaultDensityNodes);
    for (const double w : d.w) CHECK(std::abs(w - 1.0) <= 1e-10);
    CHECK(std::abs(d.total_mass - 1.0) <= 1e-6);
    CHECK(d.mass_check_passed);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(std::abs(d.grid[i]) < had.abs_a());
      CHECK(d.f_k[i] == doctest::Approx(konno_density(d.grid[i], had.abs_a())).epsilon(1e-9));
      CHECK(d.density[i] == doctest::Approx(d.w[i] * d.f_k[i]));
    }
    CHECK(std::abs(density_moment(d, 1)) <= 1e-8);
    CHECK(std::abs(density_moment(d, 2) - (1.0 - kRoot)) <= 1e-10);
    CHECK(std::abs(char_fn_theoretical(d, 0.0) - 1.0) <= 1e-14);
    CHECK(density_cdf(d)(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("delta_0 (1, 0) gives w(v) = 1 - v, sharing the even part") {
    const auto d = limit_density(LatticeState::delta(0, {1.0, 0.0}), had);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(d.w[i] - (1.0 - d.grid[i])) <= 1e-10);
    CHECK(std::abs(density_moment(d, 2) - (1.0 - kRoot)) <= 1e-10);
  }

  SUBCASE("zero state gives an identically zero density") {
    const auto d = limit_density(LatticeState::zeros(-3, 3), had);
    CHECK(d.total_mass == 0.0);
    for (const double x : d.density) CHECK(x == 0.0);
    CHECK_THROWS_AS(density_moment(d, 1), OutOfRange);
    CHECK_THROWS_AS(density_cdf(d), OutOfRange);
  }

  SUBCASE("node-count guard") { CHECK_THROWS_AS(limit_density(LatticeState::delta(0, {1.0, 0.0}), had, 32), OutOfRange); }

  SUBCASE("wide states trigger refinement") {
    std::mt19937_64 rng(17);
    const auto u = oracle::random_state(rng, -600, 1200);
    const auto d = limit_density(u, had, 64);
    CHECK(d.size() > 64);
    CHECK(d.mass_check_passed);
    CHECK(std::abs(d.total_mass - 1.0) <= 1e-6);
  }

  SUBCASE("moments and characteristic function match the momentum-space route") {
    std::mt19937_64 rng(23);
    for (const auto& coin : test_coins()) {
      const auto u = oracle::random_state(rng, -6, 13);
      const auto d = limit_density(u, coin);
      for (int n = 1; n <= 4; ++n) {
        const Complex ref = momentum_expectation(u, coin, [n](double v) { return Complex(std::pow(v, n)); });
        CHECK(std::abs(density_moment(d, n) - ref.real()) <= 1e-9);
      }
      for (const double xi : {-10.0, -3.0, 0.5, 7.0}) {
        const Complex ref = momentum_expectation(u, coin, [xi](double v) { return std::polar(1.0, xi * v); });
        CHECK(std::abs(char_fn_theoretical(d, xi) - ref) <= 1e-9);
      }
    }
  }

  SUBCASE("CDF is monotone from 0 to 1") {
    std::mt19937_64 rng(29);
    const auto coin = test_coins()[1];
    const auto u = oracle::random_state(rng, -3, 7);
    const auto d = limit_density(u, coin);
    const auto cdf = density_cdf(d);
    const double r = d.speed_limit;
    CHECK(cdf(-r - 0.1) == 0.0);
    CHECK(cdf(r + 0.1) == 1.0);
    double previous = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double value = cdf(-r + 2 * r * i / 2000.0);
      CHECK(value >= previous);
      previous = value;
    }
    // Against the adaptive oracle at a few interior points.
    const auto w_at = [&](double s) {
      double w = 0.0;
      for (int band = 1; band <= 2; ++band)
        for (int m = 0; m <= 1; ++m) w += std::norm(k_transform(u, s, band, m, coin));
      return 0.5 * w;
    };
    for (const double v : {-0.5, -0.1, 0.2, 0.6}) {
      const double target = oracle::konno_weighted_integral_to(r, v, w_at) / d.total_mass;
      CHECK(std::abs(cdf(v) - target) <= 1e-4);
    }
  }
}

TEST_CASE("density CSV header") {
  const auto d = limit_density(LatticeState::delta(0, {1.0, 0.0}), BaseCoin::hadamard_like(), 64);
  const auto csv = density_csv(d);
  CHECK(csv.rfind("v,w,f_k,density\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
}

#include "common.hpp"
#include "oracle.hpp"

#include "pcfqfc/error.hpp"
#include "pcfqfc/phasematch.hpp"
#include "pcfqfc/units.hpp"

#include <doctest.h>

#include <random>

using namespace pcfqfc;
using testing::kFitted;
using testing::model;

TEST_SUITE("phasematch") {
  TEST_CASE("target frequency from energy conservation") {
    const double ws = omega_from_nm(1551.0), wp = omega_from_nm(787.0);
    CHECK(target_frequency(ws, wp, wp) == doctest::Approx(ws).epsilon(1e-15));
    CHECK_THROWS_AS(target_frequency(ws, wp, 4 * wp), DomainError);
    // Wavenumber arithmetic by hand: 1/(1/1551 + 1/787 - 1/872.7).
    const double lt = target_wavelength_nm(1551.0, 787.0, 872.7);
    CHECK(lt == doctest::Approx(1.0 / (1.0 / 1551.0 + 1.0 / 787.0 - 1.0 / 872.7)).epsilon(1e-15));
    CHECK(std::abs(lt - 1299.5) <= 0.5);
    CHECK(target_wavelength_nm(1551.0, 787.0, 910.0) == doctest::Approx(1224.75136).epsilon(1e-8));
    const auto f = FieldQuartet::from_nm(1551.0, 787.0, 872.7);
    CHECK(nm_from_omega(f.omega_t()) == doctest::Approx(lt).epsilon(1e-13));
  }

  TEST_CASE("phase mismatch vanishes for degenerate pumps") {
    const auto f = FieldQuartet::from_nm(1551.0, 787.0, 787.0);
    CHECK(std::abs(phase_mismatch(model(), f, kFitted)) < 1e-6);
  }

  TEST_CASE("phase mismatch against the independent oracle") {
    for (double q = 810.0; q <= 910.0; q += 10.0) {
      const auto f = FieldQuartet::from_nm(1551.0, 787.0, q);
      auto b = [](double w) { return oracle::beta<oracle::LD>(w, 2.1044L, 0.3389L); };
      const double ref = static_cast<double>(b(f.omega_p()) + b(f.omega_s()) - b(f.omega_q()) -
                                             b(f.omega_t()));
      // beta is ~6e6 /m, so double rounding alone leaves ~1e-9 /m in the difference.
      CHECK(std::abs(phase_mismatch(model(), f, kFitted) - ref) < 1e-6);
    }
  }

  TEST_CASE("operating point sits inside the main sinc lobe") {
    const auto f = FieldQuartet::from_nm(1551.0, 787.0, 872.7);
    const double db = phase_mismatch(model(), f, kFitted);
    CHECK(std::abs(db) * kFitted.length_m / 2 < M_PI / 2);
  }

  TEST_CASE("phase mismatch is antisymmetric under (s,p) <-> (t,q)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> q(800.0, 920.0), p(770.0, 800.0);
    for (int i = 0; i < 200; ++i) {
      const auto f = FieldQuartet::from_nm(1551.0, p(rng), q(rng));
      const FieldQuartet g(f.omega_t(), f.omega_q(), f.omega_p());
      CHECK(g.omega_t() == doctest::Approx(f.omega_s()).epsilon(1e-15));
      const double a = phase_mismatch(model(), f, kFitted);
      const double b = phase_mismatch(model(), g, kFitted);
      CHECK(std::abs(a + b) <= 1e-6 * (1.0 + std::abs(a)));
    }
  }

  TEST_CASE("symmetric partner") {
    const double w0 = omega_from_nm(1044.7);
    CHECK(symmetric_partner(w0, w0) == w0);
    const double l = nm_from_omega(symmetric_partner(omega_from_nm(1551.0), w0));
    CHECK(l == doctest::Approx(1.0 / (2.0 / 1044.7 - 1.0 / 1551.0)).epsilon(1e-13));
    CHECK(std::abs(l - 787.5) < 1.0);
    CHECK_THROWS_AS(symmetric_partner(3 * w0, w0), DomainError);
  }

  TEST_CASE("group-velocity matched partner") {
    const double ws = omega_from_nm(1551.0);
    const double wp = gv_matched_partner(model(), ws, kFitted);
    const double w0 = zero_dispersion_frequency(model(), kFitted);
    CHECK(wp > w0);
    CHECK(model().beta1(wp, kFitted) == doctest::Approx(model().beta1(ws, kFitted)).epsilon(1e-12));
    // Complex-step route to the same group delay.
    CHECK(static_cast<double>(oracle::beta1(wp, 2.1044, 0.3389)) ==
          doctest::Approx(static_cast<double>(oracle::beta1(ws, 2.1044, 0.3389))).epsilon(1e-9));
    CHECK(nm_from_omega(wp) == doctest::Approx(798.0707).epsilon(1e-6));
    // Partner of the partner.
    CHECK(std::abs(nm_from_omega(gv_matched_partner(model(), wp, kFitted)) - 1551.0) < 0.1);
  }

  TEST_CASE("tuning curve") {
    const auto one = tuning_curve(model(), 1551.0, 787.0, {787.0}, kFitted);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.rows[0].lambda_t_nm == doctest::Approx(1551.0).epsilon(1e-15));
    CHECK(*one.rows[0].eta == doctest::Approx(1.0).epsilon(1e-12));

    const auto grid = linear_grid(810.0, 910.0, 0.1);
    CHECK(grid.size() == 1001);
    const auto c = tuning_curve(model(), 1551.0, 787.0, grid, kFitted);
    CHECK(c.gap_count() == 0);
    double lo = 1e9, hi = 0;
    int crossings = 0;
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      const auto& r = c.rows[i];
      // Exact energy conservation in um^-1.
      const double resid = 1e3 * (1 / 1551.0 + 1 / 787.0 - 1 / r.lambda_q_nm - 1 / r.lambda_t_nm);
      CHECK(std::abs(resid) < 1e-12);
      CHECK(*r.eta >= 0.0);
      CHECK(*r.eta <= 1.0);
      lo = std::min(lo, r.lambda_t_nm);
      hi = std::max(hi, r.lambda_t_nm);
      if (i > 0 && (*r.delta_beta_per_m < 0) != (*c.rows[i - 1].delta_beta_per_m < 0)) ++crossings;
    }
    CHECK(lo <= 1226.0);
    CHECK(hi >= 1408.0);
    CHECK(crossings >= 1);
    CHECK(independent_bins(lo, hi, 202e9) >= 150);
  }

  TEST_CASE("tuning curve input errors") {
    CHECK_THROWS_AS(tuning_curve(model(), 1551.0, 787.0, {850.0, 840.0}, kFitted), ConfigError);
    CHECK_THROWS_AS(linear_grid(910.0, 810.0, 0.1), ConfigError);
    CHECK_THROWS_AS(linear_grid(810.0, 910.0, 0.0), ConfigError);
  }

  TEST_CASE("failed points become gaps") {
    const auto c = tuning_curve(model(), 1551.0, 787.0, {800.0, 4000.0}, kFitted);
    CHECK(c.gap_count() == 1);
    CHECK_FALSE(c.rows[1].eta.has_value());
    CHECK_FALSE(c.rows[1].error.empty());
  }

  TEST_CASE("independent frequency bins") {
    const double span = hz_from_nm(1226.0) - hz_from_nm(1408.0);
    CHECK(independent_bins(1226.0, 1408.0, 202e9) == static_cast<long>(std::floor(span / 202e9)));
  }

  TEST_CASE("pump q for a target") {
    CHECK(solve_q_for_target(1551.0, 1551.0, 787.0) == doctest::Approx(787.0).epsilon(1e-13));
    CHECK(std::abs(solve_q_for_target(1300.0, 1551.0, 787.0) - 872.7) <= 0.5);
    CHECK_THROWS_WITH_AS(solve_q_for_target(600.0, 1551.0, 787.0), doctest::Contains("nm"),
                         DomainError);
  }

  TEST_CASE("pump optimisation") {
    SUBCASE("degenerate target returns the window centre") {
      const auto o = optimize_p_for_target(model(), 1551.0, 1551.0, kFitted, 777.0, 797.0);
      CHECK(o.eta == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(o.lambda_p_nm == doctest::Approx(787.0).epsilon(1e-12));
    }
    SUBCASE("extended target needs a different p wavelength") {
      const double q_default = solve_q_for_target(1482.0, 1551.0, 787.0);
      const double eta_default =
          solve_quartet(model(), FieldQuartet::from_nm(1551.0, 787.0, q_default), kFitted).eta_sinc;
      CHECK(eta_default < 0.5);
      const auto o = optimize_p_for_target(model(), 1482.0, 1551.0, kFitted, 770.0, 800.0, 787.0);
      CHECK(o.eta >= 0.5);
      CHECK(std::abs(o.lambda_p_nm - 787.0) > 0.1);
      CHECK(o.eta >= eta_default);
      CHECK(target_wavelength_nm(1551.0, o.lambda_p_nm, o.lambda_q_nm) ==
            doctest::Approx(1482.0).epsilon(1e-12));
    }
    SUBCASE("never worse than the default pump") {
      for (double t : {1250.0, 1300.0, 1350.0, 1400.0, 1450.0}) {
        const double q = solve_q_for_target(t, 1551.0, 787.0);
        const double e0 =
            solve_quartet(model(), FieldQuartet::from_nm(1551.0, 787.0, q), kFitted).eta_sinc;
        const auto o = optimize_p_for_target(model(), t, 1551.0, kFitted, 770.0, 800.0, 787.0);
        CHECK(o.eta >= e0 - 1e-12);
      }
    }
  }
}

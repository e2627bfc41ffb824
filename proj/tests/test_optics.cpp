#include <cmath>
#include <random>

#include "blindsim/optics.hpp"
#include "doctest.h"
#include "oracles/poisson_oracle.hpp"

using namespace blindsim;

TEST_CASE("db_to_linear") {
  CHECK(db_to_linear(Decibel{0.0}) == 1.0);
  // 10^0.64 evaluated independently: 4.36515832240166
  CHECK(db_to_linear(Decibel{6.4}) == doctest::Approx(4.36515832240166).epsilon(1e-12));
  CHECK(std::abs(db_to_linear(Decibel{6.4}) - 4.3652) < 1e-4);
  CHECK(db_to_linear(Decibel{30.0}) == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK_THROWS_AS(db_to_linear(Decibel{NAN}), std::invalid_argument);
}

TEST_CASE("db_to_linear turns dB sums into products") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> db(-60.0, 60.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = db(gen);
    const double b = db(gen);
    const double lhs = db_to_linear(Decibel{a + b});
    const double rhs = db_to_linear(Decibel{a}) * db_to_linear(Decibel{b});
    REQUIRE(std::abs(lhs - rhs) <= 1e-9 * rhs);
  }
}

TEST_CASE("mean_photons_to_click_prob") {
  CHECK(mean_photons_to_click_prob(0.0, 0.1) == 0.0);
  CHECK(mean_photons_to_click_prob(3.7, 0.0) == 0.0);
  CHECK(mean_photons_to_click_prob(1.0, 0.1) == doctest::Approx(0.09516).epsilon(1e-4));
  CHECK(std::abs(mean_photons_to_click_prob(1.0, 0.1) -
                 oracle::truncated_poisson_click_prob(1.0, 0.1)) < 1e-6);
  CHECK_THROWS_AS(mean_photons_to_click_prob(-0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(mean_photons_to_click_prob(1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(mean_photons_to_click_prob(1.0, -0.01), std::invalid_argument);
}

TEST_CASE("click probability agrees with the Poisson brute force and is monotone") {
  double prev_mu = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double mu = i * 0.1;
    for (double eta : {0.0, 0.05, 0.1, 0.5, 1.0}) {
      const double p = mean_photons_to_click_prob(mu, eta);
      REQUIRE(p >= 0.0);
      REQUIRE(p <= 1.0);
      REQUIRE(std::abs(p - oracle::truncated_poisson_click_prob(mu, eta)) < 1e-6);
    }
    const double p = mean_photons_to_click_prob(mu, 0.1);
    REQUIRE(p >= prev_mu);
    prev_mu = p;
  }
  for (int i = 0; i < 10; ++i) {
    REQUIRE(mean_photons_to_click_prob(2.0, i * 0.1) <=
            mean_photons_to_click_prob(2.0, (i + 1) * 0.1));
  }
}

TEST_CASE("pulse_energy_from_avg_power") {
  CHECK(pulse_energy_from_avg_power(Power::nanowatts(258.0), 10e6).in_femtojoules() ==
        doctest::Approx(25.8).epsilon(1e-12));
  CHECK(pulse_energy_from_avg_power(Power::nanowatts(154.0), 10e6).in_femtojoules() ==
        doctest::Approx(15.4).epsilon(1e-12));
  CHECK(pulse_energy_from_avg_power(Power{}, 1e6).in_joules() == 0.0);
  CHECK_THROWS_AS(pulse_energy_from_avg_power(Power::nanowatts(1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pulse_energy_from_avg_power(Power::nanowatts(1.0), -5.0),
                  std::invalid_argument);

  // Linear in the average power.
  const double rate = 7.5e6;
  for (double a : {0.0, 1.0, 35.0, 3056.0}) {
    for (double k : {0.5, 2.0, 20.0}) {
      const double scaled =
          pulse_energy_from_avg_power(Power::nanowatts(a).scaled(k), rate).in_joules();
      const double base = pulse_energy_from_avg_power(Power::nanowatts(a), rate).in_joules();
      CHECK(scaled == doctest::Approx(k * base).epsilon(1e-12));
    }
  }
}

TEST_CASE("quantities reject negative and non-finite values") {
  CHECK_THROWS_AS(Power::nanowatts(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Energy::femtojoules(INFINITY), std::invalid_argument);
  CHECK(Power::nanowatts(35.0).in_watts() == 35e-9);
}

TEST_CASE("presentation units convert back bit for bit") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> nw(0.0, 5000.0);
  for (int i = 0; i < 5000; ++i) {
    const double w = Power::nanowatts(nw(gen)).in_watts();
    REQUIRE(to_presentation_unit(w, 1e9) / 1e9 == w);
  }
}

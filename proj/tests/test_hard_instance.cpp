#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "sketchlb/hard_instance.hpp"

using namespace sketchlb;

TEST_CASE("gaussian_abs_moment") {
  CHECK(gaussian_abs_moment(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gaussian_abs_moment(4.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(gaussian_abs_moment(6.0) == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(gaussian_abs_moment(3.0) == doctest::Approx(4.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(gaussian_abs_moment(3.0) == doctest::Approx(1.5957691216057308).epsilon(1e-15));

  // 2 * int_0^inf x^p phi(x) dx by quadrature.
  for (double p : {2.5, 3.0, 5.5}) {
    const double quad = 2.0 * oracle::simpson([p](double x) { return std::pow(x, p) * oracle::normal_pdf(x); },
                                              0.0, 40.0);
    CHECK(gaussian_abs_moment(p) == doctest::Approx(quad).epsilon(1e-9));
  }

  CHECK_THROWS_AS(gaussian_abs_moment(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_abs_moment(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_abs_moment(NAN), std::invalid_argument);
}

TEST_CASE("derive_params") {
  const HardInstanceParams p4 = derive_params(10000, 4.0, 0.25);
  CHECK(p4.t_p == doctest::Approx(3.0));
  CHECK(p4.C == doctest::Approx(std::pow(300.0, 0.25)).epsilon(1e-14));
  CHECK(p4.C1 == doctest::Approx(26.647165801151267).epsilon(1e-15));
  CHECK(p4.spike == doctest::Approx(266.47165801151267).epsilon(1e-14));
  CHECK(p4.null_radius() == doctest::Approx(10.0 * p4.C).epsilon(1e-14));
  CHECK(p4.spiked_radius() == doctest::Approx(40.0 * p4.C).epsilon(1e-14));

  CHECK(derive_params(16, 4.0).eps == doctest::Approx(0.25));
  CHECK(derive_params(16, 3.0).eps == doctest::Approx(1.0 / 6.0));

  // Large p stays finite even though t_p does not fit in a double.
  const HardInstanceParams huge = derive_params(1024, 400.0);
  CHECK(std::isfinite(huge.C));
  CHECK(huge.C > 1.0);

  CHECK_THROWS_AS(derive_params(0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(16, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(16, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(16, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(16, 4.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(16, 4.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(16, 4.0, -0.1), std::invalid_argument);
}

TEST_CASE("C1 doubling ratio climbs toward sqrt(2)") {
  // The additive 10 dominates for moderate p, so the ratio starts near 1.
  const auto ratio = [](double p) { return derive_params(2, 2.0 * p).C1 / derive_params(2, p).C1; };
  CHECK(ratio(8.0) == doctest::Approx(1.0217248549).epsilon(1e-8));
  CHECK(ratio(64.0) == doctest::Approx(1.2441435811).epsilon(1e-8));
  double previous = 1.0;
  for (double p = 8.0; p <= 1e8; p *= 2.0) {
    const double r = ratio(p);
    CHECK(r > previous);
    CHECK(r < std::sqrt(2.0));
    previous = r;
  }
  CHECK(ratio(256.0) > 1.30);
  CHECK(ratio(1e8) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("pnorm") {
  Vector x(3);
  x << 3.0, -4.0, 0.0;
  CHECK(pnorm(x, 2.0) == doctest::Approx(5.0));
  CHECK(pnorm(x, 4.0) == doctest::Approx(std::pow(81.0 + 256.0, 0.25)));
  CHECK(pnorm(Vector::Zero(4), 3.0) == 0.0);
  Vector big = Vector::Constant(4, 1e300);
  CHECK(pnorm(big, 50.0) == doctest::Approx(1e300 * std::pow(4.0, 1.0 / 50.0)));
}

TEST_CASE("base samplers") {
  SUBCASE("dimension one") {
    const HardInstanceParams params = derive_params(1, 4.0);
    Stream rng(3, Purpose::BaseSpiked);
    const LabeledSample s = sample_base_spiked(params, rng);
    CHECK(s.spike_index == std::optional<std::size_t>(0));
    CHECK(s.x.size() == 1);
    Stream rng2(3, Purpose::BaseNull);
    const LabeledSample z = sample_base_null(params, rng2);
    CHECK_FALSE(z.spike_index.has_value());
    CHECK(z.pnorm == doctest::Approx(std::abs(z.x(0))));
  }
  SUBCASE("mean fourth power matches n t_4") {
    const HardInstanceParams params = derive_params(256, 4.0);
    Stream rng(5, Purpose::BaseNull);
    long double total = 0.0L;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r) total += std::pow(sample_base_null(params, rng).pnorm, 4.0);
    CHECK(double(total / reps) == doctest::Approx(256.0 * 3.0).epsilon(0.05));
  }
  SUBCASE("spike adds exactly the amplitude") {
    const HardInstanceParams params = derive_params(32, 4.0);
    Stream a(9, Purpose::BaseSpiked), b(9, Purpose::BaseSpiked);
    const LabeledSample s = sample_base_spiked(params, a);
    Vector y(32);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = b.normal();
    const Vector diff = s.x - y;
    const auto t = static_cast<Eigen::Index>(*s.spike_index);
    CHECK(diff(t) == doctest::Approx(params.spike));
    CHECK(diff.cwiseAbs().sum() == doctest::Approx(params.spike));
  }
  SUBCASE("spike index is uniform") {
    const std::size_t n = 64;
    const HardInstanceParams params = derive_params(n, 4.0);
    Stream rng(13, Purpose::BaseSpiked);
    std::vector<double> counts(n, 0.0);
    const int draws = 100000;
    for (int d = 0; d < draws; ++d) counts[*sample_base_spiked(params, rng).spike_index] += 1.0;
    const double expected = double(draws) / double(n);
    double stat = 0.0;
    for (double c : counts) stat += (c - expected) * (c - expected) / expected;
    // 0.999 quantile of chi-square with 63 degrees of freedom.
    CHECK(stat < 103.4);
  }
}

TEST_CASE("conditioned samplers respect their events") {
  const HardInstanceParams params = derive_params(512, 4.0);
  Stream rng(21, Purpose::Conditioned);
  std::size_t retries = 0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    const ConditionedSample a = sample_conditioned(params, Source::CondNull, rng);
    CHECK(a.sample.source == Source::CondNull);
    CHECK(a.sample.pnorm <= params.null_radius());
    const ConditionedSample b = sample_conditioned(params, Source::CondSpiked, rng);
    CHECK(b.sample.source == Source::CondSpiked);
    CHECK(b.sample.pnorm >= params.spiked_radius());
    CHECK(b.sample.spike_index.has_value());
    retries += a.retries + b.retries;
  }
  CHECK(double(retries) / (2.0 * reps) <= 0.02);
  CHECK_THROWS_AS(sample_conditioned(params, Source::BaseNull, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_conditioned(params, Source::CondNull, rng, 0), std::invalid_argument);
}

TEST_CASE("conditioned sampler reports exhaustion") {
  // At n = 1 a null draw is rejected with probability 2 Phi(-C), about 3e-5.
  // Find a stream whose first draw is rejected, then allow a single attempt.
  const HardInstanceParams params = derive_params(1, 4.0);
  std::optional<std::size_t> found;
  for (std::size_t idx = 0; idx < 2000000 && !found; ++idx) {
    Stream probe(77, Purpose::Conditioned, idx);
    if (std::abs(probe.normal()) > params.null_radius()) found = idx;
  }
  REQUIRE(found.has_value());
  Stream rng(77, Purpose::Conditioned, *found);
  try {
    sample_conditioned(params, Source::CondNull, rng, 1);
    FAIL("expected RetriesExhausted");
  } catch (const RetriesExhausted& e) {
    CHECK(e.retries() == 1);
  }
  Stream again(77, Purpose::Conditioned, *found);
  const ConditionedSample ok = sample_conditioned(params, Source::CondNull, again, 5);
  CHECK(ok.retries >= 1);
}

TEST_CASE("truncation events are rare") {
  const HardInstanceParams params = derive_params(4096, 4.0);
  for (TruncationEvent e : {TruncationEvent::EComplement, TruncationEvent::FComplement,
                            TruncationEvent::SpikeShortfall}) {
    const Estimate est = event_probability_mc(params, e, 2000, 4);
    CHECK(est.value <= 0.01);
  }
  CHECK_THROWS_AS(event_probability_mc(params, TruncationEvent::EComplement, 99, 1), std::invalid_argument);
}

TEST_CASE("null rejection rate matches the closed form at n = 1") {
  const HardInstanceParams params = derive_params(1, 4.0);
  const double exact = 2.0 * oracle::normal_cdf(-params.null_radius());
  CHECK(exact == doctest::Approx(3.2e-5).epsilon(0.05));
  const std::size_t trials = 1000000;
  const Estimate est = event_probability_mc(params, TruncationEvent::EComplement, trials, 8);
  const double se = std::sqrt(exact * (1.0 - exact) / double(trials));
  CHECK(std::abs(est.value - exact) <= 3.0 * se);
}

TEST_CASE("sample CSV export") {
  const HardInstanceParams params = derive_params(3, 4.0);
  std::ostringstream out;
  write_samples_csv_header(out, 3, true);
  CHECK(out.str() == "source,spike_index,pnorm,x_0,x_1,x_2\n");
  Stream rng(1, Purpose::BaseSpiked);
  const LabeledSample s = sample_base_spiked(params, rng);
  std::ostringstream row;
  write_sample_csv(row, s, false);
  CHECK(row.str().rfind("BaseSpiked," + std::to_string(*s.spike_index) + ",", 0) == 0);
  std::ostringstream null_row;
  Stream rng2(1, Purpose::BaseNull);
  write_sample_csv(null_row, sample_base_null(params, rng2), false);
  CHECK(null_row.str().rfind("BaseNull,,", 0) == 0);
}

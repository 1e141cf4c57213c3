#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "sketchlb/rng.hpp"

using namespace sketchlb;

TEST_CASE("streams are reproducible and keyed") {
  Stream a(42, Purpose::BaseNull, 7), b(42, Purpose::BaseNull, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

  Stream c(42, Purpose::BaseNull, 8), d(42, Purpose::BaseSpiked, 7), e(43, Purpose::BaseNull, 7);
  Stream ref(42, Purpose::BaseNull, 7);
  const auto first = ref.next_u64();
  CHECK(c.next_u64() != first);
  CHECK(d.next_u64() != first);
  CHECK(e.next_u64() != first);
}

TEST_CASE("uniform and normal moments") {
  Stream rng(1, Purpose::Verification, 0);
  const int count = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(std::abs(su / count - 0.5) < 4 * std::sqrt(1.0 / 12 / count));
  CHECK(std::abs(sn / count) < 4 / std::sqrt(count));
  CHECK(std::abs(sn2 / count - 1.0) < 4 * std::sqrt(2.0 / count));
}

TEST_CASE("below stays in range and covers it") {
  Stream rng(3, Purpose::Verification, 1);
  std::vector<int> seen(5, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng.below(5);
    REQUIRE(k < 5);
    ++seen[k];
  }
  for (int s : seen) CHECK(s > 0);
  CHECK(rng.below(1) == 0);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

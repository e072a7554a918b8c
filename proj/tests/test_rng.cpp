#include <cmath>
#include <set>

#include "doctest.h"
#include "z2amp/rng.hpp"

using namespace z2amp;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 kat_vectors.
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                   {0xffffffffu, 0xffffffffu}) ==
        PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                   {0xa4093822u, 0x299f31d0u}) ==
        PhiloxCounter{0xd16cfe09u, 0x94fdcceb, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("draws are pure functions of (seed, stream, index)") {
  CounterRng a(42), b(42), c(43);
  CHECK(a.uniform(Stream::Noise, 7, 3) == b.uniform(Stream::Noise, 7, 3));
  CHECK(a.uniform(Stream::Noise, 7, 3) != c.uniform(Stream::Noise, 7, 3));
  CHECK(a.bits(Stream::Noise, 7, 3) != a.bits(Stream::Signal, 7, 3));
  CHECK(a.bits(Stream::Init, 7, 3) != a.bits(Stream::PowerStart, 7, 3));
  CHECK(a.bits(Stream::Noise, 7, 3) != a.bits(Stream::Noise, 3, 7));
  // High index bits matter.
  CHECK(a.bits(Stream::Noise, 1, 0) != a.bits(Stream::Noise, 1 + (std::uint64_t{1} << 32), 0));
}

TEST_CASE("uniform lies in the open unit interval") {
  CounterRng rng(1);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform(Stream::Init, i);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / count == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("normal pairs have standard moments and are uncorrelated") {
  CounterRng rng(9);
  const int count = 200000;
  double s1 = 0, s2 = 0, s4 = 0, cross = 0;
  for (int i = 0; i < count; ++i) {
    const auto [z0, z1] = rng.normal_pair(Stream::Noise, i, 5);
    s1 += z0 + z1;
    s2 += z0 * z0 + z1 * z1;
    s4 += z0 * z0 * z0 * z0 + z1 * z1 * z1 * z1;
    cross += z0 * z1;
  }
  const double m = 2.0 * count;
  CHECK(std::abs(s1 / m) < 0.01);
  CHECK(s2 / m == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s4 / m == doctest::Approx(3.0).epsilon(0.03));
  CHECK(std::abs(cross / count) < 0.01);
  CHECK(rng.normal(Stream::Noise, 3, 5) == rng.normal_pair(Stream::Noise, 3, 5).first);
}

TEST_CASE("sign is balanced") {
  CounterRng rng(3);
  int sum = 0;
  std::set<int> seen;
  for (int i = 0; i < 100000; ++i) {
    const int s = rng.sign(Stream::Signal, i);
    seen.insert(s);
    sum += s;
  }
  CHECK(seen == std::set<int>{-1, 1});
  CHECK(std::abs(sum) < 1500);
}

#include <doctest.h>

#include <set>

#include "wreathlab/rng.hpp"

using namespace wreathlab;

TEST_SUITE("rng") {
  TEST_CASE("Philox4x32-10 known answers") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("streams are deterministic and distinct") {
    PhiloxStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 100; ++i) {
      auto x = a.next_u64();
      CHECK(x == b.next_u64());
      seen.insert(x);
      seen.insert(c.next_u64());
      seen.insert(d.next_u64());
    }
    CHECK(seen.size() == 300);
  }

  TEST_CASE("stream words follow the counter layout") {
    PhiloxStream s(0x0000000100000002ull, 3);
    auto block = philox4x32_10({0, 0, 3, 0}, {2, 1});
    for (int i = 0; i < 4; ++i) CHECK(s.next_u32() == block[i]);
    auto next = philox4x32_10({1, 0, 3, 0}, {2, 1});
    CHECK(s.next_u32() == next[0]);
  }

  TEST_CASE("uniform01 and below stay in range") {
    PhiloxStream s(7, 0);
    double sum = 0;
    std::uint64_t counts[3] = {0, 0, 0};
    for (int i = 0; i < 30000; ++i) {
      double u = s.uniform01();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum += u;
      auto k = s.below(3);
      REQUIRE(k < 3);
      ++counts[k];
    }
    CHECK(sum / 30000 == doctest::Approx(0.5).epsilon(0.02));
    for (auto c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.05));
    CHECK(s.below(1) == 0);
  }
}

#include <doctest.h>

#include <string>
#include <vector>

#include "generators.hpp"
#include "wreathlab/errors.hpp"
#include "wreathlab/group.hpp"

using namespace wreathlab;

namespace {

// Stack-based free reduction, written independently of the library.
std::string reduce_oracle(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() != c && std::tolower(out.back()) == std::tolower(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::vector<GroupHandle> families() {
  return {GroupHandle::integers(1), GroupHandle::integers(3), GroupHandle::cyclic(2), GroupHandle::cyclic(7),
          GroupHandle::free_group(2), GroupHandle::free_group(3), GroupHandle::free_solvable(2, 2),
          GroupHandle::free_solvable(2, 3)};
}

}  // namespace

TEST_SUITE("group") {
  TEST_CASE("multiply and inverse examples") {
    auto z2 = GroupHandle::integers(2);
    CHECK(multiply(z2.parse("1,0"), z2.parse("0,1")) == z2.parse("1,1"));
    CHECK(inverse(z2.parse("2,-1")) == z2.parse("-2,1"));
    auto f2 = GroupHandle::free_group(2);
    CHECK(to_text(multiply(f2.parse("ab"), f2.parse("Ba"))) == "aa");
    CHECK(to_text(inverse(f2.parse("aB"))) == "bA");
    auto c4 = GroupHandle::cyclic(4);
    CHECK(multiply(c4.parse("3"), c4.parse("2")) == c4.parse("1"));
    CHECK(inverse(c4.identity()) == c4.identity());
  }

  TEST_CASE("word length and balls") {
    auto z3 = GroupHandle::integers(3);
    CHECK(word_length(z3.parse("1,-2,0")) == 3);
    CHECK(ball_membership(z3.parse("1,-2,0"), 3));
    CHECK_FALSE(ball_membership(z3.parse("1,-2,0"), 2));
    CHECK(ball_membership(z3.identity(), 0));
    CHECK(word_length(GroupHandle::free_group(2).parse("abA")) == 3);
    CHECK(word_length(GroupHandle::cyclic(7).parse("5")) == 2);
    CHECK_THROWS_AS(word_length(GroupHandle::free_solvable(2, 2).generator(0)), UnsupportedError);
  }

  TEST_CASE("free reduction matches a stack oracle") {
    gen::Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
      auto w = gen::word(rng, 3, 30);
      CHECK(free_reduce(w) == reduce_oracle(w));
      CHECK(to_text(BaseElement::word(w, 3)) == (reduce_oracle(w).empty() ? "e" : reduce_oracle(w)));
    }
  }

  TEST_CASE("group axioms on random triples") {
    gen::Rng rng(7);
    for (const auto& g : families()) {
      CAPTURE(g.name());
      for (int i = 0; i < 300; ++i) {
        auto a = gen::element(rng, g), b = gen::element(rng, g), c = gen::element(rng, g);
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
        CHECK(multiply(a, g.identity()) == a);
        CHECK(multiply(g.identity(), a) == a);
        CHECK(multiply(a, inverse(a)).is_identity());
        CHECK(g.contains(a));
      }
    }
  }

  TEST_CASE("symmetric generators pair up") {
    for (const auto& g : families()) {
      CAPTURE(g.name());
      for (int i = 0; i < g.rank(); ++i) CHECK(inverse(g.generator(i)) == g.generator_inverse(i));
      for (const auto& s : g.symmetric_generators()) {
        bool found = false;
        for (const auto& t : g.symmetric_generators()) found |= multiply(s, t).is_identity();
        CHECK(found);
      }
    }
    CHECK(GroupHandle::cyclic(2).symmetric_generators().size() == 1);
    CHECK(GroupHandle::free_group(3).symmetric_generators().size() == 6);
  }

  TEST_CASE("evaluate_word is a homomorphism") {
    gen::Rng rng(5);
    for (const auto& g : families()) {
      for (int i = 0; i < 100; ++i) {
        auto u = gen::word(rng, g.rank(), 10), v = gen::word(rng, g.rank(), 10);
        CHECK(g.evaluate_word(u + v) == multiply(g.evaluate_word(u), g.evaluate_word(v)));
      }
    }
  }

  TEST_CASE("text round trip") {
    gen::Rng rng(3);
    for (const auto& g : families()) {
      if (g.family() == Family::Solvable) continue;
      for (int i = 0; i < 100; ++i) {
        auto a = gen::element(rng, g);
        CHECK(g.parse(to_text(a)) == a);
      }
    }
    CHECK(GroupHandle::free_group(2).parse("e").is_identity());
  }

  TEST_CASE("finite groups enumerate") {
    auto c5 = GroupHandle::cyclic(5);
    CHECK(c5.elements().size() == 5);
    CHECK(c5.is_finite());
    CHECK_FALSE(GroupHandle::integers(1).is_finite());
  }

  TEST_CASE("group specs") {
    CHECK(parse_group_spec("Z") == GroupHandle::integers(1));
    CHECK(parse_group_spec("Z^3") == GroupHandle::integers(3));
    CHECK(parse_group_spec("Z/4") == GroupHandle::cyclic(4));
    CHECK(parse_group_spec("F_2") == GroupHandle::free_group(2));
    CHECK(parse_group_spec("S_{2,3}") == GroupHandle::free_solvable(2, 3));
    CHECK(parse_group_spec("S_{2,1}") == GroupHandle::integers(2));
    CHECK(parse_group_spec("1").is_finite());
    CHECK_THROWS_AS(parse_group_spec("Q8"), ParseError);
    CHECK_THROWS_AS(parse_group_spec("Z/0"), ParseError);
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(GroupHandle::free_group(2).parse("ac"), ParseError);
    CHECK_THROWS_AS(GroupHandle::integers(2).parse("1,2,3"), ParseError);
    CHECK_THROWS_AS(GroupHandle::integers(2).parse("1,x"), ParseError);
  }

  TEST_CASE("family mismatch") {
    CHECK_THROWS_AS(multiply(GroupHandle::integers(2).identity(), GroupHandle::free_group(2).identity()), UsageError);
    CHECK_THROWS_AS(multiply(GroupHandle::integers(2).identity(), GroupHandle::integers(3).identity()), UsageError);
  }

  TEST_CASE("checked arithmetic") {
    CHECK_THROWS_AS(checked::add(INT64_MAX, 1), std::overflow_error);
    CHECK(checked::add(2, 3) == 5);
  }
}

#include <map>
#include <set>

#include "doctest.h"
#include "proxybo/error.hpp"
#include "proxybo/space.hpp"

using namespace proxybo;

TEST_CASE("sample_uniform stays in range") {
  SearchSpaceSpec spec{6, 5, "nb2"};
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const auto x = sample_uniform(spec, rng);
    CHECK(x.size() == 6);
    CHECK(x.valid_for(spec));
  }
}

TEST_CASE("sample_uniform frequency on a binary dimension") {
  SearchSpaceSpec spec{1, 2, "coin"};
  Rng rng(7);
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) zeros += sample_uniform(spec, rng)[0] == 0;
  CHECK(std::abs(zeros / 10000.0 - 0.5) <= 0.02);
}

TEST_CASE("sample_uniform covers a small space") {
  SearchSpaceSpec spec{2, 2, "tiny"};
  std::set<ArchEncoding> seen;
  for (std::uint64_t seed = 0; seed < 64 && seen.size() < 4; ++seed) {
    Rng rng(seed);
    seen.insert(sample_uniform(spec, rng));
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("sample_uniform replays under a fixed seed") {
  SearchSpaceSpec spec{6, 5, "nb2"};
  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) CHECK(sample_uniform(spec, a) == sample_uniform(spec, b));
}

TEST_CASE("mutate_one_edge changes exactly one dimension") {
  SearchSpaceSpec spec{2, 2, "tiny"};
  Rng rng(1);
  const ArchEncoding x({0, 0});
  for (int i = 0; i < 20; ++i) {
    const auto y = mutate_one_edge(x, spec, rng);
    CHECK((y == ArchEncoding({1, 0}) || y == ArchEncoding({0, 1})));
  }

  SearchSpaceSpec nb2{6, 5, "nb2"};
  for (int i = 0; i < 500; ++i) {
    const auto base = sample_uniform(nb2, rng);
    const auto m = mutate_one_edge(base, nb2, rng);
    CHECK(hamming_distance(base, m) == 1);
    CHECK(m.valid_for(nb2));
    CHECK(m != base);
  }
}

TEST_CASE("mutate_one_edge reaches the whole single-edit neighbourhood") {
  SearchSpaceSpec spec{6, 5, "nb2"};
  const ArchEncoding x({3, 0, 4, 1, 1, 2});
  // Enumeration oracle: every encoding at Hamming distance 1.
  std::set<ArchEncoding> expected;
  for (const auto& y : enumerate_all(spec)) {
    if (hamming_distance(x, y) == 1) expected.insert(y);
  }
  CHECK(expected.size() == 24);
  std::set<ArchEncoding> seen;
  Rng rng(5);
  for (int i = 0; i < 5000 && seen.size() < expected.size(); ++i) seen.insert(mutate_one_edge(x, spec, rng));
  CHECK(seen == expected);
}

TEST_CASE("mutate_one_edge rejects a space without alternatives") {
  SearchSpaceSpec spec{3, 1, "degenerate"};
  Rng rng(0);
  CHECK_THROWS_AS(mutate_one_edge(ArchEncoding({0, 0, 0}), spec, rng), InvalidSpace);
}

TEST_CASE("enumerate yields lexicographic order once each") {
  SearchSpaceSpec spec{2, 2, "tiny"};
  const auto all = enumerate_all(spec);
  REQUIRE(all.size() == 4);
  CHECK(all[0] == ArchEncoding({0, 0}));
  CHECK(all[1] == ArchEncoding({0, 1}));
  CHECK(all[2] == ArchEncoding({1, 0}));
  CHECK(all[3] == ArchEncoding({1, 1}));

  CHECK(enumerate_all({3, 3, "s"}).size() == 27);
  const auto nb2 = enumerate_all({6, 5, "nb2"});
  CHECK(nb2.size() == 15625);
  CHECK(std::set<ArchEncoding>(nb2.begin(), nb2.end()).size() == 15625);
  for (std::size_t i = 0; i < nb2.size(); i += 997) {
    CHECK(encoding_index(nb2[i], {6, 5, "nb2"}) == i);
    CHECK(encoding_at(i, {6, 5, "nb2"}) == nb2[i]);
  }
}

TEST_CASE("enumerate refuses oversized spaces") {
  SearchSpaceSpec spec{12, 5, "big"};
  try {
    enumerate(spec, [](const ArchEncoding&) {});
    FAIL("expected SpaceTooLarge");
  } catch (const SpaceTooLarge& e) {
    CHECK(e.size() == doctest::Approx(244140625.0));
  }
}

TEST_CASE("space validation") {
  CHECK_THROWS_AS((SearchSpaceSpec{0, 5, "x"}.validate()), InvalidSpace);
  CHECK_THROWS_AS((SearchSpaceSpec{2, 1, "x"}.validate()), InvalidSpace);
  CHECK_NOTHROW((SearchSpaceSpec{1, 2, "x"}.validate()));
}

TEST_CASE("canonical text form round-trips") {
  SearchSpaceSpec spec{6, 5, "nb2"};
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto x = sample_uniform(spec, rng);
    CHECK(ArchEncoding::parse(x.to_string()) == x);
  }
  CHECK(ArchEncoding({3, 0, 4, 1, 1, 2}).to_string() == "3,0,4,1,1,2");
  CHECK_THROWS_AS(ArchEncoding::parse(""), InvalidArgument);
  CHECK_THROWS_AS(ArchEncoding::parse("1,,2"), InvalidArgument);
  CHECK_THROWS_AS(ArchEncoding::parse("1,2,"), InvalidArgument);
  CHECK_THROWS_AS(ArchEncoding::parse("1;2"), InvalidArgument);
}

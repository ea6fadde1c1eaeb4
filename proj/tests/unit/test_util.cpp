#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "trajevo/rng.hpp"
#include "trajevo/util/parallel.hpp"
#include "trajevo/util/text.hpp"

using namespace trajevo;

TEST_CASE("fmt_g9 renders nine significant digits") {
  CHECK(fmt_g9(1.0) == "1");
  CHECK(fmt_g9(-2.5) == "-2.5");
  CHECK(fmt_g9(0.1) == "0.1");
  CHECK(fmt_g9(1.0 / 3.0) == "0.333333333");
  CHECK(fmt_g9(123456789.0) == "123456789");
  CHECK(fmt_g9(1234567891.0) == "1.23456789e+09");
  CHECK(fmt_g9(0.0) == "0");
  CHECK(fmt_g9(-0.25) == "-0.25");
}

TEST_CASE("sha256 matches published digests") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("truncate_words keeps the first N words") {
  CHECK(truncate_words("one two three four", 2) == "one two");
  CHECK(truncate_words("one two", 5) == "one two");
  CHECK(truncate_words("  padded\n with\twhitespace  ", 2) == "padded with");
  CHECK(truncate_words("", 3) == "");
  CHECK(count_words("a b  c\nd") == 4);
}

TEST_CASE("text helpers") {
  CHECK(replace_all("a-b-c", "-", "+") == "a+b+c");
  CHECK(trim("  x \n") == "x");
  CHECK(split_lines("a\nb\n") == std::vector<std::string>{"a", "b"});
  CHECK(split_lines("a\n\nb") == std::vector<std::string>{"a", "", "b"});
  CHECK(join({"a", "b"}, ", ") == "a, b");
  CHECK(starts_with("abc", "ab"));
  CHECK(!starts_with("a", "ab"));
}

TEST_CASE("rng seeding matches the splitmix64 reference sequence") {
  Rng r(0);
  const auto s = r.state();
  CHECK(s[0] == 0xe220a8397b1dcdafULL);
  CHECK(s[1] == 0x6e789e6aa1b965f4ULL);
  CHECK(s[2] == 0x06c45d188009454fULL);
  CHECK(s[3] == 0xf88bb8a8724c81ecULL);
  CHECK(r.next() == 5987356902031041503ULL);
  CHECK(r.next() == 7051070477665621255ULL);
  CHECK(r.next() == 6633766593972829180ULL);
}

TEST_CASE("rng streams are reproducible and serializable") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  for (int i = 0; i < 7; ++i) a.uniform();
  Rng c = Rng::deserialize(a.serialize());
  for (int i = 0; i < 50; ++i) CHECK(a.next() == c.next());
}

TEST_CASE("rng transforms stay in range") {
  Rng r(7);
  for (int i = 0; i < 2000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::size_t k = r.uniform_index(13);
    CHECK(k < 13);
    seen.insert(k);
  }
  CHECK(seen.size() == 13);
  for (int i = 0; i < 100; ++i) CHECK(r.bernoulli(1.0));
  for (int i = 0; i < 100; ++i) CHECK(!r.bernoulli(0.0));

  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += r.normal(2.0, 0.5);
  CHECK(sum / 10000.0 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("parallel_map preserves input order") {
  auto out = parallel_map<int>(257, 8, [](std::size_t i) {
    return static_cast<int>(i * i);
  });
  REQUIRE(out.size() == 257);
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out[i] == static_cast<int>(i * i));

  auto empty = parallel_map<int>(0, 4, [](std::size_t) { return 1; });
  CHECK(empty.empty());
}

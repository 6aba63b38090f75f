#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support/oracles.hpp"

using namespace ergolab;

namespace {
Point torus1(double t) { return TorusPoint::from_turns({t}); }
}  // namespace

TEST_CASE("diagonal fills every vertex", "[cubes]") {
  Point x = torus1(0.37);
  auto c1 = diagonal(x, 1);
  REQUIRE(c1.entries.size() == 2);
  REQUIRE(points_equal(c1.at(0), x));
  REQUIRE(points_equal(c1.at(1), x));
  auto c3 = diagonal(x, 3);
  REQUIRE(c3.entries.size() == 8);
  for (const auto& e : c3.entries) REQUIRE(points_equal(e, x));

  auto sys = make_rotation_golden();
  auto same = apply_face_word(FaceWord{{0, 0, 0}}, sys, c3);
  REQUIRE(same == c3);
}

TEST_CASE("face transformations act on the eps_j = 1 entries", "[cubes]") {
  auto sys = make_rotation_golden();
  // entries ordered (00, 10, 01, 11)
  CubePoint c{2, {torus1(0.1), torus1(0.2), torus1(0.3), torus1(0.4)}};
  auto j2 = apply_face(2, sys, c);
  REQUIRE(points_equal(j2.at(0b00), c.at(0b00)));
  REQUIRE(points_equal(j2.at(0b01), c.at(0b01)));
  REQUIRE(points_equal(j2.at(0b10), iterate(sys, c.at(0b10), 1)));
  REQUIRE(points_equal(j2.at(0b11), iterate(sys, c.at(0b11), 1)));

  auto j1 = apply_face(1, sys, c);
  REQUIRE(points_equal(j1.at(0b00), c.at(0b00)));
  REQUIRE(points_equal(j1.at(0b01), iterate(sys, c.at(0b01), 1)));
  REQUIRE(points_equal(j1.at(0b10), c.at(0b10)));
  REQUIRE(points_equal(j1.at(0b11), iterate(sys, c.at(0b11), 1)));

  REQUIRE_THROWS_AS(apply_face(3, sys, c), ConfigError);
}

TEST_CASE("face transformations commute", "[cubes]") {
  auto sys = make_skew_product(CirclePoint::golden());
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    CubePoint c{2,
                {random_point(sys, rng), random_point(sys, rng), random_point(sys, rng),
                 random_point(sys, rng)}};
    auto ab = apply_face(1, sys, apply_face(2, sys, c));
    auto ba = apply_face(2, sys, apply_face(1, sys, c));
    REQUIRE(ab == ba);
  }
}

TEST_CASE("face word action equals the direct formula on the diagonal", "[cubes]") {
  auto sys = make_rotation_golden();
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    Point x = random_point(sys, rng);
    int d = 1 + static_cast<int>(rng() % 3);
    std::vector<std::int64_t> n(static_cast<std::size_t>(d));
    for (auto& ni : n) ni = static_cast<std::int64_t>(rng() % 2001) - 1000;
    auto cube = apply_face_word(FaceWord{n}, sys, diagonal(x, d));
    for (std::uint32_t bits = 0; bits < CubeIndex::count(d); ++bits) {
      std::int64_t e = CubeIndex{d, bits}.dot(n);
      REQUIRE(points_equal(cube.at(bits), iterate(sys, x, e)));
    }
  }
}

TEST_CASE("the eps_j = 0 face is untouched", "[cubes]") {
  auto sys = make_cat_map();
  std::mt19937_64 rng(23);
  CubePoint c{3, std::vector<Point>(8, random_point(sys, rng))};
  for (auto& e : c.entries) e = random_point(sys, rng);
  for (int j = 1; j <= 3; ++j) {
    auto moved = apply_face(j, sys, c);
    for (std::uint32_t bits = 0; bits < 8; ++bits)
      if (!((bits >> (j - 1)) & 1u)) REQUIRE(points_equal(moved.at(bits), c.at(bits)));
  }
}

TEST_CASE("decompose and recompose round-trip bit-exactly", "[cubes]") {
  auto sys = make_rotation_golden();
  std::mt19937_64 rng(29);
  for (int d = 1; d <= 3; ++d) {
    CubePoint c{d, {}};
    for (std::uint32_t i = 0; i < CubeIndex::count(d); ++i)
      c.entries.push_back(random_point(sys, rng));
    auto [lo, hi] = c.decompose();
    REQUIRE(CubePoint::compose(lo, hi) == c);
    // x' = (x_{eps 0}): the lower half in the bit order
    for (std::uint32_t i = 0; i < CubeIndex::count(d - 1); ++i)
      REQUIRE(points_equal(lo.at(i), c.at(i)));
  }
}

TEST_CASE("parallelepiped words on the diagonal generate Q^[2] samples", "[cubes]") {
  auto sys = make_rotation_golden();
  Point x = torus1(0.21);
  std::int64_t m = 5, n = 11;
  auto cube = apply_parallelepiped_word(ParallelepipedWord{0, {m, n}}, sys, diagonal(x, 2));
  // (x, T^m x, T^n x, T^{m+n} x)
  REQUIRE(points_equal(cube.at(0b00), x));
  REQUIRE(points_equal(cube.at(0b01), iterate(sys, x, m)));
  REQUIRE(points_equal(cube.at(0b10), iterate(sys, x, n)));
  REQUIRE(points_equal(cube.at(0b11), iterate(sys, x, m + n)));

  // n0 = 1, n = 0 is the diagonal transformation
  auto diag = apply_parallelepiped_word(ParallelepipedWord{1, {0, 0}}, sys, cube);
  for (std::uint32_t bits = 0; bits < 4; ++bits)
    REQUIRE(points_equal(diag.at(bits), iterate(sys, cube.at(bits), 1)));
}

TEST_CASE("parallelepiped word composition adds exponents", "[cubes]") {
  auto sys = make_rotation_golden();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    CubePoint c{2, {}};
    for (int i = 0; i < 4; ++i) c.entries.push_back(random_point(sys, rng));
    auto rnd = [&] { return static_cast<std::int64_t>(rng() % 201) - 100; };
    ParallelepipedWord w{rnd(), {rnd(), rnd()}};
    ParallelepipedWord v{rnd(), {rnd(), rnd()}};
    auto two_steps = apply_parallelepiped_word(v, sys, apply_parallelepiped_word(w, sys, c));
    auto one_step = apply_parallelepiped_word(w * v, sys, c);
    REQUIRE(two_steps == one_step);
  }
}

TEST_CASE("ap_tuple matches the iterate formula", "[cubes]") {
  auto sys = make_rotation_golden();
  Point x = torus1(0.05);

  auto same = ap_tuple(sys, x, APWord{0, 0, 3});
  for (const auto& p : same) REQUIRE(points_equal(p, x));

  // d = 3, (n, m) = (1, 2): (T x, T^3 x, T^5 x)
  auto t = ap_tuple(sys, x, APWord{1, 2, 3});
  REQUIRE(points_equal(t[0], iterate(sys, x, 1)));
  REQUIRE(points_equal(t[1], iterate(sys, x, 3)));
  REQUIRE(points_equal(t[2], iterate(sys, x, 5)));

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    APWord w{static_cast<std::int64_t>(rng() % 1000), static_cast<std::int64_t>(rng() % 1000),
             1 + static_cast<int>(rng() % 4)};
    auto tup = ap_tuple(sys, x, w);
    for (int j = 1; j <= w.d; ++j)
      REQUIRE(points_equal(tup[static_cast<std::size_t>(j - 1)],
                           iterate(sys, x, w.n + (j - 1) * w.m)));
  }
}

TEST_CASE("sample_parallelepipeds enumerates the box", "[cubes]") {
  auto sys = make_rotation_golden();
  Point x = torus1(0.0);

  auto d1 = sample_parallelepipeds(sys, x, 1, 2, SampleMode::kExhaustive);
  REQUIRE(d1.size() == 2);  // {(x,x), (x,Tx)}

  auto d2 = sample_parallelepipeds(sys, x, 2, 2, SampleMode::kExhaustive);
  REQUIRE(d2.size() == 4);
  bool found = false;
  for (const auto& c : d2) {
    found = found || (points_equal(c.at(0), x) && points_equal(c.at(1), iterate(sys, x, 1)) &&
                      points_equal(c.at(2), iterate(sys, x, 1)) &&
                      points_equal(c.at(3), iterate(sys, x, 2)));
  }
  REQUIRE(found);  // (x, x+a, x+a, x+2a)

  // aperiodic orbit: all N^d samples distinct
  auto d2n8 = sample_parallelepipeds(sys, x, 2, 8, SampleMode::kExhaustive);
  REQUIRE(d2n8.size() == 64);

  // dyadic rotation of period 4 collapses samples
  auto dyadic = make_rotation({CirclePoint::from_fraction(1, 4)});
  auto folded = sample_parallelepipeds(dyadic, x, 1, 8, SampleMode::kExhaustive);
  REQUIRE(folded.size() == 4);

  std::mt19937_64 rng(41);
  auto rnd = sample_parallelepipeds(sys, x, 2, 64, SampleMode::kRandom, 10, &rng);
  REQUIRE(rnd.size() <= 10);
  REQUIRE_THROWS_AS(sample_parallelepipeds(sys, x, 3, 4096, SampleMode::kExhaustive),
                    CapExceeded);
}

TEST_CASE("cube pattern language of Thue-Morse", "[cubes]") {
  auto tm = make_subshift("thue_morse");

  auto lang = cube_pattern_language(tm, 1, 1, 64);
  REQUIRE(lang.size() == 4);  // all four letter pairs

  auto single = cube_pattern_language(tm, 1, 1, 1);
  REQUIRE(single.size() == 1);
  REQUIRE(single.count({"0", "0"}) == 1);

  // monotone in N
  auto small = cube_pattern_language(tm, 1, 2, 8);
  auto big = cube_pattern_language(tm, 1, 2, 32);
  for (const auto& t : small) REQUIRE(big.count(t) == 1);
  REQUIRE(big.size() >= small.size());

  REQUIRE_THROWS_AS(cube_pattern_language(make_rotation_golden(), 1, 1, 4), TypeMismatch);

  // horizon exhaustion surfaces as a cap error
  auto tiny = make_subshift("thue_morse", /*horizon_cap=*/64);
  REQUIRE_THROWS_AS(cube_pattern_language(tiny, 2, 4, 64), HorizonExhausted);
}

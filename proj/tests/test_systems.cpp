#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

using namespace ergolab;

namespace {
Point torus1(double t) { return TorusPoint::from_turns({t}); }
}  // namespace

TEST_CASE("rotation iterate matches closed form", "[systems]") {
  auto sys = make_rotation({CirclePoint::from_fraction(1, 4)});
  Point x = torus1(0.9);
  Point y = iterate(sys, x, 1);
  REQUIRE(std::abs(as_torus(y).coords[0].turns() - 0.15) < 1e-12);

  // dyadic alpha = 1/4: period 4, bit-identical
  Point z = iterate(sys, x, 4);
  REQUIRE(points_equal(z, x));
  REQUIRE(sys.ergodicity == ErgodicityClass::kErgodicNotUniquelyErgodic);
}

TEST_CASE("skew product closed form", "[systems]") {
  auto sys = make_skew_product(CirclePoint::from_fraction(1, 2));
  Point x = TorusPoint::from_turns({0.0, 0.0});
  Point y = iterate(sys, x, 2);
  REQUIRE(as_torus(y).coords[0] == CirclePoint{0});
  REQUIRE(as_torus(y).coords[1] == CirclePoint{0});

  // generator: T(x, y) = (x + a, y + 2x + a)
  auto golden = make_skew_product(CirclePoint::golden());
  Point p = TorusPoint::from_turns({0.3, 0.7});
  Point q1 = iterate(golden, p, 1);
  CirclePoint a = CirclePoint::golden();
  CirclePoint ex = as_torus(p).coords[0] + a;
  CirclePoint ey = as_torus(p).coords[1] + as_torus(p).coords[0].scaled(2) + a;
  REQUIRE(as_torus(q1).coords[0] == ex);
  REQUIRE(as_torus(q1).coords[1] == ey);
}

TEST_CASE("toral automorphism acts exactly mod 1", "[systems]") {
  auto cat = make_cat_map();
  Point x = TorusPoint::from_turns({0.5, 0.5});
  Point y = iterate(cat, x, 1);
  REQUIRE(std::abs(as_torus(y).coords[0].turns() - 0.5) < 1e-15);
  REQUIRE(as_torus(y).coords[1].dist_to_zero() < 1e-15);
  REQUIRE(cat.weakly_mixing);
  REQUIRE(cat.ergodicity == ErgodicityClass::kErgodicNotUniquelyErgodic);

  // a non-hyperbolic automorphism is not tagged weakly mixing
  auto rot90 = make_toral_automorphism(0, -1, 1, 0);
  REQUIRE_FALSE(rot90.weakly_mixing);
}

TEST_CASE("group law and invertibility are bit-exact on torus systems", "[systems]") {
  std::mt19937_64 rng(11);
  std::vector<SystemDescriptor> zoo;
  zoo.push_back(make_rotation_golden());
  zoo.push_back(make_skew_product(CirclePoint::golden()));
  zoo.push_back(make_cat_map());
  zoo.push_back(make_product(make_rotation_golden(), make_cat_map()));
  for (const auto& sys : zoo) {
    for (int trial = 0; trial < 500; ++trial) {
      Point x = random_point(sys, rng);
      std::int64_t m = static_cast<std::int64_t>(rng() % 20001) - 10000;
      std::int64_t n = static_cast<std::int64_t>(rng() % 20001) - 10000;
      REQUIRE(points_equal(iterate(sys, iterate(sys, x, m), n), iterate(sys, x, m + n)));
      REQUIRE(points_equal(iterate(sys, iterate(sys, x, n), -n), x));
    }
  }
}

TEST_CASE("iterating one step at a time equals the closed form", "[systems]") {
  std::mt19937_64 rng(13);
  for (const auto& sys :
       {make_rotation_golden(), make_skew_product(CirclePoint::golden()), make_cat_map()}) {
    Point x = random_point(sys, rng);
    Point walk = x;
    for (int k = 1; k <= 64; ++k) {
      walk = iterate(sys, walk, 1);
      REQUIRE(points_equal(walk, iterate(sys, x, k)));
    }
  }
}

TEST_CASE("observable evaluation", "[systems]") {
  REQUIRE(std::abs(TrigPoly::constant({1.0, 0.0}).eval(as_torus(torus1(0.77))) - 1.0) < 1e-15);
  Complex i{0.0, 1.0};
  REQUIRE(std::abs(TrigPoly::character({1}).eval(as_torus(torus1(0.25))) - i) < 1e-15);

  auto tm = make_subshift("thue_morse");
  SymbolicPoint p0 = as_symbolic(base_point(tm));
  REQUIRE(std::abs(CylinderFunc::indicator("01").eval(p0) - 1.0) < 1e-15);
  // fixed point begins 0 1 1 0 1 0 0 1 ...
  REQUIRE(p0.orbit->word(0, 8) == "01101001");

  // type mismatches are errors
  REQUIRE_THROWS_AS(evaluate(TrigPoly::character({1}), base_point(tm)), TypeMismatch);
  REQUIRE_THROWS_AS(
      evaluate(TrigPoly::character({1, 2}), torus1(0.5)), TypeMismatch);
}

TEST_CASE("invariant integration", "[systems]") {
  // Haar kills nonzero frequencies
  auto sys = make_rotation({CirclePoint::golden(), CirclePoint::from_turns(0.3711)});
  TrigPoly f(2);
  f.add_term({2, -1}, {0.5, 0.0});
  f.add_term({0, 0}, {0.3, 0.0});
  auto r = integrate_invariant(sys, f);
  REQUIRE_FALSE(r.approximate);
  REQUIRE(std::abs(r.value - Complex{0.3, 0.0}) < 1e-15);

  // Thue-Morse letter frequency via the Perron vector
  auto tm = make_subshift("thue_morse");
  auto letter1 = integrate_invariant(tm, CylinderFunc::indicator("1"));
  REQUIRE_FALSE(letter1.approximate);
  REQUIRE(std::abs(letter1.value - Complex{0.5, 0.0}) < 1e-12);

  // Fibonacci letter frequencies: golden-ratio weights
  auto fib = make_subshift("fibonacci");
  auto letter0 = integrate_invariant(fib, CylinderFunc::indicator("0"));
  double phi = (std::sqrt(5.0) + 1.0) / 2.0;
  REQUIRE(std::abs(letter0.value.real() - phi / (phi + 1.0)) < 1e-9);

  // window-2 frequency: approximate, cross-checked against a prefix count
  auto word11 = integrate_invariant(tm, CylinderFunc::indicator("11"));
  REQUIRE(word11.approximate);
  std::uint64_t n = 1ull << 16;
  const auto& orbit = std::get<SubshiftSystem>(tm.variant).orbit;
  orbit->ensure(n + 2);
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < n; ++i)
    if (orbit->letter(i) == 1 && orbit->letter(i + 1) == 1) ++count;
  double empirical = static_cast<double>(count) / static_cast<double>(n);
  REQUIRE(std::abs(word11.value.real() - empirical) < 1e-2);
}

TEST_CASE("Haar invariance witness", "[systems]") {
  auto sys = make_rotation_golden();
  std::mt19937_64 rng(5);
  TrigPoly f = test::random_poly(rng);
  TrigPoly f_T = f.composed_with_rotation({CirclePoint::golden()});
  REQUIRE(std::abs(integrate_invariant(sys, f).value - integrate_invariant(sys, f_T).value) <
          1e-12);
}

TEST_CASE("kronecker coordinate and intertwining", "[systems]") {
  auto skew = make_skew_product(CirclePoint::from_turns(0.125));
  Point p = TorusPoint::from_turns({0.3, 0.7});
  auto k = kronecker_coordinate(skew, p);
  REQUIRE(k.size() == 1);
  REQUIRE(std::abs(k[0].turns() - 0.3) < 1e-12);

  // kronecker(T^n x) = kronecker(x) + n alpha, bit-exact
  auto k5 = kronecker_coordinate(skew, iterate(skew, p, 5));
  REQUIRE(k5[0] == k[0] + CirclePoint::from_turns(0.125).scaled(5));
  REQUIRE(std::abs(k5[0].turns() - 0.925) < 1e-12);

  auto rot = make_rotation_golden();
  Point q = torus1(0.42);
  REQUIRE(kronecker_coordinate(rot, q)[0] == as_torus(q).coords[0]);

  REQUIRE_THROWS_AS(kronecker_coordinate(make_cat_map(), p), AssumptionError);
  REQUIRE_THROWS_AS(kronecker_coordinate(make_subshift("thue_morse"),
                                         base_point(make_subshift("thue_morse"))),
                    AssumptionError);
}

TEST_CASE("subshift horizon is enforced", "[systems]") {
  auto tm = make_subshift("thue_morse", 1 << 10);
  Point p = base_point(tm);
  REQUIRE_THROWS_AS(iterate(tm, p, 5000), HorizonExhausted);
  REQUIRE_THROWS_AS(iterate(tm, p, -1), ConfigError);
}

TEST_CASE("product systems act blockwise", "[systems]") {
  auto prod = make_product(make_rotation_golden(), make_skew_product(CirclePoint::golden()));
  REQUIRE(prod.torus_dim == 3);
  std::mt19937_64 rng(3);
  Point x = random_point(prod, rng);
  Point y = iterate(prod, x, 7);
  const auto& xt = as_torus(x);
  Point lx = TorusPoint(std::vector<CirclePoint>{xt.coords[0]});
  Point rx = TorusPoint(std::vector<CirclePoint>{xt.coords[1], xt.coords[2]});
  auto ly = as_torus(iterate(make_rotation_golden(), lx, 7));
  auto ry = as_torus(iterate(make_skew_product(CirclePoint::golden()), rx, 7));
  REQUIRE(as_torus(y).coords[0] == ly.coords[0]);
  REQUIRE(as_torus(y).coords[1] == ry.coords[0]);
  REQUIRE(as_torus(y).coords[2] == ry.coords[1]);
  REQUIRE_THROWS_AS(make_product(make_rotation_golden(), make_subshift("thue_morse")),
                    ConfigError);
}

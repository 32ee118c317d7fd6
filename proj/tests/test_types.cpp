#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "slopeforge/polygon.hpp"
#include "slopeforge/types.hpp"

using namespace slopeforge;

namespace {

TypeVector tv(std::vector<Rat> v) { return TypeVector(std::move(v)); }

TypeVector random_type(std::mt19937& rng, long len) {
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  std::vector<Rat> v;
  for (long i = 0; i < len; ++i) v.push_back(Rat(num(rng), den(rng)));
  return TypeVector(std::move(v));
}

}  // namespace

TEST_CASE("basic type invariants") {
  auto g = tv({Rat(1), Rat(3), Rat(0)});
  CHECK(g.entries() == std::vector<Rat>{Rat(3), Rat(1), Rat(0)});
  CHECK(degree(g) == Rat(4));
  CHECK(type_to_string(tv({Rat(2), Rat(1, 2), Rat(-1)})) == "(2, 1/2, -1)");
}

TEST_CASE("dominance") {
  auto a = tv({Rat(2), Rat(1), Rat(0)});
  auto b = tv({Rat(1), Rat(1), Rat(1)});
  CHECK(dominance_le(b, a));
  CHECK(!dominance_le(a, b));
  CHECK(!dominance_le(tv({Rat(1), Rat(1), Rat(0)}), a));  // different totals
  CHECK_THROWS_AS(dominance_le(tv({Rat(1)}), a), kernel_error);
}

TEST_CASE("involution and scaling") {
  auto g = tv({Rat(2), Rat(1, 2), Rat(-1)});
  CHECK(involution(g).entries() == std::vector<Rat>{Rat(1), Rat(-1, 2), Rat(-2)});
  CHECK(involution(involution(g)) == g);
  CHECK_THROWS_AS(type_scale(Rat(-1), g), kernel_error);
  CHECK(type_scale(Rat(2), g) == tv({Rat(4), Rat(1), Rat(-2)}));
}

TEST_CASE("concat, tensor, exterior and symmetric powers") {
  auto g = tv({Rat(1), Rat(0)});
  auto d = tv({Rat(1, 2), Rat(-1)});
  CHECK(concat(g, d) == tv({Rat(1), Rat(1, 2), Rat(0), Rat(-1)}));
  CHECK(tensor(g, d) == tv({Rat(3, 2), Rat(1, 2), Rat(0), Rat(-1)}));

  auto h = tv({Rat(3), Rat(1), Rat(0)});
  CHECK(ext_power(2, h) == tv({Rat(4), Rat(3), Rat(1)}));
  CHECK(ext_power(3, h) == tv({Rat(4)}));
  CHECK(ext_power(4, h).length() == 0);

  CHECK(sym_power(2, g) == tv({Rat(2), Rat(1), Rat(0)}));
  CHECK(degree(sym_power(2, g)) == Rat(3));
}

TEST_CASE("degree identities under random operations") {
  std::mt19937 rng(71);
  for (int it = 0; it < 200; ++it) {
    long r = 1 + (it % 3);
    long s = 1 + ((it / 3) % 3);
    auto g = random_type(rng, r);
    auto d = random_type(rng, s);
    CHECK(degree(concat(g, d)) == degree(g) + degree(d));
    CHECK(degree(tensor(g, d)) == Rat(s) * degree(g) + Rat(r) * degree(d));
    auto h2 = random_type(rng, r);
    CHECK(degree(type_add(g, h2)) == degree(g) + degree(h2));
    long k = 1 + (it % r);
    CHECK(degree(ext_power(k, g)) == Rat(binomial(r - 1, k - 1)) * degree(g));
    CHECK(degree(sym_power(k, g)) == Rat(binomial(r + k - 1, k - 1)) * degree(g));
    CHECK(involution(concat(g, d)) == concat(involution(g), involution(d)));
    Rat c(2, 3);
    CHECK(type_scale(c, concat(g, d)) == concat(type_scale(c, g), type_scale(c, d)));
  }
}

TEST_CASE("norm rigidity") {
  std::mt19937 rng(19);
  for (int it = 0; it < 200; ++it) {
    auto a = random_type(rng, 3);
    auto b = random_type(rng, 3);
    if (degree(a) != degree(b)) continue;
    if (dominance_le(a, b) && norm_sq(a) == norm_sq(b)) CHECK(a == b);
    if (dominance_le(a, b)) CHECK(norm_sq(a) <= norm_sq(b));
  }
  auto a = tv({Rat(1), Rat(1), Rat(0)});
  auto b = tv({Rat(2), Rat(0), Rat(0)});
  CHECK(dominance_le(a, b));
  CHECK(norm_sq(a) < norm_sq(b));
}

TEST_CASE("sharp average") {
  CHECK(sharp_average({tv({Rat(1), Rat(0)})}) == tv({Rat(1), Rat(0)}));
  std::vector<TypeVector> orbit2{tv({Rat(2), Rat(0)}), tv({Rat(1), Rat(1)})};
  CHECK(sharp_average(orbit2) == tv({Rat(3, 2), Rat(1, 2)}));
  CHECK_THROWS_AS(sharp_average(std::vector<TypeVector>{}), kernel_error);
}

TEST_CASE("polygons") {
  auto g = tv({Rat(2), Rat(1), Rat(-1)});
  auto f = polygon_of(g);
  CHECK(f(Rat(0)) == Rat(0));
  CHECK(f(Rat(1)) == Rat(2));
  CHECK(f(Rat(3, 2)) == Rat(5, 2));
  CHECK(f(Rat(3)) == Rat(2));
  CHECK(f.domain_end() == Rat(3));

  auto h = polygon_of(tv({Rat(1), Rat(1), Rat(0)}));
  CHECK(polygon_le(h, f));
  CHECK(!polygon_le(f, h));

  auto r = polygon_rescale(2, f);
  CHECK(r.domain_end() == Rat(3, 2));
  CHECK(r(Rat(1, 2)) == Rat(1));

  auto m = polygon_min(f, polygon_of(tv({Rat(3), Rat(0), Rat(-1)})));
  CHECK(m(Rat(1)) == Rat(2));
  CHECK(m(Rat(2)) == Rat(3));
  CHECK(m(Rat(3)) == Rat(2));

  // Dominance corresponds exactly to polygon comparison.
  std::mt19937 rng(5);
  for (int it = 0; it < 100; ++it) {
    auto a = random_type(rng, 3);
    auto b = random_type(rng, 3);
    if (degree(a) != degree(b)) continue;
    CHECK(dominance_le(a, b) == polygon_le(polygon_of(a), polygon_of(b)));
  }
}

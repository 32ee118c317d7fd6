#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slopeforge/tori.hpp"

using namespace slopeforge;

namespace {

TypeVector tv(std::vector<Rat> e) { return TypeVector(std::move(e)); }

// The indicator of embedding k.
CharacterFunction delta(const GaloisSet& s, size_t k) {
  std::vector<Rat> v(s.size, Rat(0));
  v[k] = 1;
  return cf_make(s, std::move(v));
}

}  // namespace

TEST_CASE("hodge and newton cocharacters") {
  auto s2 = galois_cyclic(2);
  CHECK(hodge_cochar(s2).values == std::vector<Rat>{Rat(1), Rat(0)});
  CHECK(newton_cochar(s2).values == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});

  auto s1 = galois_cyclic(1);
  CHECK(hodge_cochar(s1).values == std::vector<Rat>{Rat(1)});
  CHECK(newton_cochar(s1).values == std::vector<Rat>{Rat(1)});

  for (size_t n = 1; n <= 4; ++n) {
    auto s = galois_cyclic(n, n / 2);
    CHECK(hodge_cochar(s).values[n / 2] == 1);
    auto nu = newton_cochar(s);
    Rat sum = 0;
    for (const Rat& v : nu.values) {
      CHECK(v == Rat(1, static_cast<long>(n)));
      sum += v;
    }
    CHECK(sum == 1);
    // nu is exactly the average of the galois orbit of mu
    std::vector<Rat> avg(n, Rat(0));
    for (const auto& sigma : galois_group(s)) {
      auto moved = cf_act(sigma, hodge_cochar(s));
      for (size_t i = 0; i < n; ++i) avg[i] += moved.values[i];
    }
    for (auto& v : avg) v /= Rat(static_cast<long>(galois_group(s).size()));
    CHECK(nu.values == avg);
    // galois invariance under every generator
    for (const auto& g : s.action) CHECK(cf_act(g, nu).values == nu.values);
  }

  // the trivial action on two embeddings is not transitive
  auto split = galois_make(2, {{0, 1}}, 0);
  CHECK_THROWS_AS(newton_cochar(split), kernel_error);

  CHECK_THROWS_AS(galois_make(2, {{0, 0}}, 0), kernel_error);
  CHECK_THROWS_AS(galois_make(2, {}, 2), kernel_error);
}

TEST_CASE("pushforward to weight types") {
  auto s2 = galois_cyclic(2);
  std::vector<CharacterFunction> stable{delta(s2, 0), delta(s2, 1)};
  CHECK(push_to_weights(stable, WeightKind::hodge) == tv({1, 0}));
  CHECK(push_to_weights(stable, WeightKind::newton) == tv({Rat(1, 2), Rat(1, 2)}));

  std::vector<CharacterFunction> zero{cf_make(s2, {Rat(0), Rat(0)}),
                                      cf_make(s2, {Rat(0), Rat(0)})};
  CHECK(push_to_weights(zero, WeightKind::hodge) == tv({0, 0}));
  CHECK(push_to_weights(zero, WeightKind::newton) == tv({0, 0}));

  std::vector<CharacterFunction> one{cf_make(s2, {Rat(1), Rat(1)})};
  CHECK(push_to_weights(one, WeightKind::hodge) == tv({1}));
  CHECK(push_to_weights(one, WeightKind::newton) == tv({1}));

  std::vector<CharacterFunction> mixed{delta(s2, 0), delta(galois_cyclic(3), 0)};
  CHECK_THROWS_AS(push_to_weights(mixed, WeightKind::hodge), kernel_error);

  // degree conservation
  auto s3 = galois_cyclic(3);
  std::vector<CharacterFunction> x{cf_make(s3, {Rat(2), Rat(0), Rat(-1)}),
                                   cf_make(s3, {Rat(1), Rat(1), Rat(0)})};
  Rat dh = 0, dn = 0;
  for (const auto& f : x) {
    dh += f.values[s3.iota0];
    for (const Rat& v : f.values) dn += v / 3;
  }
  CHECK(degree(push_to_weights(x, WeightKind::hodge)) == dh);
  CHECK(degree(push_to_weights(x, WeightKind::newton)) == dn);

  // equal degrees when the weight multiset is galois-stable
  std::vector<CharacterFunction> orbit{delta(s3, 0), delta(s3, 1), delta(s3, 2)};
  CHECK(degree(push_to_weights(orbit, WeightKind::hodge)) ==
        degree(push_to_weights(orbit, WeightKind::newton)));
}

TEST_CASE("abelian ordinarity") {
  auto s2 = galois_cyclic(2);

  // galois-stable weight set: the distinguished-torus instance
  CHECK(is_ordinary_abelian({delta(s2, 0), delta(s2, 1)}));

  // trivial x
  CHECK(is_ordinary_abelian({cf_make(s2, {Rat(0), Rat(0)}), cf_make(s2, {Rat(0), Rat(0)})}));

  // verdicts across cyclic sizes agree with the orbit-average oracle,
  // recomputed here from scratch
  for (size_t n = 1; n <= 4; ++n) {
    auto s = galois_cyclic(n);
    std::vector<std::vector<CharacterFunction>> xs{
        {delta(s, 0), delta(s, n - 1)},
        {delta(s, 0), delta(s, 0)},
        {cf_make(s, std::vector<Rat>(n, Rat(3)))}};
    for (const auto& x : xs) {
      std::vector<Rat> sharp(x.size(), Rat(0));
      size_t count = 0;
      for (const auto& sigma : galois_group(s)) {
        size_t pre = 0;
        while (sigma[pre] != s.iota0) ++pre;
        for (size_t i = 0; i < x.size(); ++i) sharp[i] += x[i].values[pre];
        ++count;
      }
      for (auto& v : sharp) v /= Rat(static_cast<long>(count));
      bool oracle = push_to_weights(x, WeightKind::newton) == TypeVector(std::move(sharp));
      CHECK(is_ordinary_abelian(x) == oracle);
      CHECK(oracle);  // transitive actions average to the haar integral
    }
  }

  // a split (non-transitive) galois set can fail ordinarity
  auto split = galois_make(2, {{0, 1}}, 0);
  CHECK(!is_ordinary_abelian({delta(split, 0)}));
  CHECK(is_ordinary_abelian({cf_make(split, {Rat(1), Rat(1)})}));
}

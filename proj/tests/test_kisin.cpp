#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "slopeforge/kisin.hpp"

using namespace slopeforge;

namespace {

QPoly Q(std::initializer_list<long> cs) {
  std::vector<Rat> v;
  for (long c : cs) v.emplace_back(c);
  return q_poly(std::move(v));
}

EisensteinPoly E1() { return make_eisenstein(Q({-2, 1}), Int(2)); }        // u - 2
EisensteinPoly E2() { return make_eisenstein(Q({-2, 0, 1}), Int(2)); }     // u^2 - 2

TypeVector tv(std::initializer_list<long> cs) {
  std::vector<Rat> v;
  for (long c : cs) v.emplace_back(c);
  return TypeVector(std::move(v));
}

PolygonFunction poly_through(std::initializer_list<std::pair<Rat, Rat>> pts) {
  return PolygonFunction(std::vector<std::pair<Rat, Rat>>(pts));
}

// f(x) <= g(x) + c at every breakpoint of either polygon.
bool le_within(const PolygonFunction& f, const PolygonFunction& g, const Rat& c) {
  for (const auto& [x, y] : f.breakpoints())
    if (!(y <= g(x) + c)) return false;
  for (const auto& [x, y] : g.breakpoints())
    if (!(f(x) <= y + c)) return false;
  return true;
}

}  // namespace

TEST_CASE("construction and hodge types") {
  auto E = E1();
  auto m = k_make(2, {{E.poly, Q({0})}, {Q({0}), Q({1})}}, E);
  CHECK(k_hodge_type(m) == tv({0, -1}));
  CHECK(k_crystal_hodge_type(m) == tv({0, -1}));

  auto id3 = k_make(2, {{Q({1}), Q({0}), Q({0})},
                        {Q({0}), Q({1}), Q({0})},
                        {Q({0}), Q({0}), Q({1})}},
                    E);
  CHECK(k_hodge_type(id3) == tv({0, 0, 0}));

  auto m2 = k_make(2, {{q_mul(E.poly, E.poly), Q({0})}, {Q({0}), E.poly}}, E);
  CHECK(k_hodge_type(m2) == tv({-1, -2}));
  CHECK(k_crystal_hodge_type(m2) == tv({-1, -2}));

  // Twisting shifts the Hodge type by the twist on every entry.
  CHECK(k_hodge_type(k_twist(m, 1)) == tv({-1, -2}));

  // Rejections: singular, non-integral, and non-unit determinant cofactor.
  CHECK_THROWS_AS(k_make(2, {{E.poly, E.poly}, {E.poly, E.poly}}, E1()), kernel_error);
  CHECK_THROWS_AS(k_make(2, {{q_poly({Rat(1, 2)})}}, E1()), kernel_error);
  CHECK_THROWS_AS(k_make(2, {{Q({0, 1})}}, E1()), kernel_error);  // det = u
  CHECK_THROWS_AS(k_make(2, {{Q({2})}}, E1()), kernel_error);     // det = 2
  CHECK_THROWS_AS(k_make(2, {{Q({1})}}, make_eisenstein(Q({-3, 1}), Int(3))), kernel_error);
}

TEST_CASE("reduction to the torsion layer") {
  auto E = E1();
  auto m = k_make(2, {{E.poly, Q({0})}, {Q({0}), Q({1})}}, E);

  auto t1 = k_reduce(m, 1);
  CHECK(t1.R.n == 1);
  CHECK(t1.A[0][0][0] == 0);
  CHECK(t1.A[0][0][1] == 1);  // E = u - 2 reduces to u
  CHECK(t1.A[1][1][0] == 1);
  CHECK(zs_is_zero(t1.A[0][1]));

  // Rank-1 phi = E at level two: degree -2e for both Eisenstein choices.
  auto r1 = k_make(2, {{E.poly}}, E);
  CHECK(tk_degree(k_reduce(r1, 2)) == Rat(-2));
  auto r2 = k_make(2, {{E2().poly}}, E2());
  CHECK(tk_degree(k_reduce(r2, 2)) == Rat(-4));

  // Mod p, reduction of the i-twist equals the e*i u-shift of the reduction.
  auto tw = k_reduce(k_twist(m, 1), 1);
  auto sh = tk_twist(k_reduce(m, 1), 1);
  CHECK(tk_effective_matrix(tw) == tk_effective_matrix(sh));
  CHECK(tk_degree(tw) == tk_degree(sh));

  CHECK_THROWS_AS(k_reduce(m, 5), kernel_error);  // beyond n_max
}

TEST_CASE("fargues tower on rank-1 and split instances") {
  auto E = E1();

  // Rank-1 phi = E^2: constant slope -2 at every level.
  auto r1 = k_make(2, {{q_mul(E.poly, E.poly)}}, E);
  auto expect1 = poly_through({{Rat(0), Rat(0)}, {Rat(1), Rat(-2)}});
  for (long n : {1L, 2L, 4L}) CHECK(k_fargues_n(r1, n) == expect1);
  CHECK(k_fargues_limit(r1) == expect1);
  CHECK(k_is_semistable(r1));
  CHECK(k_is_hn_type(r1));

  // Split sum of slopes {0, -2}: constant tower, HN-type, not semistable.
  auto sp = k_make(2, {{Q({1}), Q({0})}, {Q({0}), q_mul(E.poly, E.poly)}}, E);
  auto expect2 = poly_through({{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(2), Rat(-2)}});
  for (long n : {1L, 2L, 4L}) CHECK(k_fargues_n(sp, n) == expect2);
  CHECK(k_fargues_limit(sp) == expect2);
  CHECK(k_is_hn_type(sp));
  CHECK(!k_is_semistable(sp));
  CHECK(k_mu_min(sp) == Rat(-2));

  // e = 2 normalization: rank-1 phi = E over E = u^2 - 2 has slope -1.
  auto r2 = k_make(2, {{E2().poly}}, E2());
  CHECK(k_fargues_n(r2, 1) == poly_through({{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}}));
  CHECK(k_fargues_n(r2, 2) == poly_through({{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}}));
}

TEST_CASE("polygon chain on random corpora") {
  std::mt19937 rng(2024);
  auto rnd_coeff = [&]() { return static_cast<long>(rng() % 3); };
  auto rnd_poly = [&]() { return Q({rnd_coeff(), rnd_coeff()}); };

  auto build = [&](const EisensteinPoly& E, long N_u, long amax) {
    long a0 = static_cast<long>(rng() % (amax + 1)), a1 = static_cast<long>(rng() % (amax + 1));
    Mat<QPoly> diag = {{k_detail::e_power(E, a0), Q({0})}, {Q({0}), k_detail::e_power(E, a1)}};
    Mat<QPoly> b1 = {{Q({1}), rnd_poly()}, {Q({0}), Q({1})}};
    Mat<QPoly> b2 = {{Q({1}), Q({0})}, {rnd_poly(), Q({1})}};
    return k_make(2, k_detail::mul(k_detail::mul(b1, diag), b2), E, 0, 4, N_u);
  };

  long checked = 0;
  auto run = [&](const EisensteinPoly& E, long count, long N_u, long amax) {
    for (long i = 0; i < count; ++i) {
      KisinModule m = build(E, N_u, amax);
      auto t1 = k_fargues_n(m, 1);
      auto t2 = k_fargues_n(m, 2);
      auto t4 = k_fargues_n(m, 4);
      REQUIRE(polygon_le(t4, t2));
      REQUIRE(polygon_le(t2, t1));
      auto thu = polygon_scale_y(Rat(1, E.e()),
                                 polygon_of(pt_hodge_type(tk_reduce_p(k_reduce(m, 1)))));
      auto th = polygon_of(k_hodge_type(m));
      REQUIRE(polygon_le(t1, thu));
      REQUIRE(polygon_le(thu, th));
      REQUIRE(dominance_le(k_crystal_hodge_type(m), k_hodge_type(m)));
      // Endpoint conservation across the whole chain.
      REQUIRE(t1.value_end() == th.value_end());
      REQUIRE(t2.value_end() == th.value_end());
      REQUIRE(t4.value_end() == th.value_end());
      REQUIRE(t1.domain_end() == Rat(2));
      // Iwasawa rank multiplicativity across levels.
      REQUIRE(tk_mu_iw(k_reduce(m, 4)) == 4 * tk_mu_iw(k_reduce(m, 1)));
      ++checked;
    }
  };
  run(E1(), 100, 7, 2);
  run(E2(), 50, 8, 1);
  CHECK(checked == 150);
}

TEST_CASE("theta on semistable and split instances") {
  auto E = E1();

  // Rank-1 and semistable rank-2: theta = 0, K = M.
  auto r1 = k_make(2, {{E.poly}}, E);
  auto s1 = k_theta_step(r1);
  CHECK(s1.theta.r == 0);
  CHECK(s1.kpart.r == 1);
  CHECK(s1.k0 == 1);

  auto ss = k_make(2, {{Q({0}), E.poly}, {Q({1}), Q({0})}}, E);
  REQUIRE(k_is_semistable(ss));
  auto s2 = k_theta_step(ss);
  CHECK(s2.theta.r == 0);
  CHECK(s2.kpart.r == 2);

  // Split slopes {0, -2}: theta is the slope-0 summand, k0 = 1.
  auto sp = k_make(2, {{Q({1}), Q({0})}, {Q({0}), q_mul(E.poly, E.poly)}}, E);
  auto s3 = k_theta_step(sp);
  CHECK(s3.theta.r == 1);
  CHECK(s3.theta.A[0][0] == Q({1}));
  CHECK(s3.kpart.r == 1);
  CHECK(s3.kpart.A[0][0] == q_mul(E.poly, E.poly));
  CHECK(s3.k0 == 1);
  CHECK(!s3.refined);

  // Theta commutes with twisting on the effective matrices.
  auto s3t = k_theta_step(k_twist(sp, 1));
  CHECK(k_effective_matrix(s3t.theta) == k_effective_matrix(k_twist(s3.theta, 1)));

  // Split diagonal of three distinct slopes: two theta iterations, flag of
  // length three with strictly decreasing slopes, identity witness.
  auto d3 = k_make(2, {{Q({1}), Q({0}), Q({0})},
                       {Q({0}), E.poly, Q({0})},
                       {Q({0}), Q({0}), q_mul(E.poly, E.poly)}},
                   E);
  auto dec = k_hn_decompose(d3);
  CHECK(dec.steps == 2);
  REQUIRE(dec.flag.size() == 3);
  CHECK(dec.flag[0].slope == Rat(0));
  CHECK(dec.flag[1].slope == Rat(-1));
  CHECK(dec.flag[2].slope == Rat(-2));
  CHECK(dec.witness_pval == 0);
  CHECK(dec.envelope_c == Rat(0));
  CHECK(dec.n.A == d3.A);

  // HN-type input: decomposition is a detection pass, no refinement.
  auto dsp = k_hn_decompose(sp);
  CHECK(dsp.witness_pval == 0);
  REQUIRE(dsp.flag.size() == 2);
  CHECK(dsp.flag[0].slope > dsp.flag[1].slope);
}

TEST_CASE("theta demo on a certified non-HN-type instance") {
  auto E = E1();
  QPoly E3 = q_mul(q_mul(E.poly, E.poly), E.poly);
  auto m = k_make(2, {{E.poly, Q({0})}, {Q({2}), E3}}, E, 0, 4, 9);

  // Level one: line slopes (-1, -3).
  auto t1 = k_fargues_n(m, 1);
  CHECK(t1 == poly_through({{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}, {Rat(2), Rat(-4)}}));

  // The destabilizing line stops lifting at depth exactly one, with an exact
  // verdict: the instance is certified non-HN-type.
  auto tf = tk_fargues(k_reduce(m, 4));
  REQUIRE(tf.hull.size() >= 2);
  const auto& v = tf.hull[tf.hull.size() - 2];
  REQUIRE(v.line_index >= 0);
  CHECK(tf.lines[v.line_index].depth == 1);
  CHECK(tf.lines[v.line_index].exact);
  CHECK(tf.cert.exhaustive);

  auto t2 = k_fargues_n(m, 2);
  CHECK(t2(Rat(1)) == Rat(-3, 2));
  CHECK(t2(Rat(1)) < t1(Rat(1)));  // strict drop: not HN-type
  CHECK(!k_is_hn_type(m));
  CHECK(polygon_le(k_fargues_n(m, 4), t2));

  // One theta step refines by the lifted line at k0 = 1.
  auto st = k_theta_step(m);
  CHECK(st.refined);
  CHECK(st.k0 == 1);
  CHECK(st.kpart.r == 0);
  CHECK(st.theta.A[0][0] == E.poly);
  CHECK(st.theta.A[1][0] == Q({1}));
  CHECK(st.theta.A[1][1] == E3);
  CHECK(k_mu_min(st.theta) > k_mu_min(m));

  // Full decomposition: semistable HN-type output, verified witness, and the
  // tower of the output stays within C/n of the input tower.
  auto dec = k_hn_decompose(m);
  CHECK(dec.steps >= 1);
  CHECK(dec.steps <= dec.step_bound);
  CHECK(k_is_hn_type(dec.n));
  CHECK(dec.witness_pval >= 1);
  CHECK(dec.envelope_c > 0);
  for (long n : {1L, 2L, 4L}) {
    auto fn = k_fargues_n(dec.n, n);
    auto gn = k_fargues_n(m, n);
    CHECK(le_within(fn, gn, dec.envelope_c / Rat(n)));
    CHECK(fn.value_end() == gn.value_end());
  }

  // Isogeny stability: rescaling one basis vector by p moves every tower
  // level by at most C/n in both directions.
  auto m1 = k_make(2, {{E.poly, Q({2})}, {Q({0}), E3}}, E, 0, 4, 9);
  auto m2 = k_make(2, {{E.poly, Q({4})}, {Q({0}), E3}}, E, 0, 4, 9);
  Rat c = Rat(2) * (-k_mu_min(m1));
  for (long n : {1L, 2L, 4L}) {
    auto f = k_fargues_n(m1, n);
    auto g = k_fargues_n(m2, n);
    CHECK(le_within(f, g, c / Rat(n)));
    CHECK(le_within(g, f, c / Rat(n)));
  }

  // A stable line that persists to n_max through a non-polynomial generator
  // is reported as a precision failure, and the module is HN-type as far as
  // the budget can see.
  auto hn = k_make(2, {{Q({1}), Q({0})}, {Q({1}), q_mul(E.poly, E.poly)}}, E, 0, 4, 8);
  CHECK(k_is_hn_type(hn));
  CHECK_THROWS_AS(k_theta_step(hn), kernel_error);
}

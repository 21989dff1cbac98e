#include <doctest.h>

#include <random>

#include "fitzkit/hull.hpp"
#include "fitzkit/lp.hpp"
#include "fitzkit/region.hpp"
#include "support.hpp"

using namespace fitzkit;

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("-2.5E2") == -250);
  CHECK(to_string(fraction(6, -4)) == "-3/2");
  CHECK(to_string(fraction(4, 2)) == "2");
  CHECK_THROWS_AS(fraction(1, 0), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational(""), InputError);
  CHECK_THROWS_AS(from_double(kPosInf), InputError);
  CHECK(from_double(0.1) != Rational(1, 10));
  CHECK(from_double(0.1).get_d() == 0.1);
}

TEST_CASE("extended reals") {
  const ExtRational inf = ExtRational::pos_inf(), ninf = ExtRational::neg_inf();
  CHECK((ExtRational(2) + inf).is_pos_inf());
  CHECK((ExtRational(2) + ninf).is_neg_inf());
  CHECK_THROWS_AS(inf + ninf, InputError);
  CHECK((-inf).is_neg_inf());
  CHECK(ninf < ExtRational(-1000));
  CHECK(ExtRational(1000) < inf);
  CHECK(ExtRational(Rational(1, 3)) == ExtRational(fraction(2, 6)));
  CHECK(parse_ext_rational("+inf") == inf);
  CHECK(to_string(ninf) == "-inf");
  CHECK(to_double(inf) == kPosInf);
  CHECK_THROWS_AS(inf.value(), InputError);
}

TEST_CASE("simplex on small programs") {
  // min −λ₁ − 2λ₂ s.t. λ₁ + λ₂ + s = 4, λ₁ + 3λ₂ + t = 6
  const std::vector<QVec> rows{{1, 1, 1, 0}, {1, 3, 0, 1}};
  const auto r = lp::minimize(rows, {4, 6}, {-1, -2, 0, 0});
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.value == -5);
  CHECK(r.solution[0] == 3);
  CHECK(r.solution[1] == 1);

  CHECK(lp::minimize({{1, -1}}, {0}, {-1, 0}).status == lp::Status::unbounded);
  CHECK(lp::minimize({{1, 1}}, {-1}, {0, 0}).status == lp::Status::infeasible);
  CHECK_FALSE(lp::feasible({{1, 1}}, {-1}));

  const std::vector<QVec> tri{{0, 0}, {2, 0}, {0, 2}};
  CHECK(lp::in_convex_hull(tri, {1, 1}));
  CHECK(lp::in_convex_hull(tri, {0, 0}));
  CHECK_FALSE(lp::in_convex_hull(tri, {Rational(3, 2), Rational(3, 4)}));
}

TEST_CASE("simplex agrees with enumeration of vertices") {
  // min c·λ over the simplex {λ ≥ 0, Σλ = 1} is the smallest c_k.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    QVec c;
    Rational best = 100;
    for (int k = 0; k < 6; ++k) {
      c.push_back(oracle::random_quarter(rng, -5, 5));
      if (c.back() < best) best = c.back();
    }
    const auto r = lp::minimize({QVec(6, 1)}, {1}, c);
    REQUIRE(r.status == lp::Status::optimal);
    CHECK(r.value == best);
  }
}

TEST_CASE("H-polyhedra") {
  const HPolyhedron sq = box(QVec{-1, -1}, QVec{1, 1});
  CHECK(sq.contains(QVec{1, -1}));
  CHECK_FALSE(sq.contains(QVec{Rational(11, 10), 0}));
  CHECK_FALSE(sq.is_empty());
  CHECK(sq.is_bounded());

  HPolyhedron empty = sq;
  empty.faces.push_back({{1, 1}, -3});
  CHECK(empty.is_empty());

  const HPolyhedron half{2, {{{0, 1}, 0}}};
  CHECK_FALSE(half.is_bounded());
  const HPolyhedron cone = recession_cone(half);
  CHECK(cone.contains(QVec{5, -1}));
  CHECK_FALSE(cone.contains(QVec{0, 1}));

  // Triangle with vertices (0,0), (2,0), (0,2): shadow on the first axis is [0, 2].
  const HPolyhedron tri{2, {{{-1, 0}, 0}, {{0, -1}, 0}, {{1, 1}, 2}}};
  const std::size_t keep[] = {0};
  const HPolyhedron shadow = project(tri, keep);
  CHECK(shadow.dim == 1);
  CHECK(shadow.contains(QVec{2}));
  CHECK(shadow.contains(QVec{0}));
  CHECK_FALSE(shadow.contains(QVec{Rational(-1, 100)}));
  CHECK_FALSE(shadow.contains(QVec{Rational(201, 100)}));

  const auto m = max_linear(tri, QVec{1, 2});
  REQUIRE(m.value.is_finite());
  CHECK(m.value.value() == 4);
  CHECK(tri.contains(m.point));
  CHECK(max_linear(half, QVec{1, 0}).value.is_pos_inf());
  CHECK_THROWS_AS(max_linear(empty, QVec{1, 0}), InputError);

  const auto w = inclusion_witness(tri, box(QVec{-1, -1}, QVec{2, 2}));
  CHECK_FALSE(w.has_value());
  const auto out = inclusion_witness(tri, sq);
  REQUIRE(out.has_value());
  CHECK(tri.contains(*out));
  CHECK_FALSE(sq.contains(*out));
}

TEST_CASE("Fourier-Motzkin projection matches a sampled shadow") {
  // Random polytopes in R³ projected to the first two coordinates; a point is
  // in the shadow iff its fiber is nonempty, decided by the LP.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    HPolyhedron p = box(QVec{-2, -2, -2}, QVec{2, 2, 2});
    for (int f = 0; f < 3; ++f) {
      QVec a{oracle::random_quarter(rng, -1, 1), oracle::random_quarter(rng, -1, 1), oracle::random_quarter(rng, -1, 1)};
      p.faces.push_back({a, oracle::random_quarter(rng, 0, 2)});
    }
    const std::size_t keep[] = {0, 1};
    const HPolyhedron shadow = project(p, keep);
    for (int s = 0; s < 30; ++s) {
      const QVec z{oracle::random_quarter(rng, -2, 2), oracle::random_quarter(rng, -2, 2)};
      HPolyhedron fiber = p;
      fiber.faces.push_back({{1, 0, 0}, z[0]});
      fiber.faces.push_back({{-1, 0, 0}, -z[0]});
      fiber.faces.push_back({{0, 1, 0}, z[1]});
      fiber.faces.push_back({{0, -1, 0}, -z[1]});
      CHECK(shadow.contains(z) == !fiber.is_empty());
    }
  }
}

TEST_CASE("V-polytopes, balls and support functions") {
  const VPolytope tri{2, {{0, 0}, {2, 0}, {0, 2}}};
  CHECK(tri.contains(QVec{1, 1}));
  CHECK_FALSE(tri.contains(QVec{2, 1}));
  CHECK(support_function(tri, QVec{1, 3}) == 6);
  const NormBall ball{{0, 0}, 1};
  CHECK(ball.contains(QVec{Rational(3, 5), Rational(4, 5)}));
  CHECK_FALSE(ball.contains(QVec{Rational(3, 5), Rational(81, 100)}));
  CHECK(indicator_eval(Region{ball}, QVec{2, 0}).is_pos_inf());
  CHECK(indicator_eval(Region{tri}, QVec{0, 0}) == ExtRational(0));
  CHECK(in_cone({{1, 0}, {1, 1}}, QVec{3, 1}));
  CHECK_FALSE(in_cone({{1, 0}, {1, 1}}, QVec{0, 1}));
}

TEST_CASE("convex hulls") {
  const VPolytope h1 = convex_hull({{3}, {-1}, {2}});
  CHECK(h1.vertices == std::vector<QVec>{{-1}, {3}});

  const VPolytope sq = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {Rational(1, 2), Rational(1, 2)}, {1, Rational(1, 2)}});
  CHECK(sq.vertices == std::vector<QVec>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(cross({0, 0}, {1, 0}, {0, 1}) == 1);

  const VPolytope tet = convex_hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {Rational(1, 4), Rational(1, 4), Rational(1, 4)}});
  CHECK(tet.vertices.size() == 4);
  CHECK_THROWS_AS(convex_hull({{0, 0, 0, 0}}), UnsupportedError);
  CHECK_THROWS_AS(convex_hull({}), InputError);

  // Every input point is in the hull and every hull vertex is an input point.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<QVec> pts;
    for (int i = 0; i < 15; ++i) pts.push_back({oracle::random_quarter(rng, -2, 2), oracle::random_quarter(rng, -2, 2)});
    const VPolytope h = convex_hull(pts);
    for (const auto& p : pts) CHECK(h.contains(p));
    for (std::size_t i = 0; i < h.vertices.size(); ++i) {
      CHECK(std::find(pts.begin(), pts.end(), h.vertices[i]) != pts.end());
      const auto& a = h.vertices[i];
      const auto& b = h.vertices[(i + 1) % h.vertices.size()];
      const auto& c = h.vertices[(i + 2) % h.vertices.size()];
      if (h.vertices.size() >= 3) CHECK(cross(a, b, c) > 0);
    }
  }
}

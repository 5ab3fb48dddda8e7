#include "qmut/realization.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "qmut/explore.hpp"
#include "qmut/quiver.hpp"
#include "qmut/series.hpp"

using namespace qmut;

namespace {

Quiver path_quiver(long ambient, const std::vector<AngleLabel>& labels) {
  std::vector<std::tuple<int, int, AngleLabel>> arrows;
  for (std::size_t t = 0; t < labels.size(); ++t)
    arrows.emplace_back((int)t, (int)t + 1, labels[t]);
  return Quiver::from_labeled_arrows((int)labels.size() + 1, ambient, arrows);
}

Quiver h3() { return path_quiver(5, {{1, 3}, {1, 5}}); }

// double arrow 0->1 plus unit legs closing an oriented triangle
Quiver g2_triangle(long leg_den) {
  return Quiver::from_labeled_arrows(
      3, leg_den, {{0, 1, {0, 1}}, {1, 2, {1, leg_den}}, {2, 0, {1, leg_den}}});
}

Quiver markov() {
  return Quiver::from_labeled_arrows(3, 1, {{0, 1, {0, 1}}, {1, 2, {0, 1}}, {2, 0, {0, 1}}});
}

// oriented cycle on 4 vertices with unit weights, over a non-trivial ambient
Quiver oriented_square() {
  return Quiver::from_labeled_arrows(
      4, 6, {{0, 1, {1, 3}}, {1, 2, {1, 3}}, {2, 3, {1, 3}}, {3, 0, {1, 3}}});
}

Eigen::MatrixXd gram_double(const Realization& r) {
  Eigen::MatrixXd g(r.rank(), r.rank());
  for (int i = 0; i < r.rank(); ++i)
    for (int j = 0; j < r.rank(); ++j) g(i, j) = r.at(i, j).approx();
  return g;
}

int numeric_corank(const Realization& r) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_double(r));
  int null = 0;
  for (int i = 0; i < r.rank(); ++i)
    if (std::abs(es.eigenvalues()[i]) < 1e-8) ++null;
  return null;
}

SeriesTuple tup(SeriesFamily f, long n, long k, long q, long m, long s) {
  SeriesTuple t;
  t.family = f, t.n = n, t.k = k, t.q = q, t.m = m, t.s = s;
  return t;
}

int count_positive(const Realization& r, const std::vector<std::pair<int, int>>& pairs) {
  int c = 0;
  for (auto [i, j] : pairs)
    if (r.at(i, j).sign() > 0) ++c;
  return c;
}

}  // namespace

TEST_CASE("gram container: symmetry, lifting, relabeling, sign flips") {
  Realization r(3, 5);
  CHECK(r.at(0, 0) == CycloReal::from_int(2, 5));
  CHECK(r.at(0, 1).is_zero());

  CycloReal y = CycloReal::from_label({1, 5}, 5);
  r.set(1, 0, -y);
  CHECK(r.at(0, 1) == -y);  // symmetric write
  r.set(1, 2, CycloReal::from_int(-1, 1));  // lifted into ambient 5 on write
  CHECK(r.at(2, 1) == CycloReal::from_int(-1, 5));

  // permuted: placement[p] = original index at position p
  Realization p = r.permuted({2, 1, 0});
  CHECK(p.at(0, 1) == r.at(2, 1));
  CHECK(p.at(1, 2) == r.at(1, 0));

  // sign conjugation flips exactly the mixed-sign pairs
  Realization s = r.sign_conjugated({1, -1, 1});
  CHECK(s.at(0, 1) == y);
  CHECK(s.at(1, 2) == CycloReal::from_int(1, 5));
  CHECK(s.at(0, 2) == r.at(0, 2));
  CHECK(s.sign_conjugated({1, -1, 1}) == r);

  // equality aligns ambients
  CHECK(r == r.lifted(10));
  CHECK(r != s);

  CHECK_THROWS_AS(r.set(1, 1, y), std::invalid_argument);
  CHECK_THROWS_AS(r.set(0, 3, y), std::out_of_range);
  CHECK_THROWS_AS(Realization(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(r.permuted({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(r.sign_conjugated({1, 1}), std::invalid_argument);
}

TEST_CASE("acyclic quivers seed with all-obtuse angles") {
  Quiver q = h3();
  Realization r = initial_realization(q);
  CycloReal y = CycloReal::from_label({1, 5}, 5);
  CHECK(r.at(0, 1) == CycloReal::from_int(-1, 5));
  CHECK(r.at(1, 2) == -y);
  CHECK(r.at(0, 2).is_zero());
  CHECK(check_compatibility(r, q));
  CHECK(check_admissible(r, q));
  CHECK(gram_corank(r) == 0);

  // already acute: identity flip
  auto flip = acute_sign_flip(r);
  REQUIRE(flip);
  CHECK(*flip == std::vector<int>{1, 1, 1});

  // rank 5 with a 4-weight path: same rule
  Quiver f4t = path_quiver(4, {{1, 3}, {1, 3}, {1, 4}, {1, 3}});
  Realization rf = initial_realization(f4t);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) CHECK(rf.at(i, j).sign() <= 0);
  CHECK(check_compatibility(rf, f4t));
  CHECK(check_admissible(rf, f4t));
}

TEST_CASE("double arrows seed by duplicating an endpoint vector") {
  Quiver g = g2_triangle(5);
  Realization r = initial_realization(g);
  CHECK(check_compatibility(r, g));
  CHECK(check_admissible(r, g));
  // the two endpoint vectors of the double arrow coincide
  CHECK(r.at(0, 1) == CycloReal::from_int(2, 5));
  CHECK(r.at(0, 2) == r.at(1, 2));
  CHECK(gram_corank(r) == 1);
  CHECK(numeric_corank(r) == 1);

  // standard-form series quiver with a weight-2 arrow 3->0: rows 0 and 3 of
  // the Gram matrix agree away from the pair itself
  Quiver sf = realize_standard_form(tup(SeriesFamily::EvenB, 2, 2, 0, 1, 1));
  Realization rs = initial_realization(sf);
  CycloReal c4 = CycloReal::from_label({1, 4}, 4);
  CHECK(rs.at(0, 3) == CycloReal::from_int(2, 4));
  CHECK(rs.at(0, 1) == rs.at(1, 3));
  CHECK(rs.at(0, 2) == rs.at(2, 3));
  CHECK(rs.at(0, 1) == -c4);
  CHECK(rs.at(0, 2) == -c4);
  CHECK(rs.at(1, 2).is_zero());
  CHECK(check_compatibility(rs, sf));
  CHECK(check_admissible(rs, sf));
  CHECK(gram_corank(rs) == 2);
  CHECK(numeric_corank(rs) == 2);
}

TEST_CASE("cyclic rank-3 quivers pull the realization back from an acyclic member") {
  Quiver cyc = h3().mutated(1);
  CHECK(!cyc.is_acyclic());
  Realization r = initial_realization(cyc);
  CHECK(check_compatibility(r, cyc));
  CHECK(check_admissible(r, cyc));
  CHECK(gram_corank(r) == 0);
  // oriented triangle: odd number of acute pairs
  CHECK(count_positive(r, {{0, 1}, {0, 2}, {1, 2}}) % 2 == 1);

  // the all-2 triangle is cyclic but carries double arrows, so the
  // duplication rule applies: rank collapses to 1
  Realization rm = initial_realization(markov());
  CHECK(check_compatibility(rm, markov()));
  CHECK(check_admissible(rm, markov()));
  CHECK(gram_corank(rm) == 2);

  // cyclic rank 4 without a double arrow: none of the seed shapes applies
  CHECK_THROWS_AS(initial_realization(oriented_square()), std::invalid_argument);
  // mutation-cyclic rank 3 without double arrows: no acyclic member to pull
  // back from
  Quiver ttt(3, 1);
  ttt.set_arrow(0, 1, CycloReal::from_int(3, 1));
  ttt.set_arrow(1, 2, CycloReal::from_int(3, 1));
  ttt.set_arrow(2, 0, CycloReal::from_int(3, 1));
  CHECK_THROWS_AS(initial_realization(ttt), std::invalid_argument);
}

TEST_CASE("partial reflections match explicit vector arithmetic") {
  Quiver q0 = h3();
  Realization r0 = initial_realization(q0);

  // embed: gram = L L^T, vectors = rows of L (positive definite here)
  Eigen::LLT<Eigen::MatrixXd> llt(gram_double(r0));
  REQUIRE(llt.info() == Eigen::Success);
  Eigen::MatrixXd v0 = llt.matrixL();

  // every mutation sequence of length <= 3
  std::vector<std::vector<int>> seqs{{}};
  for (int len = 0; len < 3; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& s : seqs)
      if ((int)s.size() == len)
        for (int k = 0; k < 3; ++k) {
          auto t = s;
          t.push_back(k);
          next.push_back(t);
        }
    seqs.insert(seqs.end(), next.begin(), next.end());
  }
  CHECK(seqs.size() == 1 + 3 + 9 + 27);

  for (const auto& seq : seqs) {
    Quiver q = q0;
    Realization r = r0;
    Eigen::MatrixXd v = v0;
    for (int k : seq) {
      Realization rn = mutate_realization(r, q, k);
      // reflect the rows of v directly: v_j -= (v_j, v_k) v_k on arrows
      // into k, then v_k -> -v_k
      Eigen::MatrixXd vn = v;
      for (int j = 0; j < 3; ++j)
        if (j != k && q.entry(j, k).sign() > 0)
          vn.row(j) -= (v.row(j).dot(v.row(k))) * v.row(k);
      vn.row(k) = -v.row(k);
      q = q.mutated(k);
      CHECK(check_compatibility(rn, q));
      Eigen::MatrixXd diff = vn * vn.transpose() - gram_double(rn);
      CHECK(diff.cwiseAbs().maxCoeff() < 1e-9);
      r = rn;
      v = vn;
    }
  }
}

TEST_CASE("reflection identities: sinks, sources, double mutation") {
  Quiver q = h3();
  Realization r = initial_realization(q);

  // no arrow points at a sink, so nothing reflects and v_k -> -v_k only
  // touches pairs (k, j) with (v_k, v_j) = 0 or flips both signs at once;
  // the Gram matrix is unchanged
  CHECK(q.sinks() == std::vector<int>{2});
  CHECK(mutate_realization(r, q, 2) == r);

  // at a source only v_k -> -v_k happens: a pure sign conjugation
  CHECK(q.sources() == std::vector<int>{0});
  CHECK(mutate_realization(r, q, 0) == r.sign_conjugated({-1, 1, 1}));

  // a longer path: same two statements at its ends
  Quiver f4t = path_quiver(4, {{1, 3}, {1, 3}, {1, 4}, {1, 3}});
  Realization rf = initial_realization(f4t);
  CHECK(mutate_realization(rf, f4t, 4) == rf);
  CHECK(mutate_realization(rf, f4t, 0) == rf.sign_conjugated({-1, 1, 1, 1, 1}));

  // mutating twice returns the quiver exactly and the realization up to
  // sign conjugation
  for (int k = 0; k < 3; ++k) {
    Quiver q1 = q.mutated(k);
    Realization r1 = mutate_realization(r, q, k);
    CHECK(q1.mutated(k).str() == q.str());
    Realization r2 = mutate_realization(r1, q1, k);
    bool matched = false;
    for (int mask = 0; mask < 8 && !matched; ++mask) {
      std::vector<int> eps{mask & 1 ? -1 : 1, mask & 2 ? -1 : 1, mask & 4 ? -1 : 1};
      matched = r2 == r.sign_conjugated(eps);
    }
    CHECK(matched);
  }

  // a realization of one quiver cannot be reflected along another
  CHECK_THROWS_AS(mutate_realization(r, path_quiver(5, {{1, 5}, {2, 5}}), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(mutate_realization(r, q, 3), std::out_of_range);
}

TEST_CASE("admissibility counts acute pairs around chordless cycles") {
  // non-oriented square 0->1<-2->3<-0: even parity required
  Quiver sq = Quiver::from_labeled_arrows(
      4, 3, {{0, 1, {1, 3}}, {2, 1, {1, 3}}, {2, 3, {1, 3}}, {0, 3, {1, 3}}});
  CHECK(sq.is_acyclic());
  Realization r = initial_realization(sq);
  CHECK(check_admissible(r, sq));
  r.set(0, 1, -r.at(0, 1));  // one acute pair: parity breaks
  CHECK(check_compatibility(r, sq));
  CHECK(!check_admissible(r, sq));
  r.set(2, 3, -r.at(2, 3));  // two acute pairs: parity restored
  CHECK(check_admissible(r, sq));

  // oriented square: odd parity required, so all-obtuse fails
  Quiver osq = oriented_square();
  SignAssignment all_minus;
  for (auto [i, j, w] : osq.arrows()) all_minus.sign[{std::min(i, j), std::max(i, j)}] = -1;
  Realization ro = realization_from_signs(osq, all_minus);
  CHECK(check_compatibility(ro, osq));
  CHECK(!check_admissible(ro, osq));
  ro.set(0, 1, -ro.at(0, 1));
  CHECK(check_admissible(ro, osq));

  // flipping one triangle sign of a valid double-arrow realization breaks it
  Quiver g = g2_triangle(5);
  Realization rg = initial_realization(g);
  rg.set(1, 2, -rg.at(1, 2));
  CHECK(check_compatibility(rg, g));
  CHECK(!check_admissible(rg, g));
}

TEST_CASE("arrow-sign systems solve the cycle parities") {
  // acyclic: all-minus
  Quiver h4 = path_quiver(5, {{1, 5}, {1, 3}, {1, 3}});
  auto signs = admissible_sign_assignment(h4);
  REQUIRE(signs);
  CHECK(signs->sign.size() == 3);
  for (const auto& [e, s] : signs->sign) CHECK(s == -1);
  CHECK(check_admissible(realization_from_signs(h4, *signs), h4));

  // oriented triangles need an odd number of acute pairs
  for (const Quiver& q : {g2_triangle(5), markov()}) {
    auto sg = admissible_sign_assignment(q);
    REQUIRE(sg);
    int plus = 0;
    for (const auto& [e, s] : sg->sign)
      if (s > 0) ++plus;
    CHECK(plus % 2 == 1);
    Realization r = realization_from_signs(q, *sg);
    CHECK(check_compatibility(r, q));
    CHECK(check_admissible(r, q));
  }

  // solvable at every member of a mixed-weight finite class
  ClassReport rep = explore(path_quiver(5, {{1, 5}, {2, 5}}), {});
  REQUIRE(rep.verdict == Verdict::Finite);
  CHECK(rep.size == 10);
  for (const Quiver& m : rep.representatives) {
    auto sm = admissible_sign_assignment(m);
    REQUIRE(sm);
    CHECK(check_admissible(realization_from_signs(m, *sm), m));
  }

  // the assignment must cover the arrow set exactly
  SignAssignment bad;
  bad.sign[{0, 1}] = -1;
  CHECK_THROWS_AS(realization_from_signs(h4, bad), std::invalid_argument);
  bad.sign[{1, 2}] = -1;
  bad.sign[{2, 3}] = -1;
  bad.sign[{0, 2}] = -1;
  CHECK_THROWS_AS(realization_from_signs(h4, bad), std::invalid_argument);
}

TEST_CASE("sign systems across integer classes: rank 4 clean, one rank-5 obstruction") {
  const long amb = 6;
  std::vector<std::pair<int, int>> slots = {{0, 1}, {0, 2}, {0, 3},
                                            {1, 2}, {1, 3}, {2, 3}};
  // all connected integer quivers on 4 vertices with weights in [-2, 2]
  std::set<std::string> seeds_seen, class_seen;
  std::vector<ClassReport> bases;
  std::size_t double_arrow_classes = 0, infeasible_rank4 = 0;
  std::multiset<std::size_t> double_arrow_sizes;
  ExploreBudget small{20000, 20000};
  std::vector<int> w(6, 0);
  for (long code = 0; code < 15625; ++code) {
    long c = code;
    for (int t = 0; t < 6; ++t) {
      w[t] = (int)(c % 5) - 2;
      c /= 5;
    }
    Quiver q(4, amb);
    for (int t = 0; t < 6; ++t)
      if (w[t] != 0) q.set_arrow(slots[t].first, slots[t].second, CycloReal::from_int(w[t], amb));
    if (!q.is_connected()) continue;
    if (!seeds_seen.insert(canonical_key(q)).second) continue;
    ClassReport rep = explore(q, small);
    if (rep.verdict != Verdict::Finite) continue;
    if (!class_seen.insert(rep.member_keys.front()).second) continue;

    bool has_double = false;
    std::size_t infeasible = 0;
    for (const Quiver& m : rep.representatives) {
      for (int i = 0; i < 4 && !has_double; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (m.entry(i, j).abs() == CycloReal::from_int(2, amb)) {
            has_double = true;
            break;
          }
      if (!admissible_sign_assignment(m)) ++infeasible;
    }
    if (has_double) {
      ++double_arrow_classes;
      double_arrow_sizes.insert(rep.size);
    }
    infeasible_rank4 += infeasible;
    bases.push_back(std::move(rep));
  }
  CHECK(bases.size() == 5);
  CHECK(double_arrow_classes == 3);
  CHECK(double_arrow_sizes == std::multiset<std::size_t>{1, 4, 5});
  CHECK(infeasible_rank4 == 0);  // every rank-4 member admits signs

  // one extra vertex with integer weights: exactly one class obstructs
  std::vector<CycloReal> alphabet;
  for (int v = -2; v <= 2; ++v) alphabet.push_back(CycloReal::from_int(v, amb));
  std::vector<ClassReport> ext = extend_classification(bases, alphabet, {200000, 65536}, 0);
  CHECK(ext.size() == 7);
  std::size_t obstructed = 0;
  for (const ClassReport& r : ext) {
    std::size_t infeasible = 0;
    bool has_double = false;
    for (const Quiver& m : r.representatives) {
      if (!admissible_sign_assignment(m)) ++infeasible;
      for (int i = 0; i < 5 && !has_double; ++i)
        for (int j = i + 1; j < 5; ++j)
          if (m.entry(i, j).abs() == CycloReal::from_int(2, amb)) {
            has_double = true;
            break;
          }
    }
    if (infeasible == 0) continue;
    ++obstructed;
    CHECK(r.size == 10);
    CHECK(infeasible == 4);
    CHECK(has_double);
  }
  CHECK(obstructed == 1);
}

TEST_CASE("corank is exact and stable under mutation") {
  // finite-type seeds: full rank
  CHECK(gram_corank(initial_realization(h3())) == 0);
  CHECK(gram_corank(initial_realization(path_quiver(5, {{1, 5}, {1, 3}, {1, 3}}))) == 0);
  CHECK(gram_corank(initial_realization(path_quiver(4, {{1, 3}, {1, 4}, {1, 3}}))) == 0);

  // one-dimensional radical
  Quiver f4t = path_quiver(4, {{1, 3}, {1, 3}, {1, 4}, {1, 3}});
  CHECK(gram_corank(initial_realization(f4t)) == 1);
  CHECK(gram_corank(initial_realization(g2_triangle(5))) == 1);
  CHECK(gram_corank(initial_realization(g2_triangle(7))) == 1);

  // two-dimensional radical for every series base
  for (SeriesFamily f : {SeriesFamily::Odd, SeriesFamily::EvenA, SeriesFamily::EvenB})
    for (long n = 2; n <= 3; ++n) {
      Realization r = initial_realization(realize_standard_form(series_base(f, n)));
      CHECK(gram_corank(r) == 2);
      CHECK(numeric_corank(r) == 2);
    }

  // corank never moves along a mutation walk
  std::mt19937 rng(7);
  auto walk = [&](const Quiver& seed, int expected, int steps) {
    Quiver q = seed;
    Realization r = initial_realization(q);
    for (int s = 0; s < steps; ++s) {
      int k = (int)(rng() % q.rank());
      r = mutate_realization(r, q, k);
      q = q.mutated(k);
      CHECK(gram_corank(r) == expected);
      if (s < 5) CHECK(numeric_corank(r) == expected);
    }
  };
  walk(f4t, 1, 25);
  walk(realize_standard_form(series_base(SeriesFamily::Odd, 3)), 2, 25);
}

TEST_CASE("class-wide propagation: sizes, coranks, no violations") {
  struct Row {
    Quiver seed;
    std::size_t pairs;
    int corank;
    std::size_t acyclic;
  };
  std::vector<Row> rows;
  rows.push_back({h3(), 6, 0, 4});
  rows.push_back({path_quiver(5, {{2, 5}, {1, 3}}), 6, 0, 5});
  rows.push_back({path_quiver(5, {{1, 5}, {2, 5}}), 10, 0, 7});
  rows.push_back({path_quiver(5, {{1, 5}, {1, 3}, {1, 3}}), 18, 0, 8});
  rows.push_back({path_quiver(5, {{2, 5}, {1, 3}, {1, 3}}), 23, 0, 14});
  rows.push_back({path_quiver(5, {{2, 5}, {1, 5}, {1, 3}}), 32, 0, 14});
  rows.push_back({path_quiver(5, {{2, 5}, {1, 3}, {1, 5}}), 60, 0, 26});
  rows.push_back({path_quiver(5, {{2, 5}, {1, 5}, {2, 5}}), 30, 0, 14});
  rows.push_back({path_quiver(4, {{1, 3}, {1, 4}, {1, 3}}), 8, 0, 4});
  rows.push_back({path_quiver(4, {{1, 3}, {1, 3}, {1, 4}, {1, 3}}), 60, 1, 16});
  rows.push_back({g2_triangle(5), 6, 1, 3});
  rows.push_back({g2_triangle(7), 12, 1, 6});
  for (const Row& row : rows) {
    RealizationClassReport rep = verify_class_realization(row.seed);
    CHECK(rep.ok());
    CHECK(rep.pair_count == row.pairs);
    // distinct Gram fillings are in bijection with the quivers here
    CHECK(rep.quiver_count == row.pairs);
    CHECK(rep.corank == row.corank);
    CHECK(rep.acyclic_pair_count == row.acyclic);
    CHECK(rep.acyclic_flip_failures == 0);
    CHECK(rep.first_violation_path.empty());
  }

  // series standard forms: corank 2 and not a single acyclic member
  struct SRow {
    SeriesFamily f;
    long n;
    std::size_t pairs;
  };
  std::vector<SRow> srows = {
      {SeriesFamily::Odd, 2, 3},  {SeriesFamily::Odd, 3, 6},  {SeriesFamily::Odd, 4, 10},
      {SeriesFamily::EvenA, 2, 2}, {SeriesFamily::EvenA, 3, 4}, {SeriesFamily::EvenA, 4, 8},
      {SeriesFamily::EvenB, 2, 2}, {SeriesFamily::EvenB, 3, 2}, {SeriesFamily::EvenB, 4, 3}};
  for (const SRow& s : srows) {
    RealizationClassReport rep = verify_class_realization(realize_standard_form(series_base(s.f, s.n)));
    CHECK(rep.ok());
    CHECK(rep.pair_count == s.pairs);
    CHECK(rep.quiver_count == s.pairs);
    CHECK(rep.corank == 2);
    CHECK(rep.acyclic_pair_count == 0);
  }
}

TEST_CASE("propagation falls back to a realizable member when the seed has none") {
  Quiver sq = oriented_square();
  CHECK_THROWS_AS(initial_realization(sq), std::invalid_argument);
  RealizationClassReport rep = verify_class_realization(sq);
  CHECK(rep.ok());
  CHECK(rep.start.is_acyclic());
  CHECK(rep.pair_count == 6);
  CHECK(rep.quiver_count == 6);
  CHECK(rep.corank == 0);
  CHECK(rep.acyclic_pair_count == 4);

  // the all-2 triangle class is a single pair with a rank-1 form
  RealizationClassReport mk = verify_class_realization(markov());
  CHECK(mk.ok());
  CHECK(mk.pair_count == 1);
  CHECK(mk.quiver_count == 1);
  CHECK(mk.corank == 2);
  CHECK(mk.acyclic_pair_count == 0);

  // nothing in the class of the all-3 triangle is realizable
  Quiver ttt(3, 1);
  ttt.set_arrow(0, 1, CycloReal::from_int(3, 1));
  ttt.set_arrow(1, 2, CycloReal::from_int(3, 1));
  ttt.set_arrow(2, 0, CycloReal::from_int(3, 1));
  CHECK_THROWS_AS(verify_class_realization(ttt, {200, 200}), std::invalid_argument);

  // a tiny budget reports exhaustion instead of a verdict
  RealizationClassReport tiny =
      verify_class_realization(path_quiver(5, {{2, 5}, {1, 3}, {1, 5}}), {10, 10});
  CHECK(tiny.verdict == Verdict::BudgetExhausted);
  CHECK(!tiny.ok());
  CHECK(tiny.pair_count >= 10);
}

TEST_CASE("acute sign flips: found when parity allows, refused otherwise") {
  CycloReal y = CycloReal::from_label({1, 5}, 5);
  CycloReal one = CycloReal::from_int(1, 5);

  Realization r(3, 5);
  r.set(0, 1, y);
  r.set(0, 2, one);
  r.set(1, 2, -y);
  auto flip = acute_sign_flip(r);
  REQUIRE(flip);
  CHECK(*flip == std::vector<int>{1, -1, -1});
  // the flipped form is genuinely non-obtuse
  Realization f = r.sign_conjugated(*flip);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(f.at(i, j).sign() <= 0);

  // all-acute triangle: flips preserve the product of the three signs
  Realization bad(3, 5);
  bad.set(0, 1, one);
  bad.set(0, 2, one);
  bad.set(1, 2, one);
  CHECK(!acute_sign_flip(bad));

  // same obstruction for the duplicated-vector realization
  CHECK(!acute_sign_flip(initial_realization(g2_triangle(5))));
}

TEST_CASE("propagation is deterministic") {
  Quiver seed = path_quiver(5, {{1, 5}, {2, 5}});
  RealizationClassReport a = verify_class_realization(seed);
  RealizationClassReport b = verify_class_realization(seed);
  CHECK(a.start.str() == b.start.str());
  CHECK(a.pair_count == b.pair_count);
  CHECK(a.quiver_count == b.quiver_count);
  CHECK(a.corank == b.corank);
  CHECK(a.acyclic_pair_count == b.acyclic_pair_count);
}

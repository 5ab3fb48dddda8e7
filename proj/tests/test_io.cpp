#include "qmut/quiver_io.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "qmut/quiver.hpp"
#include "qmut/realization.hpp"

using namespace qmut;

namespace {

Quiver h3() {
  return Quiver::from_labeled_arrows(3, 5, {{0, 1, {1, 3}}, {1, 2, {1, 5}}});
}

}  // namespace

TEST_CASE("quiver documents round-trip") {
  std::vector<Quiver> qs;
  qs.push_back(h3());
  qs.push_back(Quiver::from_labeled_arrows(
      3, 1, {{0, 1, {0, 1}}, {1, 2, {0, 1}}, {2, 0, {0, 1}}}));
  qs.push_back(Quiver::from_labeled_arrows(
      4, 20, {{0, 1, {1, 5}}, {1, 2, {1, 4}}, {2, 3, {2, 5}}, {3, 0, {1, 3}}}));
  qs.push_back(Quiver(3, 7));  // no arrows at all
  // a mutated quiver can carry non-label weights
  Quiver sum(3, 5);
  sum.set_arrow(0, 1, CycloReal::from_int(1, 5) + CycloReal::from_label({1, 5}, 5));
  sum.set_arrow(1, 2, CycloReal::from_label({1, 5}, 5));
  qs.push_back(sum);

  for (const Quiver& q : qs) {
    std::string text = quiver_to_json(q);
    Quiver back = quiver_from_json(text);
    CHECK(back.rank() == q.rank());
    CHECK(back.ambient() == q.ambient());
    CHECK(back.str() == q.str());
    // serialization is deterministic
    CHECK(quiver_to_json(back) == text);
  }
}

TEST_CASE("document parsing accepts comments and validates the invariants") {
  Quiver q = quiver_from_json(R"(
    // two arrows over ambient 5
    {
      "schema_version": 1,
      "rank": 3,
      "ambient": 5,
      "arrows": [
        {"from": 1, "to": 2, "label": {"num": 1, "den": 3}},
        {"from": 2, "to": 3, "label": {"num": 1, "den": 5}}
      ]
    })");
  CHECK(q.str() == h3().str());

  CHECK_THROWS_AS(quiver_from_json("{ not json"), std::runtime_error);
  // loops, duplicate pairs, bad vertices, bad labels
  auto doc = [](const std::string& arrows) {
    return R"({"schema_version": 1, "rank": 3, "ambient": 5, "arrows": [)" + arrows + "]}";
  };
  CHECK_THROWS_AS(quiver_from_json(doc(R"({"from": 1, "to": 1, "label": {"num": 1, "den": 3}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      quiver_from_json(doc(R"({"from": 1, "to": 2, "label": {"num": 1, "den": 3}},
                              {"from": 2, "to": 1, "label": {"num": 1, "den": 5}})")),
      std::invalid_argument);
  CHECK_THROWS_AS(quiver_from_json(doc(R"({"from": 0, "to": 2, "label": {"num": 1, "den": 3}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(quiver_from_json(doc(R"({"from": 1, "to": 4, "label": {"num": 1, "den": 3}})")),
                  std::invalid_argument);
  // denominator must fit the ambient (1/4 does not live in ambient 5)
  CHECK_THROWS_AS(quiver_from_json(doc(R"({"from": 1, "to": 2, "label": {"num": 1, "den": 4}})")),
                  std::invalid_argument);
  // labels of non-positive weights are rejected
  CHECK_THROWS_AS(quiver_from_json(doc(R"({"from": 1, "to": 2, "label": {"num": 1, "den": 2}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(quiver_from_json(doc(R"({"from": 1, "to": 2, "label": {"num": 4, "den": 5}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(quiver_from_json(doc(R"({"from": 1, "to": 2})")), std::invalid_argument);
  CHECK_THROWS_AS(
      quiver_from_json(
          R"({"schema_version": 2, "rank": 3, "ambient": 5, "arrows": []})"),
      std::invalid_argument);
}

TEST_CASE("gram documents round-trip and reject broken matrices") {
  Realization r = initial_realization(h3());
  std::string text = realization_to_json(r);
  Realization back = realization_from_json(text);
  CHECK(back == r);
  CHECK(realization_to_json(back) == text);

  // negative entries serialize as labels in the obtuse range
  CHECK(text.find("\"num\": 4") != std::string::npos);  // -2cos(pi/5) = 2cos(4pi/5)

  // the diagonal is pinned at 2: the first entry is the label 0/1, and
  // turning it into 1/1 = -2 must be rejected
  std::string broken = text;
  std::size_t pos = broken.find("\"num\": 0");
  REQUIRE(pos != std::string::npos);
  broken.replace(pos, 8, "\"num\": 1");
  CHECK_THROWS_AS(realization_from_json(broken), std::invalid_argument);
}

TEST_CASE("dot export follows the drawing conventions") {
  // unit arrows unlabeled, weight-2 arrows doubled, others labeled m/d
  Quiver q = Quiver::from_labeled_arrows(
      3, 5, {{0, 1, {1, 3}}, {1, 2, {1, 5}}, {2, 0, {0, 1}}});
  std::string dot = quiver_to_dot(q);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("v1 -> v2;") != std::string::npos);            // weight 1: no label
  CHECK(dot.find("v2 -> v3 [label=\"1/5\"];") != std::string::npos);
  CHECK(dot.find("v3 -> v1 [color=\"black:black\"];") != std::string::npos);

  // arrow-free documents still list every node
  std::string lonely = quiver_to_dot(Quiver(3, 1));
  CHECK(lonely.find("v1 [label=\"1\"];") != std::string::npos);
  CHECK(lonely.find("v3 [label=\"3\"];") != std::string::npos);
  CHECK(lonely.find("->") == std::string::npos);
}

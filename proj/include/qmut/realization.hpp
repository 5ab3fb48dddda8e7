// Geometric realizations of quivers by tuples of norm-2 vectors, stored
// basis-free as Gram matrices: partial-reflection mutation, admissibility
// parity checks, exact corank, arrow-sign systems, and class-wide
// propagation reports.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmut/explore.hpp"
#include "qmut/quiver.hpp"

namespace qmut {

// Gram matrix (v_i, v_j) of the realizing vectors: symmetric, every diagonal
// entry exactly 2.
class Realization {
 public:
  Realization() : Realization(1, 1) {}
  Realization(int rank, long ambient);  // diagonal 2, zero elsewhere

  int rank() const { return rank_; }
  long ambient() const { return ambient_; }
  const CycloReal& at(int i, int j) const { return g_[i * rank_ + j]; }
  // Sets (v_i, v_j) = (v_j, v_i) = w; the diagonal is not assignable.
  void set(int i, int j, const CycloReal& w);

  // Same form re-expressed over a multiple of the current ambient.
  Realization lifted(long ambient) const;
  // placement[p] = original index put at position p.
  Realization permuted(const std::vector<int>& placement) const;
  // Replaces v_i by eps[i] * v_i, eps entries +1/-1.
  Realization sign_conjugated(const std::vector<int>& eps) const;

  bool operator==(const Realization& o) const;
  bool operator!=(const Realization& o) const { return !(*this == o); }

  std::string str() const;

 private:
  int rank_;
  long ambient_;
  std::vector<CycloReal> g_;  // row-major rank x rank, symmetric
};

// Signs for the arrows of a quiver, keyed by the unordered pair {i, j} with
// i < j.  +1 stands for (v_i, v_j) = |b_ij|, -1 for (v_i, v_j) = -|b_ij|.
struct SignAssignment {
  std::map<std::pair<int, int>, int> sign;
};

// Gram matrix with (v_i, v_j) = sign{i,j} * |b_ij|.  The assignment must be
// defined exactly on the arrow set of q.
Realization realization_from_signs(const Quiver& q, const SignAssignment& signs);

// Admissible realization for the three seed shapes: acyclic quivers
// ((v_i, v_j) = -w_ij), quivers with a double arrow whose removal of either
// endpoint leaves an acyclic quiver (the remaining endpoint's vector is
// duplicated), and mutation-acyclic rank-3 quivers (realized at a nearby
// acyclic member and pulled back along the mutation path).  Throws
// std::invalid_argument when q matches none of the shapes.
Realization initial_realization(const Quiver& q);

// Partial reflection at k: v_j -> v_j - (v_j, v_k) v_k for every j with
// b_jk > 0, v_k -> -v_k, the rest unchanged.  The diagonal stays 2.  Throws
// std::invalid_argument when r is not compatible with q.
Realization mutate_realization(const Realization& r, const Quiver& q, int k);

// |(v_i, v_j)| == |b_ij| for all i != j.
bool check_compatibility(const Realization& r, const Quiver& q);

// Parity conditions over every chordless cycle of q: an oriented cycle must
// carry an odd number of positive products (v_i, v_j) between cyclically
// consecutive vertices, a non-oriented cycle an even number.  Length-3
// chordless cycles are exactly the fully-connected triples, so this includes
// the triangle condition (even positive pairs on acyclic triangles, odd on
// cyclic ones).
bool check_admissible(const Realization& r, const Quiver& q);

// Solves the admissibility parities for arrow signs: one GF(2) equation per
// chordless cycle, one unknown per arrow.  Signs left free by the system
// default to -1; acyclic quivers get the all-minus assignment.  Empty
// optional iff the system is infeasible.
std::optional<SignAssignment> admissible_sign_assignment(const Quiver& q);

// rank() minus the matrix rank of the Gram matrix, by fraction-free
// (Bareiss) elimination: divisions are only by earlier pivots and each
// quotient is verified exact by back-multiplication.
int gram_corank(const Realization& r);

// Vertex sign flips making every angle non-obtuse: eps in {+1,-1}^n with
// eps_i * eps_j * (v_i, v_j) <= 0 for all i != j.  Exhaustive over the
// 2^(n-1) patterns with eps_0 = +1; empty optional when none works.
std::optional<std::vector<int>> acute_sign_flip(const Realization& r);

struct RealizationClassReport {
  Quiver start;  // realized member the search grew from
  Verdict verdict = Verdict::BudgetExhausted;
  // Distinct (Gram, quiver) pairs, up to simultaneous relabeling and
  // v_i -> -v_i flips; quivers counted the same way for reference.
  std::size_t pair_count = 0;
  std::size_t quiver_count = 0;
  int corank = 0;  // corank at the start
  bool corank_constant = true;
  std::size_t compatibility_violations = 0;
  std::size_t admissibility_violations = 0;
  // Mutation path from `start` to the first violation, if any.
  std::vector<int> first_violation_path;
  // Acyclic members among the distinct pairs, and how many of their
  // propagated Gram matrices admit no acute sign flip.
  std::size_t acyclic_pair_count = 0;
  std::size_t acyclic_flip_failures = 0;

  bool ok() const {
    return verdict == Verdict::Finite && corank_constant &&
           compatibility_violations == 0 && admissibility_violations == 0;
  }
};

// Breadth-first closure of (quiver, Gram) pairs from an initial realization,
// checking compatibility and admissibility at every node and recording the
// corank.  When q itself admits no initial realization the search starts
// from an acyclic or double-arrow member of its class found by a quiver
// level exploration (throws std::invalid_argument when none exists).
// budget.max_quivers caps the number of distinct pairs.
RealizationClassReport verify_class_realization(const Quiver& q,
                                                const ExploreBudget& budget = {});

}  // namespace qmut

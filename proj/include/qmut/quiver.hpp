// Quivers with real arrow weights: skew-symmetric exchange matrices over a
// real cyclotomic field, mutation, and canonical forms under simultaneous
// row/column permutation.

#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "qmut/cyclo.hpp"

namespace qmut {

struct Arrow {
  int from = 0;
  int to = 0;
  CycloReal weight;  // positive
};

class Quiver {
 public:
  Quiver() : Quiver(1, 1) {}
  Quiver(int rank, long ambient);

  // Arrows given as (from, to, label); weights are 2cos(pi*label).
  static Quiver from_labeled_arrows(
      int rank, long ambient,
      const std::vector<std::tuple<int, int, AngleLabel>>& arrows);

  int rank() const { return rank_; }
  long ambient() const { return ambient_; }
  const CycloReal& entry(int i, int j) const { return m_[i * rank_ + j]; }
  // Sets b_ij = w and b_ji = -w.
  void set_arrow(int i, int j, const CycloReal& w);

  Quiver mutated(int k) const;
  Quiver opposite() const;
  // Same quiver re-expressed over a multiple of the current ambient.
  Quiver lifted(long ambient) const;
  // Restriction to the given vertices, in the given order.
  Quiver subquiver(const std::vector<int>& vertices) const;
  // placement[p] = original vertex put at position p.
  Quiver permuted(const std::vector<int>& placement) const;

  bool operator==(const Quiver& o) const;
  bool operator!=(const Quiver& o) const { return !(*this == o); }

  int arrow_sign(int i, int j) const;  // -1/0/+1 of entry(i, j)
  std::vector<Arrow> arrows() const;   // entries with positive sign
  bool is_connected() const;
  bool is_acyclic() const;
  std::vector<int> sinks() const;
  std::vector<int> sources() const;

  // Vertex sets of chordless (induced) cycles of the underlying graph,
  // each returned in cyclic order.
  std::vector<std::vector<int>> chordless_cycles() const;
  bool cycle_is_oriented(const std::vector<int>& cycle) const;

  // Labels of all arrow weights; empty optional when some weight is not of
  // the form 2cos(pi*m/d).
  std::optional<std::vector<AngleLabel>> weight_labels() const;
  std::optional<long> highest_denominator() const;

  // Forces evaluation of every entry's memoized sign so that later
  // concurrent reads of a shared instance stay read-only.
  void warm() const;

  std::string str() const;

 private:
  int rank_;
  long ambient_;
  std::vector<CycloReal> m_;  // row-major rank x rank, skew-symmetric
};

// Canonical key of the permutation class of q (optionally also modulo
// reversing all arrows).  Equal keys mean the quivers agree up to a
// simultaneous relabeling of vertices.
std::string canonical_key(const Quiver& q, bool mod_opposite = false);

struct CanonicalPerms {
  std::string key;
  // Each placement p satisfies: q.permuted(p) is the canonical
  // representative; all minimizing placements are listed.
  std::vector<std::vector<int>> placements;
};
CanonicalPerms canonical_key_with_perms(const Quiver& q);

Quiver canonical_representative(const Quiver& q);

// For quivers with equal canonical_key (not mod opposite): a vertex map
// phi with b.entry(phi(u), phi(v)) == a.entry(u, v).
std::vector<int> isomorphism_map(const Quiver& a, const Quiver& b);

}  // namespace qmut

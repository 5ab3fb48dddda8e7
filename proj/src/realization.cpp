// Geometric realizations as Gram matrices: seeding (acyclic, double-arrow
// duplication, rank-3 pullback), partial-reflection mutation as a congruence,
// admissibility parities on chordless cycles, GF(2) sign systems, Bareiss
// corank, and the pair-carrying class verification.

#include "qmut/realization.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace qmut {

namespace {

CycloReal two_in(long ambient) { return CycloReal::from_int(2, ambient); }

}  // namespace

Realization::Realization(int rank, long ambient) : rank_(rank), ambient_(ambient) {
  if (rank < 1) throw std::invalid_argument("realization rank must be positive");
  g_.assign(static_cast<std::size_t>(rank) * rank, CycloReal::zero(ambient));
  for (int i = 0; i < rank; ++i) g_[static_cast<std::size_t>(i) * rank + i] = two_in(ambient);
}

void Realization::set(int i, int j, const CycloReal& w) {
  if (i < 0 || j < 0 || i >= rank_ || j >= rank_)
    throw std::out_of_range("realization set: index out of range");
  if (i == j) throw std::invalid_argument("realization set: diagonal is fixed at 2");
  CycloReal v = w.ambient() == ambient_ ? w : w.lifted(ambient_);
  g_[static_cast<std::size_t>(i) * rank_ + j] = v;
  g_[static_cast<std::size_t>(j) * rank_ + i] = v;
}

Realization Realization::lifted(long ambient) const {
  if (ambient == ambient_) return *this;
  Realization out(rank_, ambient);
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j) out.set(i, j, at(i, j).lifted(ambient));
  return out;
}

Realization Realization::permuted(const std::vector<int>& placement) const {
  if (static_cast<int>(placement.size()) != rank_)
    throw std::invalid_argument("realization permuted: placement size mismatch");
  Realization out(rank_, ambient_);
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j) out.set(i, j, at(placement[i], placement[j]));
  return out;
}

Realization Realization::sign_conjugated(const std::vector<int>& eps) const {
  if (static_cast<int>(eps.size()) != rank_)
    throw std::invalid_argument("realization sign_conjugated: eps size mismatch");
  Realization out(rank_, ambient_);
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j) {
      const CycloReal& v = at(i, j);
      out.set(i, j, eps[i] * eps[j] < 0 ? -v : v);
    }
  return out;
}

bool Realization::operator==(const Realization& o) const {
  if (rank_ != o.rank_) return false;
  if (ambient_ != o.ambient_) {
    long l = lcm_long(ambient_, o.ambient_);
    return lifted(l) == o.lifted(l);
  }
  for (std::size_t t = 0; t < g_.size(); ++t)
    if (g_[t] != o.g_[t]) return false;
  return true;
}

std::string Realization::str() const {
  std::string s = std::to_string(rank_) + "@" + std::to_string(ambient_) + ":";
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j) {
      s += at(i, j).str();
      s += ';';
    }
  return s;
}

Realization realization_from_signs(const Quiver& q, const SignAssignment& signs) {
  Realization r(q.rank(), q.ambient());
  std::size_t used = 0;
  for (int i = 0; i < q.rank(); ++i)
    for (int j = i + 1; j < q.rank(); ++j) {
      auto it = signs.sign.find({i, j});
      bool arrow = !q.entry(i, j).is_zero();
      if (arrow != (it != signs.sign.end()))
        throw std::invalid_argument("sign assignment does not match the arrow set");
      if (!arrow) continue;
      ++used;
      CycloReal w = q.entry(i, j).abs();
      r.set(i, j, it->second > 0 ? w : -w);
    }
  if (used != signs.sign.size())
    throw std::invalid_argument("sign assignment has keys outside the arrow set");
  return r;
}

bool check_compatibility(const Realization& r, const Quiver& q) {
  if (r.rank() != q.rank()) return false;
  if (r.ambient() != q.ambient()) {
    long l = lcm_long(r.ambient(), q.ambient());
    return check_compatibility(r.lifted(l), q.lifted(l));
  }
  for (int i = 0; i < q.rank(); ++i)
    for (int j = i + 1; j < q.rank(); ++j)
      if (r.at(i, j).abs() != q.entry(i, j).abs()) return false;
  return true;
}

bool check_admissible(const Realization& r, const Quiver& q) {
  if (r.rank() != q.rank()) return false;
  if (r.ambient() != q.ambient()) {
    long l = lcm_long(r.ambient(), q.ambient());
    return check_admissible(r.lifted(l), q.lifted(l));
  }
  for (const std::vector<int>& cyc : q.chordless_cycles()) {
    int positive = 0;
    for (std::size_t t = 0; t < cyc.size(); ++t) {
      int i = cyc[t];
      int j = cyc[(t + 1) % cyc.size()];
      if (r.at(i, j).sign() > 0) ++positive;
    }
    if ((positive % 2 != 0) != q.cycle_is_oriented(cyc)) return false;
  }
  return true;
}

namespace {

// (v_i, v_j) = -w_ij; admissible for any acyclic quiver (no positive
// products, and every chordless cycle of an acyclic quiver is non-oriented).
Realization acyclic_seed(const Quiver& q) {
  Realization r(q.rank(), q.ambient());
  for (int i = 0; i < q.rank(); ++i)
    for (int j = i + 1; j < q.rank(); ++j)
      if (!q.entry(i, j).is_zero()) r.set(i, j, -q.entry(i, j).abs());
  return r;
}

std::vector<int> all_but(int rank, int skip) {
  std::vector<int> v;
  for (int i = 0; i < rank; ++i)
    if (i != skip) v.push_back(i);
  return v;
}

// Realizes the part away from one end of a double arrow by the acyclic rule
// and duplicates the kept end's vector at the removed end.
std::optional<Realization> double_arrow_seed(const Quiver& q) {
  const int n = q.rank();
  const CycloReal two = two_in(q.ambient());
  for (int keep = 0; keep < n; ++keep)
    for (int dup = 0; dup < n; ++dup) {
      if (keep == dup || q.entry(keep, dup).abs() != two) continue;
      if (!q.subquiver(all_but(n, dup)).is_acyclic()) continue;
      if (!q.subquiver(all_but(n, keep)).is_acyclic()) continue;
      Realization r(n, q.ambient());
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (i != dup && j != dup && !q.entry(i, j).is_zero())
            r.set(i, j, -q.entry(i, j).abs());
      for (int i = 0; i < n; ++i)
        if (i != keep && i != dup) r.set(dup, i, r.at(keep, i));
      r.set(dup, keep, two);
      if (check_compatibility(r, q) && check_admissible(r, q)) return r;
    }
  return std::nullopt;
}

// Realizes a nearby acyclic member of the class and pulls the form back
// along the connecting mutation path.  Mutation-cyclic and mutation-infinite
// inputs have no acyclic member to start from.
std::optional<Realization> rank3_pullback_seed(const Quiver& q) {
  if (q.rank() != 3) return std::nullopt;
  ClassReport rep = explore(q, {4000, 4000});
  if (rep.acyclic_members.empty()) return std::nullopt;
  std::optional<std::vector<int>> path = find_mutation_path(q, rep.acyclic_members.front());
  if (!path) return std::nullopt;
  // q --path[0]--> ... --path.back()--> acyclic end; walk it backwards
  std::vector<Quiver> chain{q};
  for (int k : *path) chain.push_back(chain.back().mutated(k));
  if (!chain.back().is_acyclic()) return std::nullopt;
  Realization r = acyclic_seed(chain.back());
  for (std::size_t t = path->size(); t-- > 0;)
    r = mutate_realization(r, chain[t + 1], (*path)[t]);
  if (check_compatibility(r, q) && check_admissible(r, q)) return r;
  return std::nullopt;
}

}  // namespace

Realization initial_realization(const Quiver& q) {
  if (q.is_acyclic()) return acyclic_seed(q);
  if (std::optional<Realization> r = double_arrow_seed(q)) return *r;
  if (std::optional<Realization> r = rank3_pullback_seed(q)) return *r;
  throw std::invalid_argument(
      "no initial realization: quiver is cyclic, has no suitable double "
      "arrow, and is not a mutation-acyclic rank-3 quiver");
}

Realization mutate_realization(const Realization& r, const Quiver& q, int k) {
  if (r.rank() != q.rank())
    throw std::invalid_argument("mutate_realization: rank mismatch");
  if (k < 0 || k >= q.rank())
    throw std::out_of_range("mutate_realization: vertex out of range");
  if (r.ambient() != q.ambient()) {
    long l = lcm_long(r.ambient(), q.ambient());
    return mutate_realization(r.lifted(l), q.lifted(l), k);
  }
  if (!check_compatibility(r, q))
    throw std::invalid_argument("mutate_realization: realization incompatible with quiver");
  const int n = q.rank();
  const long amb = q.ambient();
  const CycloReal two = two_in(amb);
  // v_j picks up a[j] * v_k; only vertices with an arrow to k reflect.
  std::vector<CycloReal> a(n, CycloReal::zero(amb));
  for (int j = 0; j < n; ++j)
    if (j != k && q.entry(j, k).sign() > 0) a[j] = -r.at(j, k);
  Realization out(n, amb);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (i == k || j == k) {
        int t = i == k ? j : i;  // (v_t + a[t] v_k, -v_k)
        out.set(i, j, -(r.at(t, k) + two * a[t]));
      } else {
        out.set(i, j, r.at(i, j) + a[i] * r.at(k, j) + a[j] * r.at(i, k) +
                          two * a[i] * a[j]);
      }
    }
  return out;
}

std::optional<SignAssignment> admissible_sign_assignment(const Quiver& q) {
  const int n = q.rank();
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> index;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!q.entry(i, j).is_zero()) {
        index[{i, j}] = static_cast<int>(edges.size());
        edges.emplace_back(i, j);
      }
  if (edges.size() > 63) throw std::invalid_argument("sign system: too many arrows");
  // One GF(2) equation per chordless cycle: sum of edge signs = orientation.
  std::vector<std::pair<std::uint64_t, int>> pivots;  // (row mask, rhs), RREF
  for (const std::vector<int>& cyc : q.chordless_cycles()) {
    std::uint64_t mask = 0;
    for (std::size_t t = 0; t < cyc.size(); ++t) {
      int i = cyc[t];
      int j = cyc[(t + 1) % cyc.size()];
      mask ^= std::uint64_t{1} << index.at(std::minmax(i, j));
    }
    int rhs = q.cycle_is_oriented(cyc) ? 1 : 0;
    for (const auto& [pm, pr] : pivots) {
      std::uint64_t low = pm & ~(pm - 1);
      if (mask & low) {
        mask ^= pm;
        rhs ^= pr;
      }
    }
    if (mask == 0) {
      if (rhs) return std::nullopt;
      continue;
    }
    std::uint64_t low = mask & ~(mask - 1);
    for (auto& [pm, pr] : pivots)
      if (pm & low) {
        pm ^= mask;
        pr ^= rhs;
      }
    pivots.emplace_back(mask, rhs);
  }
  // Free variables stay 0 (sign -), so each pivot variable equals its rhs.
  std::vector<int> x(edges.size(), 0);
  for (const auto& [pm, pr] : pivots) {
    int bit = 0;
    std::uint64_t low = pm & ~(pm - 1);
    while (!(low & (std::uint64_t{1} << bit))) ++bit;
    x[bit] = pr;
  }
  SignAssignment out;
  for (std::size_t e = 0; e < edges.size(); ++e) out.sign[edges[e]] = x[e] ? 1 : -1;
  return out;
}

int gram_corank(const Realization& r) {
  const int n = r.rank();
  const long amb = r.ambient();
  std::vector<CycloReal> m;
  m.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.push_back(i == j ? two_in(amb) : r.at(i, j));
  auto at = [&](int i, int j) -> CycloReal& { return m[static_cast<std::size_t>(i) * n + j]; };
  CycloReal prev = CycloReal::from_int(1, amb);
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int piv = -1;
    for (int i = row; i < n; ++i)
      if (!at(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(row, j));
    for (int i = row + 1; i < n; ++i) {
      for (int j = col + 1; j < n; ++j)
        at(i, j) = (at(row, col) * at(i, j) - at(i, col) * at(row, j)).divided_by(prev);
      at(i, col) = CycloReal::zero(amb);
    }
    prev = at(row, col);
    ++row;
  }
  return n - row;
}

std::optional<std::vector<int>> acute_sign_flip(const Realization& r) {
  const int n = r.rank();
  std::vector<int> sgn(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      sgn[static_cast<std::size_t>(i) * n + j] = r.at(i, j).sign();
  std::vector<int> eps(n, 1);
  for (std::uint32_t pattern = 0; pattern < (std::uint32_t{1} << (n - 1)); ++pattern) {
    for (int i = 1; i < n; ++i) eps[i] = (pattern >> (i - 1)) & 1 ? -1 : 1;
    bool acute = true;
    for (int i = 0; i < n && acute; ++i)
      for (int j = i + 1; j < n && acute; ++j)
        if (sgn[static_cast<std::size_t>(i) * n + j] * eps[i] * eps[j] > 0) acute = false;
    if (acute) return eps;
  }
  return std::nullopt;
}

namespace {

// Minimal serialization of the Gram matrix over all canonical placements of
// the quiver and all v_i -> -v_i flips; quotients out the presentation
// freedom of a (quiver, Gram) pair.
std::string pair_key(const Realization& r, const CanonicalPerms& cp) {
  const int n = r.rank();
  std::vector<std::string> pos(static_cast<std::size_t>(n) * n), neg(pos.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      pos[static_cast<std::size_t>(i) * n + j] = r.at(i, j).str();
      neg[static_cast<std::size_t>(i) * n + j] = (-r.at(i, j)).str();
    }
  std::string best;
  std::vector<int> eps(n, 1);
  for (const std::vector<int>& p : cp.placements)
    for (std::uint32_t pattern = 0; pattern < (std::uint32_t{1} << (n - 1)); ++pattern) {
      for (int i = 1; i < n; ++i) eps[i] = (pattern >> (i - 1)) & 1 ? -1 : 1;
      std::string s;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          std::size_t t = static_cast<std::size_t>(p[i]) * n + p[j];
          s += eps[i] * eps[j] < 0 ? neg[t] : pos[t];
          s += ';';
        }
      if (best.empty() || s < best) best = std::move(s);
    }
  return cp.key + '\n' + best;
}

struct PairNode {
  Quiver q;
  Realization r;
  std::vector<int> path;
};

}  // namespace

RealizationClassReport verify_class_realization(const Quiver& q, const ExploreBudget& budget) {
  Quiver start = q;
  std::optional<Realization> seed;
  try {
    seed = initial_realization(q);
  } catch (const std::invalid_argument&) {
  }
  if (!seed) {
    ClassReport rep = explore(q, budget);
    std::vector<Quiver> candidates = rep.acyclic_members;
    candidates.insert(candidates.end(), rep.representatives.begin(), rep.representatives.end());
    for (const Quiver& c : candidates) {
      try {
        seed = initial_realization(c);
        start = c;
        break;
      } catch (const std::invalid_argument&) {
      }
    }
    if (!seed)
      throw std::invalid_argument("verify_class_realization: no realizable member found");
  }

  RealizationClassReport out;
  out.start = start;
  out.corank = gram_corank(*seed);
  const int n = start.rank();

  auto note_acyclic = [&out](const Quiver& q, const Realization& r) {
    if (!q.is_acyclic()) return;
    ++out.acyclic_pair_count;
    if (!acute_sign_flip(r)) ++out.acyclic_flip_failures;
  };

  std::set<std::string> pairs;
  std::set<std::string> quivers;
  std::deque<PairNode> todo;
  {
    CanonicalPerms cp = canonical_key_with_perms(start);
    pairs.insert(pair_key(*seed, cp));
    quivers.insert(cp.key);
  }
  note_acyclic(start, *seed);
  todo.push_back({start, *seed, {}});

  auto record_violation = [&](const std::vector<int>& path) {
    if (out.first_violation_path.empty()) out.first_violation_path = path;
  };

  while (!todo.empty()) {
    PairNode node = std::move(todo.front());
    todo.pop_front();
    for (int k = 0; k < n; ++k) {
      Quiver nq = node.q.mutated(k);
      Realization nr = mutate_realization(node.r, node.q, k);
      std::vector<int> npath = node.path;
      npath.push_back(k);
      if (!check_compatibility(nr, nq)) {
        ++out.compatibility_violations;
        record_violation(npath);
        continue;
      }
      if (!check_admissible(nr, nq)) {
        ++out.admissibility_violations;
        record_violation(npath);
        continue;
      }
      CanonicalPerms cp = canonical_key_with_perms(nq);
      if (!pairs.insert(pair_key(nr, cp)).second) continue;
      quivers.insert(cp.key);
      note_acyclic(nq, nr);
      if (gram_corank(nr) != out.corank) out.corank_constant = false;
      if (pairs.size() > budget.max_quivers) {
        out.verdict = Verdict::BudgetExhausted;
        out.pair_count = pairs.size();
        out.quiver_count = quivers.size();
        return out;
      }
      todo.push_back({std::move(nq), std::move(nr), std::move(npath)});
    }
  }
  out.verdict = Verdict::Finite;
  out.pair_count = pairs.size();
  out.quiver_count = quivers.size();
  return out;
}

}  // namespace qmut

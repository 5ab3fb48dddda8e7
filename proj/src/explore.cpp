// Breadth-first enumeration of mutation classes with infiniteness rules, the
// rank-3 classifier, vertex-extension search, and mutation-path finding.
//
// Determinism: every report field is a function of (seed, budget) alone.  The
// frontier is expanded level by level; worker threads only fill a candidate
// array indexed by (frontier position, mutated vertex), and a single thread
// merges candidates in ascending index order, so discovery order, witness
// choice and statistics never depend on the thread count.

#include "qmut/explore.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace qmut {

namespace {

struct Violation {
  std::string rule;
  std::vector<int> vertices;
  std::string detail;
};

std::string weight_text(const CycloReal& w) { return w.str(); }

// Labels of |entry(i,j)| for i<j; nullopt marks a non-label weight.  Zero
// entries carry label 1/2.
struct LabelGrid {
  int rank;
  std::vector<std::optional<AngleLabel>> lbl;
  const std::optional<AngleLabel>& at(int i, int j) const { return lbl[i * rank + j]; }
};

LabelGrid label_grid(const Quiver& q) {
  LabelGrid g{q.rank(), {}};
  g.lbl.resize((size_t)q.rank() * q.rank());
  for (int i = 0; i < q.rank(); ++i)
    for (int j = i + 1; j < q.rank(); ++j)
      g.lbl[i * q.rank() + j] = q.entry(i, j).abs().to_label();
  return g;
}

bool is_weight_two(const std::optional<AngleLabel>& l) {
  return l && l->num == 0;
}

bool is_absent(const std::optional<AngleLabel>& l) {
  return l && l->num * 2 == l->den;  // label 1/2 <=> weight 0
}

// Rules (i)+(ii): every weight must be a label; otherwise distinguish |w|>2
// from a non-label value in [-2,2].
std::optional<Violation> weight_rules(const Quiver& q, const LabelGrid& g) {
  for (int i = 0; i < q.rank(); ++i)
    for (int j = i + 1; j < q.rank(); ++j) {
      if (g.at(i, j)) continue;
      const CycloReal& w = q.entry(i, j);
      CycloReal margin = w * w - CycloReal::from_int(4, q.ambient());
      if (margin.sign() > 0)
        return Violation{"weight-bound", {i, j}, "|weight| > 2: " + weight_text(w)};
      return Violation{"label-form", {i, j}, "weight not 2cos(pi m/N): " + weight_text(w)};
    }
  return std::nullopt;
}

bool triple_oriented(const Quiver& q, int i, int j, int k) {
  int sij = q.arrow_sign(i, j), sjk = q.arrow_sign(j, k), sik = q.arrow_sign(i, k);
  if (sij == 0 || sjk == 0 || sik == 0) return false;
  return sij == sjk && sik == -sij;
}

// Rule (iii): an oriented all-double-arrow triangle inside a larger quiver.
std::optional<Violation> markov_rule(const Quiver& q, const LabelGrid& g) {
  for (int i = 0; i < q.rank(); ++i)
    for (int j = i + 1; j < q.rank(); ++j) {
      if (!is_weight_two(g.at(i, j))) continue;
      for (int k = j + 1; k < q.rank(); ++k) {
        if (!is_weight_two(g.at(i, k)) || !is_weight_two(g.at(j, k))) continue;
        if (triple_oriented(q, i, j, k))
          return Violation{"markov-subquiver", {i, j, k}, "oriented (2,2,2) triangle"};
      }
    }
  return std::nullopt;
}

int triple_edges(const LabelGrid& g, int i, int j, int k) {
  return (is_absent(g.at(i, j)) ? 0 : 1) + (is_absent(g.at(i, k)) ? 0 : 1) +
         (is_absent(g.at(j, k)) ? 0 : 1);
}

// Rule (iv): some connected rank-3 subquiver has an infinite mutation class.
std::optional<Violation> rank3_rule(const Quiver& q, const LabelGrid& g, std::size_t budget) {
  for (int i = 0; i < q.rank(); ++i)
    for (int j = i + 1; j < q.rank(); ++j)
      for (int k = j + 1; k < q.rank(); ++k) {
        if (triple_edges(g, i, j, k) < 2) continue;
        Rank3Certificate cert = classify_rank3(q.subquiver({i, j, k}), budget);
        if (cert.verdict == Verdict::Infinite) {
          std::string why = cert.witness ? cert.witness->rule + ": " + cert.witness->detail
                                         : "infinite";
          return Violation{"rank3-subquiver", {i, j, k}, why};
        }
      }
  return std::nullopt;
}

std::optional<Violation> screen(const Quiver& q, const LabelGrid& g, std::size_t rank3_budget) {
  if (auto v = weight_rules(q, g)) return v;
  if (q.rank() > 3) {
    if (auto v = markov_rule(q, g)) return v;
    if (auto v = rank3_rule(q, g, rank3_budget)) return v;
  }
  return std::nullopt;
}

std::optional<Violation> screen(const Quiver& q, std::size_t rank3_budget) {
  return screen(q, label_grid(q), rank3_budget);
}

// ---------------------------------------------------------------------------
// BFS core shared by explore() and the rank-3 classifier.

struct Node {
  Quiver q;
  long parent;  // -1 for the seed
  int from_k;
};

std::vector<int> path_to(const std::vector<Node>& nodes, long idx) {
  std::vector<int> path;
  for (long at = idx; nodes[at].parent >= 0; at = nodes[at].parent)
    path.push_back(nodes[at].from_k);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Infinite: return "infinite";
    default: return "budget-exhausted";
  }
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QMUT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0 && v <= 1024) return (int)v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? (int)hw : 1;
}

TriangleCheck check_triangle_condition(const Quiver& q) {
  if (q.rank() != 3) throw std::invalid_argument("check_triangle_condition: rank must be 3");
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  AngleLabel l[3] = {AngleLabel(1, 2), AngleLabel(1, 2), AngleLabel(1, 2)};
  int arrows = 0;
  for (int e = 0; e < 3; ++e) {
    const CycloReal& w = q.entry(pairs[e][0], pairs[e][1]);
    auto lbl = w.abs().to_label();
    if (!lbl)
      throw std::invalid_argument("check_triangle_condition: non-label weight " + w.str());
    l[e] = *lbl;
    if (!w.is_zero()) ++arrows;
  }
  TriangleCheck r;
  if (arrows < 2) {
    r.pass = true;
    r.applicable = false;
    r.detail = "disconnected";
    return r;
  }
  r.applicable = true;
  long d = lcm_long(l[0].den, lcm_long(l[1].den, l[2].den));
  r.den = d;
  long n[3];
  long maxden = 1;
  for (int e = 0; e < 3; ++e) {
    n[e] = l[e].num * (d / l[e].den);
    maxden = std::max(maxden, l[e].den);
  }
  bool need_equality = maxden > 5;
  std::ostringstream os;
  os << l[0].str() << "," << l[1].str() << "," << l[2].str();
  if (arrows == 3 && triple_oriented(q, 0, 1, 2)) {
    r.cyclic = true;
    bool ok = false;
    for (int t = 0; t < 3 && !ok; ++t) {
      long rest = n[0] + n[1] + n[2] - n[t];
      ok = need_equality ? (rest == n[t]) : (rest >= n[t]);
    }
    r.pass = ok;
    os << " cyclic" << (need_equality ? " (equality required)" : "");
  } else {
    long total = n[0] + n[1] + n[2];
    r.pass = need_equality ? (total == d) : (total >= d);
    os << " acyclic sum " << total << "/" << d << (need_equality ? " (equality required)" : "");
  }
  r.detail = os.str();
  return r;
}

// ---------------------------------------------------------------------------
// Rank-3 classifier.

namespace {

std::mutex g_cert_mutex;
std::unordered_map<std::string, Rank3Certificate> g_cert_cache;

bool known_path_pair(const AngleLabel& a, const AngleLabel& b) {
  auto is = [](const AngleLabel& l, long n, long d) { return l.num == n && l.den == d; };
  // {1/3,1/3} {1/3,1/4} {1/3,1/5} {1/5,2/5} {1/3,2/5}
  if (is(a, 1, 3) && is(b, 1, 3)) return true;
  if (is(a, 1, 4) && is(b, 1, 3)) return true;
  if (is(a, 1, 3) && is(b, 1, 4)) return true;
  if (is(a, 1, 5) && is(b, 1, 3)) return true;
  if (is(a, 1, 3) && is(b, 1, 5)) return true;
  if (is(a, 1, 5) && is(b, 2, 5)) return true;
  if (is(a, 2, 5) && is(b, 1, 5)) return true;
  if (is(a, 2, 5) && is(b, 1, 3)) return true;
  if (is(a, 1, 3) && is(b, 2, 5)) return true;
  return false;
}

// On a match returns (family, normal_form).
std::optional<std::pair<std::string, std::string>> match_rank3_normal_form(const Quiver& q,
                                                                           const LabelGrid& g) {
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<AngleLabel> present;
  for (auto& p : pairs)
    if (!is_absent(g.at(p[0], p[1]))) present.push_back(*g.at(p[0], p[1]));
  if (present.size() < 2) return std::make_pair(std::string("disconnected"), std::string("disconnected"));
  if (present.size() == 2) {
    std::sort(present.begin(), present.end(), [](const AngleLabel& a, const AngleLabel& b) {
      return a.den != b.den ? a.den < b.den : a.num < b.num;
    });
    if (known_path_pair(present[0], present[1]))
      return std::make_pair(std::string("path"),
                            "path{" + present[0].str() + "," + present[1].str() + "}");
    return std::nullopt;
  }
  if (!triple_oriented(q, 0, 1, 2)) return std::nullopt;
  int twos = 0;
  for (auto& l : present) twos += (l.num == 0) ? 1 : 0;
  if (twos == 3) return std::make_pair(std::string("markov"), std::string("markov"));
  if (twos == 1) {
    std::vector<AngleLabel> rest;
    for (auto& l : present)
      if (l.num != 0) rest.push_back(l);
    if (rest[0] == rest[1] && rest[0].num == 1)
      return std::make_pair(std::string("cycle"),
                            "cycle(2," + rest[0].str() + "," + rest[0].str() + ")");
  }
  return std::nullopt;
}

// A weight-2 arrow is only allowed in an oriented triangle (2, y, y).
std::optional<Violation> weight_two_shape(const Quiver& q, const LabelGrid& g) {
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  bool any_two = false;
  for (auto& p : pairs) any_two = any_two || is_weight_two(g.at(p[0], p[1]));
  if (!any_two) return std::nullopt;
  if (triple_edges(g, 0, 1, 2) == 3 && triple_oriented(q, 0, 1, 2)) {
    for (int e = 0; e < 3; ++e) {
      if (!is_weight_two(g.at(pairs[e][0], pairs[e][1]))) continue;
      const CycloReal* others[2];
      int n = 0;
      for (int f = 0; f < 3; ++f)
        if (f != e) others[n++] = &q.entry(pairs[f][0], pairs[f][1]);
      if (others[0]->abs() == others[1]->abs()) return std::nullopt;
    }
  }
  return Violation{"weight-two-shape", {0, 1, 2}, "weight 2 outside an oriented (2,y,y) triangle"};
}

Rank3Certificate classify_from(const Quiver& canon, std::size_t budget) {
  Rank3Certificate cert;
  std::vector<Node> nodes;
  std::unordered_map<std::string, long> visited;
  nodes.push_back({canon, -1, 0});
  visited.emplace(canonical_key(canon), 0);

  auto examine = [&](long idx) -> bool {  // true when the search is decided
    const Quiver& q = nodes[idx].q;
    LabelGrid g = label_grid(q);
    std::optional<Violation> vio = weight_rules(q, g);
    if (!vio) vio = weight_two_shape(q, g);
    if (!vio && triple_edges(g, 0, 1, 2) >= 2) {
      TriangleCheck t = check_triangle_condition(q);  // weights are labels here
      if (!t.pass) vio = Violation{"triangle-cond", {0, 1, 2}, t.detail};
    }
    if (vio) {
      cert.verdict = Verdict::Infinite;
      cert.witness = InfinitenessWitness{path_to(nodes, idx), vio->rule, vio->vertices, vio->detail};
      return true;
    }
    if (auto m = match_rank3_normal_form(q, g)) {
      cert.verdict = Verdict::Finite;
      cert.family = m->first;
      cert.normal_form = m->second;
      return true;
    }
    return false;
  };

  if (examine(0)) return cert;
  for (long at = 0; at < (long)nodes.size(); ++at) {
    for (int k = 0; k < 3; ++k) {
      Quiver child = nodes[at].q.mutated(k);
      std::string key = canonical_key(child);
      if (visited.count(key)) continue;
      if (nodes.size() >= budget) {
        cert.verdict = Verdict::BudgetExhausted;
        return cert;
      }
      long idx = (long)nodes.size();
      visited.emplace(std::move(key), idx);
      nodes.push_back({std::move(child), at, k});
      if (examine(idx)) return cert;
    }
  }
  cert.verdict = Verdict::Finite;
  cert.family = "exhausted";
  cert.normal_form = "exhausted";
  cert.by_exhaustion = true;
  cert.class_size = nodes.size();
  return cert;
}

}  // namespace

Rank3Certificate classify_rank3(const Quiver& q, std::size_t budget) {
  if (q.rank() != 3) throw std::invalid_argument("classify_rank3: rank must be 3");
  const std::string key = canonical_key(q);
  {
    std::lock_guard<std::mutex> lk(g_cert_mutex);
    auto it = g_cert_cache.find(key);
    if (it != g_cert_cache.end()) return it->second;
  }
  Rank3Certificate cert = classify_from(canonical_representative(q), budget);
  std::lock_guard<std::mutex> lk(g_cert_mutex);
  return g_cert_cache.emplace(key, std::move(cert)).first->second;
}

// ---------------------------------------------------------------------------
// explore()

namespace {

struct Cand {
  Quiver q;
  std::string key;
  std::optional<Violation> vio;
};

void fill_candidates(const std::vector<Node>& nodes, const std::vector<long>& frontier,
                     std::size_t lo, std::size_t hi, int rank, std::size_t rank3_budget,
                     std::vector<Cand>& out) {
  for (std::size_t fi = lo; fi < hi; ++fi) {
    const Quiver& base = nodes[frontier[fi]].q;
    for (int k = 0; k < rank; ++k) {
      Cand& c = out[fi * rank + k];
      c.q = base.mutated(k);
      c.vio = screen(c.q, rank3_budget);
      if (!c.vio) c.key = canonical_key(c.q);
    }
  }
}

}  // namespace

ClassReport explore(const Quiver& seed, const ExploreBudget& budget, int threads) {
  threads = std::max(1, threads);
  const int r = seed.rank();
  ClassReport rep;
  rep.seed = seed;

  if (auto vio = screen(seed, budget.max_quivers)) {
    rep.verdict = Verdict::Infinite;
    rep.witness = InfinitenessWitness{{}, vio->rule, vio->vertices, vio->detail};
    rep.highest_denominator = seed.highest_denominator();
    return rep;
  }

  std::vector<Node> nodes;
  std::vector<std::string> node_keys;
  std::unordered_map<std::string, long> visited;
  nodes.push_back({seed, -1, 0});
  node_keys.push_back(canonical_key(seed));
  visited.emplace(node_keys[0], 0);

  std::vector<long> frontier{0};
  std::size_t expanded = 0;
  std::size_t levels = 0;
  std::optional<InfinitenessWitness> witness;
  bool out_of_budget = false;

  while (!frontier.empty() && !witness && !out_of_budget) {
    std::vector<Cand> cands(frontier.size() * r);
    if (threads > 1 && frontier.size() >= 2 * (std::size_t)threads) {
      std::vector<std::thread> pool;
      std::size_t per = (frontier.size() + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        std::size_t lo = std::min(frontier.size(), t * per);
        std::size_t hi = std::min(frontier.size(), lo + per);
        if (lo < hi)
          pool.emplace_back(fill_candidates, std::cref(nodes), std::cref(frontier), lo, hi, r,
                            budget.max_quivers, std::ref(cands));
      }
      for (auto& th : pool) th.join();
    } else {
      fill_candidates(nodes, frontier, 0, frontier.size(), r, budget.max_quivers, cands);
    }

    std::vector<long> next;
    for (std::size_t fi = 0; fi < frontier.size() && !witness && !out_of_budget; ++fi) {
      for (int k = 0; k < r; ++k) {
        Cand& c = cands[fi * r + k];
        if (c.vio) {
          std::vector<int> path = path_to(nodes, frontier[fi]);
          path.push_back(k);
          witness = InfinitenessWitness{std::move(path), c.vio->rule, c.vio->vertices,
                                        c.vio->detail};
          break;
        }
        if (visited.count(c.key)) continue;
        if (nodes.size() >= budget.max_quivers) {
          out_of_budget = true;
          break;
        }
        long idx = (long)nodes.size();
        visited.emplace(c.key, idx);
        nodes.push_back({std::move(c.q), frontier[fi], k});
        node_keys.push_back(std::move(c.key));
        next.push_back(idx);
      }
      if (!witness && !out_of_budget) ++expanded;
    }
    if (!witness && !out_of_budget) ++levels;
    frontier = std::move(next);
  }

  rep.stats.visited = nodes.size();
  rep.stats.expanded = expanded;
  rep.stats.levels = levels;
  rep.size = nodes.size();

  if (witness) {
    rep.verdict = Verdict::Infinite;
    rep.witness = std::move(witness);
    rep.highest_denominator = seed.highest_denominator();
    return rep;
  }
  if (out_of_budget) {
    rep.verdict = Verdict::BudgetExhausted;
    rep.highest_denominator = seed.highest_denominator();
    return rep;
  }

  rep.verdict = Verdict::Finite;
  rep.member_keys = node_keys;
  std::sort(rep.member_keys.begin(), rep.member_keys.end());

  {
    std::unordered_set<std::string> mod_op;
    for (const Node& n : nodes) mod_op.insert(canonical_key(n.q, true));
    rep.size_mod_opposite = mod_op.size();
  }

  std::size_t rep_cap = std::min<std::size_t>(nodes.size(), budget.max_representatives);
  rep.representatives.reserve(rep_cap);
  for (std::size_t i = 0; i < rep_cap; ++i)
    rep.representatives.push_back(canonical_representative(nodes[i].q));

  std::optional<long> hd;
  std::unordered_map<std::string, std::size_t> acyclic_index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (auto h = nodes[i].q.highest_denominator()) hd = std::max(hd.value_or(1L), *h);
    if (nodes[i].q.is_acyclic()) {
      acyclic_index.emplace(node_keys[i], rep.acyclic_members.size());
      rep.acyclic_members.push_back(canonical_representative(nodes[i].q));
      rep.acyclic_member_keys.push_back(node_keys[i]);
    }
  }
  rep.highest_denominator = hd;

  // Sink/source orbits via union-find over the acyclic members.
  std::vector<std::size_t> parent(rep.acyclic_members.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < rep.acyclic_members.size(); ++i) {
    const Quiver& m = rep.acyclic_members[i];
    std::vector<int> ends = m.sources();
    std::vector<int> sinks = m.sinks();
    ends.insert(ends.end(), sinks.begin(), sinks.end());
    for (int v : ends) {
      auto it = acyclic_index.find(canonical_key(m.mutated(v)));
      if (it == acyclic_index.end()) continue;
      std::size_t a = find(i), b = find(it->second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < parent.size(); ++i) groups[find(i)].push_back(i);
  for (auto& [root, members] : groups) rep.acyclic_orbits.push_back(members);

  return rep;
}

std::vector<Quiver> acyclic_orbit_representatives(const ClassReport& report) {
  if (report.verdict != Verdict::Finite)
    throw std::invalid_argument("acyclic_orbit_representatives: report is not finite");
  std::vector<Quiver> out;
  for (const auto& orbit : report.acyclic_orbits)
    out.push_back(report.acyclic_members.at(orbit.at(0)));
  return out;
}

// ---------------------------------------------------------------------------
// extend_classification()

namespace {

long common_ambient(const std::vector<ClassReport>& bases, const std::vector<CycloReal>& alphabet) {
  long amb = 1;
  for (const auto& b : bases) amb = lcm_long(amb, b.seed.ambient());
  for (const auto& a : alphabet) amb = lcm_long(amb, a.ambient());
  return amb;
}

}  // namespace

std::vector<ClassReport> extend_classification(const std::vector<ClassReport>& bases,
                                               const std::vector<CycloReal>& alphabet,
                                               const ExploreBudget& budget, int threads) {
  if (bases.empty()) throw std::invalid_argument("extend_classification: no bases");
  const int r = bases.front().seed.rank();
  for (const auto& b : bases) {
    if (b.verdict != Verdict::Finite)
      throw std::invalid_argument("extend_classification: bases must be finite classes");
    if (b.seed.rank() != r)
      throw std::invalid_argument("extend_classification: bases must share rank");
    if (b.representatives.empty())
      throw std::invalid_argument("extend_classification: base lacks representatives");
  }
  const long amb = common_ambient(bases, alphabet);

  std::vector<CycloReal> A;
  for (const auto& a : alphabet) {
    CycloReal v = a.lifted(amb);
    bool dup = false;
    for (const auto& u : A) dup = dup || (u == v);
    if (!dup) A.push_back(v);
  }
  const std::size_t na = A.size();
  bool has_zero = false;
  for (const auto& v : A) has_zero = has_zero || v.is_zero();
  if (!has_zero) throw std::invalid_argument("extend_classification: alphabet must contain 0");
  for (const auto& v : A) {
    bool neg = false;
    for (const auto& u : A) neg = neg || (u == -v);
    if (!neg) throw std::invalid_argument("extend_classification: alphabet must be negation-closed");
  }

  std::vector<ClassReport> out;
  std::unordered_set<std::string> claimed;

  for (const auto& base : bases) {
    Quiver R = base.representatives.front().lifted(amb);

    // ok[(u,p,iu,ip)]: the rank-3 subquiver on {u, p, new} stays mutation-
    // finite and is not an oriented double-arrow triangle.
    std::vector<uint8_t> ok((std::size_t)r * r * na * na, 1);
    auto slot = [&](int u, int p, std::size_t iu, std::size_t ip) -> std::size_t {
      return (((std::size_t)u * r + p) * na + iu) * na + ip;
    };
    for (int u = 0; u < r; ++u)
      for (int p = u + 1; p < r; ++p)
        for (std::size_t iu = 0; iu < na; ++iu)
          for (std::size_t ip = 0; ip < na; ++ip) {
            Quiver t(3, amb);
            if (!R.entry(u, p).is_zero()) t.set_arrow(0, 1, R.entry(u, p));
            if (!A[iu].is_zero()) t.set_arrow(0, 2, A[iu]);
            if (!A[ip].is_zero()) t.set_arrow(1, 2, A[ip]);
            LabelGrid g = label_grid(t);
            bool bad = false;
            if (is_weight_two(g.at(0, 1)) && is_weight_two(g.at(0, 2)) &&
                is_weight_two(g.at(1, 2)) && triple_oriented(t, 0, 1, 2))
              bad = true;  // would complete a forbidden (2,2,2) triangle
            if (!bad && triple_edges(g, 0, 1, 2) >= 2)
              bad = classify_rank3(t, budget.max_quivers).verdict == Verdict::Infinite;
            ok[slot(u, p, iu, ip)] = bad ? 0 : 1;
          }

    // Depth-first sweep over the alphabet rows with pairwise pruning.
    std::vector<std::size_t> row(r, 0);
    std::function<void(int)> sweep = [&](int p) {
      if (p == r) {
        bool all_zero = true;
        for (std::size_t iv : row) all_zero = all_zero && A[iv].is_zero();
        if (all_zero) return;
        Quiver c(r + 1, amb);
        for (int i = 0; i < r; ++i)
          for (int j = i + 1; j < r; ++j)
            if (!R.entry(i, j).is_zero()) c.set_arrow(i, j, R.entry(i, j));
        for (int i = 0; i < r; ++i)
          if (!A[row[i]].is_zero()) c.set_arrow(i, r, A[row[i]]);
        if (screen(c, budget.max_quivers)) return;
        std::string key = canonical_key(c);
        if (!claimed.insert(key).second) return;
        ClassReport found = explore(c, budget, threads);
        if (found.verdict == Verdict::BudgetExhausted)
          throw std::runtime_error("extend_classification: budget exhausted at " + c.str());
        if (found.verdict == Verdict::Finite) {
          for (const auto& mk : found.member_keys) claimed.insert(mk);
          out.push_back(std::move(found));
        }
        return;
      }
      for (std::size_t iv = 0; iv < na; ++iv) {
        bool good = true;
        for (int u = 0; u < p && good; ++u) good = ok[slot(u, p, row[u], iv)] != 0;
        if (!good) continue;
        row[p] = iv;
        sweep(p + 1);
      }
    };
    sweep(0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// find_mutation_path()

namespace {

struct Side {
  std::vector<Node> nodes;
  std::unordered_map<std::string, long> visited;
  std::vector<long> frontier;
  std::size_t depth = 0;
};

void side_init(Side& s, const Quiver& q) {
  s.nodes.push_back({q, -1, 0});
  s.visited.emplace(canonical_key(q), 0);
  s.frontier.push_back(0);
}

}  // namespace

std::optional<std::vector<int>> find_mutation_path(const Quiver& from, const Quiver& to,
                                                   std::size_t max_depth,
                                                   const ExploreBudget& budget) {
  if (from.rank() != to.rank())
    throw std::invalid_argument("find_mutation_path: ranks differ");
  const long amb = lcm_long(from.ambient(), to.ambient());
  const int r = from.rank();
  Side a, b;
  side_init(a, from.lifted(amb));
  side_init(b, to.lifted(amb));

  auto make_path = [&](long ia, long ib) {
    std::vector<int> pa = path_to(a.nodes, ia);
    std::vector<int> pb = path_to(b.nodes, ib);
    std::vector<int> phi = isomorphism_map(a.nodes[ia].q, b.nodes[ib].q);
    std::vector<int> phi_inv(r);
    for (int u = 0; u < r; ++u) phi_inv[phi[u]] = u;
    for (auto it = pb.rbegin(); it != pb.rend(); ++it) pa.push_back(phi_inv[*it]);
    return pa;
  };

  {  // seeds may already agree
    auto it = b.visited.find(canonical_key(a.nodes[0].q));
    if (it != b.visited.end()) return make_path(0, it->second);
  }

  while (a.depth + b.depth < max_depth) {
    if (a.frontier.empty() && b.frontier.empty()) return std::nullopt;
    Side& x = (b.frontier.empty() ||
               (!a.frontier.empty() && a.nodes.size() <= b.nodes.size()))
                  ? a
                  : b;
    Side& y = (&x == &a) ? b : a;
    std::vector<long> next;
    for (long fi : x.frontier) {
      for (int k = 0; k < r; ++k) {
        Quiver child = x.nodes[fi].q.mutated(k);
        std::string key = canonical_key(child);
        if (x.visited.count(key)) continue;
        if (x.nodes.size() + y.nodes.size() >= budget.max_quivers) return std::nullopt;
        long idx = (long)x.nodes.size();
        x.visited.emplace(key, idx);
        x.nodes.push_back({std::move(child), fi, k});
        next.push_back(idx);
        auto hit = y.visited.find(key);
        if (hit != y.visited.end()) {
          if (&x == &a) return make_path(idx, hit->second);
          return make_path(hit->second, idx);
        }
      }
    }
    x.frontier = std::move(next);
    ++x.depth;
  }
  return std::nullopt;
}

}  // namespace qmut

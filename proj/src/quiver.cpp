#include "qmut/quiver.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qmut {

Quiver::Quiver(int rank, long ambient) : rank_(rank), ambient_(ambient) {
  if (rank < 1) throw std::invalid_argument("quiver: rank < 1");
  if (rank > 16) throw std::invalid_argument("quiver: rank > 16");
  m_.assign((size_t)rank * rank, CycloReal::zero(ambient));
}

Quiver Quiver::from_labeled_arrows(
    int rank, long ambient,
    const std::vector<std::tuple<int, int, AngleLabel>>& arrows) {
  Quiver q(rank, ambient);
  std::vector<char> seen((size_t)rank * rank, 0);
  for (const auto& [from, to, lbl] : arrows) {
    if (from == to) throw std::invalid_argument("arrow: loop");
    if (2 * lbl.num >= lbl.den)
      throw std::invalid_argument("arrow: label " + lbl.str() +
                                  " is not a positive weight");
    char& s = seen[(size_t)std::min(from, to) * rank + std::max(from, to)];
    if (s) throw std::invalid_argument("arrow: duplicate pair");
    s = 1;
    q.set_arrow(from, to, CycloReal::from_label(lbl, ambient));
  }
  return q;
}

void Quiver::set_arrow(int i, int j, const CycloReal& w) {
  if (i < 0 || j < 0 || i >= rank_ || j >= rank_)
    throw std::out_of_range("set_arrow: vertex out of range");
  CycloReal v = w.ambient() == ambient_ ? w : w.lifted(ambient_);
  if (i == j) {
    if (!v.is_zero()) throw std::invalid_argument("set_arrow: loop");
    return;
  }
  m_[(size_t)i * rank_ + j] = v;
  m_[(size_t)j * rank_ + i] = -v;
}

Quiver Quiver::mutated(int k) const {
  if (k < 0 || k >= rank_) throw std::out_of_range("mutated: vertex");
  Quiver r = *this;
  std::vector<int> s(rank_);
  for (int i = 0; i < rank_; ++i)
    s[i] = (i == k) ? 0 : arrow_sign(i, k);
  for (int i = 0; i < rank_; ++i) {
    if (i == k || s[i] == 0) continue;
    for (int j = i + 1; j < rank_; ++j) {
      if (j == k || s[j] == 0) continue;
      // b_ik and b_kj = -b_jk share a sign exactly when s[i] == -s[j]
      if (s[i] != -s[j]) continue;
      CycloReal add = entry(i, k) * entry(k, j);
      if (s[i] < 0) add = -add;
      r.set_arrow(i, j, entry(i, j) + add);
    }
  }
  for (int i = 0; i < rank_; ++i)
    if (i != k) r.set_arrow(i, k, -entry(i, k));
  return r;
}

Quiver Quiver::opposite() const {
  Quiver r = *this;
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j) r.set_arrow(i, j, entry(j, i));
  return r;
}

Quiver Quiver::lifted(long ambient) const {
  if (ambient == ambient_) return *this;
  Quiver r(rank_, ambient);
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j)
      if (!entry(i, j).is_zero()) r.set_arrow(i, j, entry(i, j).lifted(ambient));
  return r;
}

Quiver Quiver::subquiver(const std::vector<int>& vertices) const {
  Quiver r((int)vertices.size(), ambient_);
  for (size_t p = 0; p < vertices.size(); ++p)
    for (size_t q = p + 1; q < vertices.size(); ++q)
      r.set_arrow((int)p, (int)q, entry(vertices[p], vertices[q]));
  return r;
}

Quiver Quiver::permuted(const std::vector<int>& placement) const {
  if ((int)placement.size() != rank_)
    throw std::invalid_argument("permuted: size mismatch");
  return subquiver(placement);
}

bool Quiver::operator==(const Quiver& o) const {
  if (rank_ != o.rank_ || ambient_ != o.ambient_) return false;
  for (size_t i = 0; i < m_.size(); ++i)
    if (m_[i] != o.m_[i]) return false;
  return true;
}

int Quiver::arrow_sign(int i, int j) const {
  const CycloReal& v = entry(i, j);
  return v.is_zero() ? 0 : v.sign();
}

std::vector<Arrow> Quiver::arrows() const {
  std::vector<Arrow> out;
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j) {
      int s = arrow_sign(i, j);
      if (s > 0) out.push_back({i, j, entry(i, j)});
      else if (s < 0) out.push_back({j, i, entry(j, i)});
    }
  return out;
}

bool Quiver::is_connected() const {
  std::vector<char> vis(rank_, 0);
  std::vector<int> stack = {0};
  vis[0] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < rank_; ++v)
      if (!vis[v] && !entry(u, v).is_zero()) {
        vis[v] = 1;
        stack.push_back(v);
      }
  }
  return std::all_of(vis.begin(), vis.end(), [](char c) { return c != 0; });
}

bool Quiver::is_acyclic() const {
  std::vector<int> color(rank_, 0);  // 0 new, 1 active, 2 done
  auto dfs = [&](auto&& self, int u) -> bool {
    color[u] = 1;
    for (int v = 0; v < rank_; ++v)
      if (arrow_sign(u, v) > 0) {
        if (color[v] == 1) return false;
        if (color[v] == 0 && !self(self, v)) return false;
      }
    color[u] = 2;
    return true;
  };
  for (int u = 0; u < rank_; ++u)
    if (color[u] == 0 && !dfs(dfs, u)) return false;
  return true;
}

std::vector<int> Quiver::sinks() const {
  std::vector<int> out;
  for (int i = 0; i < rank_; ++i) {
    bool sink = true;
    for (int j = 0; j < rank_ && sink; ++j)
      if (arrow_sign(i, j) > 0) sink = false;
    if (sink) out.push_back(i);
  }
  return out;
}

std::vector<int> Quiver::sources() const {
  std::vector<int> out;
  for (int i = 0; i < rank_; ++i) {
    bool source = true;
    for (int j = 0; j < rank_ && source; ++j)
      if (arrow_sign(j, i) > 0) source = false;
    if (source) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<int>> Quiver::chordless_cycles() const {
  std::vector<std::vector<int>> out;
  int n = rank_;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) < 3) continue;
    std::vector<int> verts;
    for (int v = 0; v < n; ++v)
      if (mask & (1u << v)) verts.push_back(v);
    bool deg2 = true;
    for (int u : verts) {
      int deg = 0;
      for (int v : verts)
        if (v != u && !entry(u, v).is_zero()) ++deg;
      if (deg != 2) {
        deg2 = false;
        break;
      }
    }
    if (!deg2) continue;
    // all degrees 2: a disjoint union of cycles; connected means one cycle
    std::vector<int> order = {verts[0]};
    int prev = -1, cur = verts[0];
    while (true) {
      int next = -1;
      for (int v : verts)
        if (v != cur && v != prev && !entry(cur, v).is_zero()) {
          next = v;
          break;
        }
      if (next == -1 || next == verts[0]) break;
      order.push_back(next);
      prev = cur;
      cur = next;
    }
    if (order.size() == verts.size()) out.push_back(std::move(order));
  }
  return out;
}

bool Quiver::cycle_is_oriented(const std::vector<int>& cycle) const {
  int forward = 0, backward = 0;
  int len = (int)cycle.size();
  for (int t = 0; t < len; ++t) {
    int s = arrow_sign(cycle[t], cycle[(t + 1) % len]);
    if (s > 0) ++forward;
    else if (s < 0) ++backward;
    else throw std::invalid_argument("cycle_is_oriented: missing edge");
  }
  return forward == 0 || backward == 0;
}

std::optional<std::vector<AngleLabel>> Quiver::weight_labels() const {
  std::vector<AngleLabel> out;
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j) {
      if (entry(i, j).is_zero()) continue;
      auto l = entry(i, j).abs().to_label();
      if (!l) return std::nullopt;
      out.push_back(*l);
    }
  return out;
}

std::optional<long> Quiver::highest_denominator() const {
  auto labels = weight_labels();
  if (!labels) return std::nullopt;
  long best = 1;
  for (const auto& l : *labels) best = std::max(best, l.den);
  return best;
}

void Quiver::warm() const {
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j)
      if (i != j) arrow_sign(i, j);
}

std::string Quiver::str() const {
  std::ostringstream os;
  os << "rank " << rank_ << ", ambient " << ambient_ << ":";
  for (const auto& a : arrows()) {
    auto l = a.weight.to_label();
    os << ' ' << (a.from + 1) << "->" << (a.to + 1) << '(';
    if (l) os << l->str();
    else os << a.weight.approx();
    os << ')';
  }
  return os.str();
}

namespace {

// Integer relabeling of entries: distinct entry values (as canonical
// strings, sorted) get ids 0..m-1; M[i][j] = id of b_ij.
struct IdMatrix {
  int n = 0;
  std::vector<int> M;
  std::vector<std::string> vals;
};

IdMatrix build_id_matrix(const Quiver& q) {
  IdMatrix im;
  int n = im.n = q.rank();
  std::map<std::string, int> idx;
  std::vector<std::string> strs((size_t)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        strs[(size_t)i * n + j] = q.entry(i, j).str();
        idx[strs[(size_t)i * n + j]] = 0;
      }
  int next = 0;
  for (auto& [s, id] : idx) {
    id = next++;
    im.vals.push_back(s);
  }
  im.M.assign((size_t)n * n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) im.M[(size_t)i * n + j] = idx[strs[(size_t)i * n + j]];
  return im;
}

// Lexicographically minimal column-major upper-triangle sequence over all
// placements, with prefix pruning against a monotonically tightening bound.
struct CanonSearch {
  int n;
  const std::vector<int>& M;   // id matrix, possibly transposed
  std::vector<int>& best;      // length n(n-1)/2
  std::vector<std::vector<int>>* placements;  // nullopt when only the key is wanted
  std::vector<int> cur;
  std::vector<char> used;

  void run() {
    cur.clear();
    used.assign(n, 0);
    rec(0, 0);
  }

  void rec(int level, int seqpos) {
    if (level == n) {
      if (placements) placements->push_back(cur);
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      int cmp = 0;
      for (int p = 0; p < level; ++p) {
        int x = M[(size_t)cur[p] * n + v];
        if (x != best[seqpos + p]) {
          cmp = x < best[seqpos + p] ? -1 : 1;
          break;
        }
      }
      if (cmp > 0) continue;
      if (cmp < 0) {
        for (int p = 0; p < level; ++p)
          best[seqpos + p] = M[(size_t)cur[p] * n + v];
        for (size_t t = seqpos + level; t < best.size(); ++t) best[t] = INT_MAX;
        if (placements) placements->clear();
      }
      used[v] = 1;
      cur.push_back(v);
      rec(level + 1, seqpos + level);
      cur.pop_back();
      used[v] = 0;
    }
  }
};

std::string make_key(const Quiver& q, const IdMatrix& im,
                     const std::vector<int>& seq) {
  std::ostringstream os;
  os << 'r' << q.rank() << ";N" << q.ambient() << ";V[";
  for (size_t i = 0; i < im.vals.size(); ++i) {
    if (i) os << '|';
    os << im.vals[i];
  }
  os << "];S[";
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) os << ',';
    os << seq[i];
  }
  os << ']';
  return os.str();
}

}  // namespace

std::string canonical_key(const Quiver& q, bool mod_opposite) {
  IdMatrix im = build_id_matrix(q);
  int n = im.n;
  std::vector<int> best((size_t)n * (n - 1) / 2, INT_MAX);
  CanonSearch s{n, im.M, best, nullptr, {}, {}};
  s.run();
  if (mod_opposite) {
    // The entry value set is closed under negation, so the transpose reuses
    // the same id assignment.
    std::vector<int> Mt((size_t)n * n, -1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) Mt[(size_t)i * n + j] = im.M[(size_t)j * n + i];
    CanonSearch s2{n, Mt, best, nullptr, {}, {}};
    s2.run();
  }
  return make_key(q, im, best);
}

CanonicalPerms canonical_key_with_perms(const Quiver& q) {
  IdMatrix im = build_id_matrix(q);
  int n = im.n;
  std::vector<int> best((size_t)n * (n - 1) / 2, INT_MAX);
  CanonicalPerms out;
  CanonSearch s{n, im.M, best, &out.placements, {}, {}};
  s.run();
  out.key = make_key(q, im, best);
  return out;
}

Quiver canonical_representative(const Quiver& q) {
  auto cp = canonical_key_with_perms(q);
  return q.permuted(cp.placements.front());
}

std::vector<int> isomorphism_map(const Quiver& a, const Quiver& b) {
  auto ca = canonical_key_with_perms(a);
  auto cb = canonical_key_with_perms(b);
  if (ca.key != cb.key)
    throw std::invalid_argument("isomorphism_map: different classes");
  const auto& sa = ca.placements.front();
  const auto& sb = cb.placements.front();
  std::vector<int> phi(a.rank());
  for (int p = 0; p < a.rank(); ++p) phi[sa[p]] = sb[p];
  return phi;
}

}  // namespace qmut

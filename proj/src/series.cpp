#include "qmut/series.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qmut {

namespace {

// Edge slots of the standard form, as {lower vertex, higher vertex}.
constexpr int kSlotV[6][2] = {{0, 2}, {0, 3}, {1, 3}, {1, 2}, {2, 3}, {0, 1}};
const char* kSlotName[6] = {"s", "q", "m", "k", "s+q", "m+q"};

// Orientation mask found by orientation_pattern_survivors() and frozen here;
// the regression test re-derives it. Bit set = arrow from higher vertex to
// lower, so the q and k arrows run 3->0 and 2->1.
constexpr int kOrientationMask = 0b001010;

long slot_label(const SeriesTuple& t, int slot) {
  switch (slot) {
    case 0: return t.s;
    case 1: return t.q;
    case 2: return t.m;
    case 3: return t.k;
    case 4: return t.s + t.q;
    default: return t.m + t.q;
  }
}

Quiver realize_with_mask(const SeriesTuple& t, int mask) {
  long d = t.denominator();
  Quiver q(4, d);
  for (int slot = 0; slot < 6; ++slot) {
    long lab = slot_label(t, slot);
    if (2 * lab == d) continue;  // vanished arrow
    int a = kSlotV[slot][0], b = kSlotV[slot][1];
    if (mask >> slot & 1) std::swap(a, b);
    q.set_arrow(a, b, CycloReal::from_label(AngleLabel(lab, d), d));
  }
  return q;
}

SeriesTuple sigma(SeriesTuple t) {
  std::swap(t.m, t.s);
  return t;
}

SeriesTuple with(SeriesTuple t, long k, long q, long m, long s) {
  t.k = k, t.q = q, t.m = m, t.s = s;
  return t;
}

// Both parameter mutations pick the first rewriting whose image satisfies the
// family conditions; exactly one candidate ever applies except on a few
// boundary tuples where the leading valid one agrees with the matrix mutation.
SeriesTuple mu1(const SeriesTuple& t) {
  const SeriesTuple cands[] = {
      with(t, t.k, t.q, t.m + t.q, t.s - t.q),
      with(t, t.m + t.q, t.s - t.q, t.q, t.k),
  };
  for (const SeriesTuple& c : cands)
    if (c.valid()) return c;
  throw std::logic_error("parameter mutation escaped the family: " + t.str());
}

SeriesTuple mu2(const SeriesTuple& t) {
  const SeriesTuple cands[] = {
      with(t, t.s, t.m, t.k - t.m, t.m + t.q),
      with(t, t.m + t.q, t.k - t.m, t.s, t.m),
      with(t, t.m, t.s, t.m + t.q, t.s + t.q),
      with(t, t.m + t.q, t.s - t.q, t.k, t.q),
      with(t, t.k, t.q, t.s, t.m),
  };
  for (const SeriesTuple& c : cands)
    if (c.valid()) return c;
  throw std::logic_error("parameter mutation escaped the family: " + t.str());
}

bool triangle_oriented(const Quiver& q, int a, int b, int c) {
  int v[3] = {a, b, c};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (q.entry(v[i], v[j]).is_zero()) return false;
  // oriented iff every vertex has out-degree 1 inside the triangle
  for (int i = 0; i < 3; ++i) {
    int out = 0;
    for (int j = 0; j < 3; ++j)
      if (j != i && q.arrow_sign(v[i], v[j]) > 0) ++out;
    if (out != 1) return false;
  }
  return true;
}

// A weight-2 arrow in a mutation-finite quiver only occurs inside oriented
// triangles; the family bases must respect that.
bool base_shape_ok(int mask) {
  for (SeriesFamily f : {SeriesFamily::Odd, SeriesFamily::EvenA, SeriesFamily::EvenB}) {
    Quiver q = realize_with_mask(series_base(f, 3), mask);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        if (q.entry(i, j).is_zero()) continue;
        auto l = q.entry(i, j).abs().to_label();
        if (!l || l->num != 0) continue;
        for (int o = 0; o < 4; ++o) {
          if (o == i || o == j) continue;
          if (q.entry(i, o).is_zero() || q.entry(j, o).is_zero()) continue;
          if (!triangle_oriented(q, i, j, o)) return false;
        }
      }
  }
  return true;
}

bool closure_holds(int mask, SeriesFamily f, long n) {
  for (const SeriesTuple& t : valid_tuples(f, n)) {
    Quiver base = realize_with_mask(t, mask);
    for (int v = 0; v < 4; ++v) {
      SeriesTuple u = param_mutation(t, v);
      if (!u.valid()) return false;
      if (canonical_key(base.mutated(v)) != canonical_key(realize_with_mask(u, mask)))
        return false;
    }
  }
  return true;
}

}  // namespace

const char* family_name(SeriesFamily f) {
  switch (f) {
    case SeriesFamily::Odd: return "odd";
    case SeriesFamily::EvenA: return "even_a";
    default: return "even_b";
  }
}

long SeriesTuple::denominator() const {
  return family == SeriesFamily::Odd ? 2 * n + 1 : 2 * n;
}

bool SeriesTuple::valid() const {
  if (n < 2) return false;
  for (long v : {k, q, m, s})
    if (v < 0 || v > n) return false;
  long kq = k + q;
  switch (family) {
    case SeriesFamily::Odd:
      if (kq != n && kq != n + 1) return false;
      if (!(2 * k > n && 2 * q <= n)) return false;
      if (s + m + kq != 2 * n + 1) return false;
      break;
    case SeriesFamily::EvenA:
      if (kq != n - 1 && kq != n + 1) return false;
      if (!(k >= n / 2 && q <= n / 2)) return false;
      if (s + m + kq != 2 * n) return false;
      break;
    case SeriesFamily::EvenB:
      if (kq != n) return false;
      if (!(k >= n / 2 && q <= n / 2)) return false;
      if (s + m + kq != 2 * n) return false;
      break;
  }
  return q <= s && s <= n - q && q <= m && m <= n - q && s > 0 && m > 0;
}

bool SeriesTuple::primitive() const {
  return std::gcd(std::gcd(k, q), std::gcd(m, s)) == 1;
}

SeriesTuple SeriesTuple::reduced() const {
  long g = std::gcd(std::gcd(k, q), std::gcd(m, s));
  if (g <= 1) return *this;
  // g always divides the denominator: it divides k+q and s+m, whose sum is d.
  long d = denominator() / g;
  SeriesTuple r;
  r.k = k / g, r.q = q / g, r.m = m / g, r.s = s / g;
  if (d % 2) {
    r.family = SeriesFamily::Odd;
    r.n = (d - 1) / 2;
  } else {
    r.n = d / 2;
    r.family = r.k + r.q == r.n ? SeriesFamily::EvenB : SeriesFamily::EvenA;
  }
  return r;
}

std::string SeriesTuple::str() const {
  std::ostringstream os;
  os << family_name(family) << " n=" << n << " (k=" << k << ",q=" << q << ",m=" << m
     << ",s=" << s << ")";
  return os.str();
}

SeriesTuple series_base(SeriesFamily f, long n) {
  SeriesTuple t;
  t.family = f;
  t.n = n;
  t.q = 0;
  t.s = 1;
  t.k = f == SeriesFamily::EvenA ? n - 1 : n;
  t.m = f == SeriesFamily::EvenB ? n - 1 : n;
  if (!t.valid()) throw std::invalid_argument("series base: invalid for n=" + std::to_string(n));
  return t;
}

SeriesTuple series_seed(SeriesFamily f, long n) {
  for (const SeriesTuple& t : valid_tuples(f, n))
    if (t.primitive()) return t;
  throw std::invalid_argument("series seed: no primitive tuples");
}

std::vector<SeriesTuple> valid_tuples(SeriesFamily f, long n) {
  std::vector<SeriesTuple> out;
  SeriesTuple t;
  t.family = f;
  t.n = n;
  for (t.k = 0; t.k <= n; ++t.k)
    for (t.q = 0; t.q <= n; ++t.q)
      for (t.m = 0; t.m <= n; ++t.m) {
        long total = f == SeriesFamily::Odd ? 2 * n + 1 : 2 * n;
        t.s = total - t.k - t.q - t.m;
        if (t.s < 0 || t.s > n) continue;
        if (t.valid()) out.push_back(t);
      }
  std::sort(out.begin(), out.end(), [](const SeriesTuple& a, const SeriesTuple& b) {
    return std::tie(a.k, a.q, a.m, a.s) < std::tie(b.k, b.q, b.m, b.s);
  });
  return out;
}

Quiver realize_standard_form(const SeriesTuple& t) {
  if (!t.valid()) throw std::invalid_argument("standard form: conditions violated: " + t.str());
  return realize_with_mask(t, orientation_pattern());
}

SeriesTuple param_mutation(const SeriesTuple& t, int vertex) {
  if (!t.valid()) throw std::invalid_argument("param mutation: conditions violated: " + t.str());
  // Vertices 2 and 3 are the images of 1 and 0 under the opposite-quiver
  // symmetry, which acts on vertices by the permutation (0 3)(1 2) and on
  // parameters by swapping m and s.
  switch (vertex) {
    case 0: return mu1(t);
    case 1: return mu2(t);
    case 2: return sigma(mu2(sigma(t)));
    case 3: return sigma(mu1(sigma(t)));
    default: throw std::invalid_argument("param mutation: vertex out of range");
  }
}

std::vector<SeriesTuple> extract_standard_forms(const Quiver& q, SeriesFamily f, long n) {
  std::vector<SeriesTuple> out;
  if (q.rank() != 4) return out;
  SeriesTuple probe;
  probe.family = f;
  probe.n = n;
  long d = probe.denominator();
  int mask = orientation_pattern();
  int perm[4] = {0, 1, 2, 3};
  std::sort(perm, perm + 4);
  do {
    long lab[6];
    bool fits = true;
    for (int slot = 0; slot < 6 && fits; ++slot) {
      int a = kSlotV[slot][0], b = kSlotV[slot][1];
      if (mask >> slot & 1) std::swap(a, b);
      const CycloReal& w = q.entry(perm[a], perm[b]);
      if (w.is_zero()) {
        if (d % 2 != 0) fits = false;
        lab[slot] = d / 2;
        continue;
      }
      if (w.sign() < 0) {  // arrow against the pattern
        fits = false;
        continue;
      }
      auto l = w.to_label();
      if (!l || d % l->den != 0) {
        fits = false;
        continue;
      }
      lab[slot] = l->num * (d / l->den);
    }
    if (!fits) continue;
    SeriesTuple t = probe;
    t.s = lab[0], t.q = lab[1], t.m = lab[2], t.k = lab[3];
    if (lab[4] != t.s + t.q || lab[5] != t.m + t.q) continue;
    if (!t.valid()) continue;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  } while (std::next_permutation(perm, perm + 4));
  return out;
}

bool same_series_class(const SeriesTuple& a, const SeriesTuple& b) {
  if (!a.valid() || !b.valid()) throw std::invalid_argument("same class: invalid tuple");
  SeriesTuple ra = a.reduced(), rb = b.reduced();
  return ra.family == rb.family && ra.denominator() == rb.denominator();
}

bool SeriesClosureReport::ok() const {
  if (!param_closed) return false;
  if (matrix_checked && !matrix_agrees) return false;
  if (size_checked && (class_size == 0 || class_size != distinct_forms)) return false;
  return true;
}

SeriesClosureReport verify_closure(SeriesFamily f, long n, bool with_matrix, bool with_size,
                                   int threads) {
  SeriesClosureReport r;
  r.family = f;
  r.n = n;
  auto tuples = valid_tuples(f, n);
  r.tuple_count = tuples.size();
  for (const SeriesTuple& t : tuples) r.primitive_count += t.primitive();
  r.param_closed = true;
  for (const SeriesTuple& t : tuples) {
    for (int v = 0; v < 4 && r.param_closed; ++v) {
      SeriesTuple u = param_mutation(t, v);
      if (!u.valid() || u.primitive() != t.primitive()) {
        r.param_closed = false;
        r.detail = "bad image: " + t.str() + " at vertex " + std::to_string(v) + " -> " + u.str();
      }
    }
    if (!r.param_closed) break;
  }
  if (with_matrix && r.param_closed) {
    r.matrix_checked = true;
    r.matrix_agrees = true;
    for (const SeriesTuple& t : tuples) {
      Quiver base = realize_standard_form(t);
      for (int v = 0; v < 4 && r.matrix_agrees; ++v) {
        Quiver expect = realize_standard_form(param_mutation(t, v));
        if (canonical_key(base.mutated(v)) != canonical_key(expect)) {
          r.matrix_agrees = false;
          r.detail = "matrix mismatch: " + t.str() + " at vertex " + std::to_string(v);
        }
      }
      if (!r.matrix_agrees) break;
    }
  }
  if (with_size && r.param_closed) {
    r.size_checked = true;
    std::set<std::string> forms;
    for (const SeriesTuple& t : tuples)
      if (t.primitive()) forms.insert(canonical_key(realize_standard_form(t)));
    r.distinct_forms = forms.size();
    ClassReport rep = explore(realize_standard_form(series_seed(f, n)), {}, threads);
    if (rep.verdict != Verdict::Finite) {
      r.class_size = 0;
      r.detail = "exploration verdict: " + std::string(verdict_name(rep.verdict));
    } else {
      r.class_size = rep.size;
      if (r.class_size != r.distinct_forms)
        r.detail = "class size " + std::to_string(r.class_size) + " != standard forms " +
                   std::to_string(r.distinct_forms);
    }
  }
  return r;
}

std::vector<VanishingEntry> vanishing_arrow_catalogue(SeriesFamily f, long n) {
  if (f == SeriesFamily::Odd)
    throw std::invalid_argument("vanishing arrows: odd denominators have none");
  std::vector<VanishingEntry> out;
  // report slots in the reading order k, q, m, s, m+q, s+q
  const int order[6] = {3, 1, 2, 0, 5, 4};
  for (const SeriesTuple& t : valid_tuples(f, n)) {
    VanishingEntry e;
    e.tuple = t;
    for (int slot : order)
      if (slot_label(t, slot) == n) e.vanished.push_back(kSlotName[slot]);
    if (e.vanished.empty()) continue;
    for (size_t i = 0; i < e.vanished.size(); ++i)
      e.pattern += (i ? "," : "") + e.vanished[i];
    // structural case analysis, enforced
    bool has_q = std::find(e.vanished.begin(), e.vanished.end(), "q") != e.vanished.end();
    bool has_k = std::find(e.vanished.begin(), e.vanished.end(), "k") != e.vanished.end();
    if (has_q) throw std::logic_error("vanishing q arrow: " + t.str());
    if (has_k && e.vanished.size() != 1)
      throw std::logic_error("k=n with a second vanishing arrow: " + t.str());
    static const std::set<std::string> allowed_a = {"k", "m,m+q", "s,s+q",
                                                    "m+q", "s+q", "m+q,s+q"};
    static const std::set<std::string> allowed_b = {"k", "m+q", "s+q", "m+q,s+q"};
    const auto& allowed = f == SeriesFamily::EvenA ? allowed_a : allowed_b;
    if (!allowed.count(e.pattern))
      throw std::logic_error("unexpected vanishing pattern " + e.pattern + ": " + t.str());
    out.push_back(std::move(e));
  }
  return out;
}

int orientation_pattern() { return kOrientationMask; }

std::vector<int> orientation_pattern_survivors() {
  std::vector<int> out;
  for (int mask = 0; mask < 64; ++mask) {
    if (!base_shape_ok(mask)) continue;
    bool ok = true;
    for (SeriesFamily f : {SeriesFamily::Odd, SeriesFamily::EvenA, SeriesFamily::EvenB})
      for (long n = 2; n <= 3 && ok; ++n) ok = closure_holds(mask, f, n);
    if (ok) out.push_back(mask);
  }
  return out;
}

}  // namespace qmut

// Subcommand front end: loads quiver documents, drives the library, prints
// reports.  Also home of the verification tables the acceptance binary
// replays.

#include "qmut/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmut/quiver_io.hpp"
#include "qmut/realization.hpp"
#include "qmut/series.hpp"

namespace qmut {
namespace {

using nlohmann::ordered_json;

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  ss << in.rdbuf();
  return ss.str();
}

bool write_output(const std::string& path, const std::string& text, std::ostream& out,
                  std::ostream& err) {
  if (path.empty() || path == "-") {
    out << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string weight_cell(const CycloReal& w) {
  if (std::optional<AngleLabel> l = w.to_label())
    return std::to_string(l->num) + "/" + std::to_string(l->den);
  return w.str();
}

void print_arrow_table(const Quiver& q, std::ostream& os) {
  std::vector<Arrow> as = q.arrows();
  std::sort(as.begin(), as.end(), [](const Arrow& a, const Arrow& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  if (as.empty()) {
    os << "  (no arrows)\n";
    return;
  }
  os << "  arrow        label   weight\n";
  for (const Arrow& a : as) {
    char head[32], val[32];
    std::snprintf(head, sizeof head, "%d -> %d", a.from + 1, a.to + 1);
    std::snprintf(val, sizeof val, "%.6g", a.weight.approx());
    os << "  " << pad(head, 11) << "  " << pad(weight_cell(a.weight), 6) << "  " << val << "\n";
  }
}

std::string join_1based(const std::vector<int>& v) {
  if (v.empty()) return "(empty)";
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i] + 1);
  }
  return s;
}

ordered_json witness_json(const InfinitenessWitness& w) {
  ordered_json j;
  ordered_json path = ordered_json::array();
  for (int v : w.path_from_seed) path.push_back(v + 1);
  ordered_json verts = ordered_json::array();
  for (int v : w.vertices) verts.push_back(v + 1);
  j["path_from_seed"] = path;
  j["rule"] = w.rule;
  j["vertices"] = verts;
  j["detail"] = w.detail;
  return j;
}

std::string explore_json(const ClassReport& r, bool mod_opposite) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["verdict"] = verdict_name(r.verdict);
  j["counting"] = mod_opposite ? "mod-opposite" : "plain";
  if (r.verdict == Verdict::Finite) {
    j["size"] = mod_opposite ? r.size_mod_opposite : r.size;
    j["size_plain"] = r.size;
    j["size_mod_opposite"] = r.size_mod_opposite;
    j["acyclic_members"] = r.acyclic_members.size();
    j["acyclic_orbits"] = r.acyclic_orbits.size();
  }
  if (r.highest_denominator.has_value())
    j["highest_denominator"] = *r.highest_denominator;
  else
    j["highest_denominator"] = nullptr;
  ordered_json st;
  st["visited"] = r.stats.visited;
  st["expanded"] = r.stats.expanded;
  st["levels"] = r.stats.levels;
  j["stats"] = st;
  if (r.witness) j["witness"] = witness_json(*r.witness);
  return j.dump(2) + "\n";
}

std::string explore_text(const ClassReport& r, bool mod_opposite) {
  std::ostringstream os;
  os << "verdict: " << verdict_name(r.verdict) << "\n";
  if (r.verdict == Verdict::Finite) {
    if (mod_opposite)
      os << "size (mod opposite): " << r.size_mod_opposite << "\nsize (plain): " << r.size
         << "\n";
    else
      os << "size: " << r.size << "\nsize mod opposite: " << r.size_mod_opposite << "\n";
    os << "acyclic members: " << r.acyclic_members.size() << " in " << r.acyclic_orbits.size()
       << " sink/source orbits\n";
  }
  if (r.highest_denominator) os << "highest denominator: " << *r.highest_denominator << "\n";
  os << "visited " << r.stats.visited << ", expanded " << r.stats.expanded << ", depth "
     << r.stats.levels << "\n";
  if (r.witness) {
    os << "witness rule: " << r.witness->rule << "\n";
    os << "witness path (1-based): " << join_1based(r.witness->path_from_seed) << "\n";
    os << "witness vertices (1-based): " << join_1based(r.witness->vertices) << "\n";
    if (!r.witness->detail.empty()) os << "detail: " << r.witness->detail << "\n";
  }
  return os.str();
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Finite: return kExitOk;
    case Verdict::Infinite: return kExitInfinite;
    default: return kExitBudget;
  }
}

std::optional<Quiver> load_quiver(const std::string& path, std::ostream& err) {
  try {
    return quiver_from_json(read_input(path));
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

// ---- subcommands -----------------------------------------------------------

int cmd_mutate(const std::string& in, const std::vector<int>& seq, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  std::optional<Quiver> q = load_quiver(in, err);
  if (!q) return kExitParse;
  for (int v : seq) {
    if (v < 1 || v > q->rank()) {
      err << "error: vertex " << v << " outside 1.." << q->rank() << "\n";
      return kExitBadVertex;
    }
    *q = q->mutated(v - 1);
  }
  if (!write_output(out_path, quiver_to_json(*q), out, err)) return kExitFail;
  // keep stdout a clean document when no --out was given
  std::ostream& tos = out_path.empty() ? err : out;
  print_arrow_table(*q, tos);
  return kExitOk;
}

int cmd_explore(const std::string& in, const ExploreBudget& budget, bool mod_opposite,
                const std::string& format, int threads, std::ostream& out, std::ostream& err) {
  std::optional<Quiver> q = load_quiver(in, err);
  if (!q) return kExitParse;
  ClassReport r = explore(*q, budget, resolve_thread_count(threads));
  out << (format == "json" ? explore_json(r, mod_opposite) : explore_text(r, mod_opposite));
  return verdict_exit(r.verdict);
}

int cmd_classify_rank3(const std::string& in, std::size_t budget, const std::string& format,
                       std::ostream& out, std::ostream& err) {
  std::optional<Quiver> q = load_quiver(in, err);
  if (!q) return kExitParse;
  if (q->rank() != 3) {
    err << "error: classify-rank3 needs a rank-3 document, got rank " << q->rank() << "\n";
    return kExitParse;
  }
  Rank3Certificate c = classify_rank3(*q, budget);
  if (format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["verdict"] = verdict_name(c.verdict);
    j["family"] = c.family;
    j["normal_form"] = c.normal_form;
    j["by_exhaustion"] = c.by_exhaustion;
    if (c.class_size > 0) j["class_size"] = c.class_size;
    if (c.witness) j["witness"] = witness_json(*c.witness);
    out << j.dump(2) << "\n";
  } else {
    out << "verdict: " << verdict_name(c.verdict) << "\n";
    if (!c.family.empty()) out << "family: " << c.family << "\n";
    if (!c.normal_form.empty()) out << "normal form: " << c.normal_form << "\n";
    out << "by exhaustion: " << (c.by_exhaustion ? "yes" : "no") << "\n";
    if (c.class_size > 0) out << "class size: " << c.class_size << "\n";
    if (c.witness) {
      out << "witness rule: " << c.witness->rule << "\n";
      out << "witness path (1-based): " << join_1based(c.witness->path_from_seed) << "\n";
    }
  }
  return verdict_exit(c.verdict);
}

std::optional<SeriesFamily> parse_family(const std::string& s) {
  if (s == "odd") return SeriesFamily::Odd;
  if (s == "even-a" || s == "even_a") return SeriesFamily::EvenA;
  if (s == "even-b" || s == "even_b") return SeriesFamily::EvenB;
  return std::nullopt;
}

int cmd_series(const std::string& family_str, long n, const std::vector<long>& tuple_vals,
               const std::vector<int>& seq, bool list, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  std::optional<SeriesFamily> f = parse_family(family_str);
  if (!f || n < 2) {
    err << "error: need --family odd|even-a|even-b and --n >= 2\n";
    return kExitParse;
  }
  if (list) {
    for (const SeriesTuple& t : valid_tuples(*f, n)) {
      out << t.str();
      if (!t.primitive()) out << "   (reduces to " << t.reduced().str() << ")";
      out << "\n";
    }
    return kExitOk;
  }
  SeriesTuple t = series_base(*f, n);
  if (!tuple_vals.empty()) {
    if (tuple_vals.size() != 4) {
      err << "error: --tuple wants k,q,m,s\n";
      return kExitParse;
    }
    t.k = tuple_vals[0];
    t.q = tuple_vals[1];
    t.m = tuple_vals[2];
    t.s = tuple_vals[3];
    if (!t.valid()) {
      err << "error: tuple " << t.str() << " fails the family conditions\n";
      return kExitParse;
    }
  }
  out << t.str() << "\n";
  for (int v : seq) {
    if (v < 1 || v > 4) {
      err << "error: vertex " << v << " outside 1..4\n";
      return kExitBadVertex;
    }
    t = param_mutation(t, v - 1);
    out << "mu_" << v << " -> " << t.str() << "\n";
  }
  Quiver q = realize_standard_form(t);
  if (!out_path.empty()) {
    if (!write_output(out_path, quiver_to_json(q), out, err)) return kExitFail;
  } else {
    print_arrow_table(q, out);
  }
  return kExitOk;
}

std::string realize_report_json(const RealizationClassReport& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["verdict"] = verdict_name(r.verdict);
  j["pairs"] = r.pair_count;
  j["quivers"] = r.quiver_count;
  j["corank"] = r.corank;
  j["corank_constant"] = r.corank_constant;
  j["compatibility_violations"] = r.compatibility_violations;
  j["admissibility_violations"] = r.admissibility_violations;
  if (!r.first_violation_path.empty()) {
    ordered_json p = ordered_json::array();
    for (int v : r.first_violation_path) p.push_back(v + 1);
    j["first_violation_path"] = p;
  }
  j["acyclic_pairs"] = r.acyclic_pair_count;
  j["acyclic_flip_failures"] = r.acyclic_flip_failures;
  j["ok"] = r.ok();
  return j.dump(2) + "\n";
}

std::string realize_report_text(const RealizationClassReport& r) {
  std::ostringstream os;
  os << "verdict: " << verdict_name(r.verdict) << "\n";
  os << "distinct (gram, quiver) pairs: " << r.pair_count << " over " << r.quiver_count
     << " quivers\n";
  os << "corank: " << r.corank << (r.corank_constant ? " (constant)" : " (NOT constant)") << "\n";
  os << "violations: " << r.compatibility_violations << " compatibility, "
     << r.admissibility_violations << " admissibility\n";
  if (!r.first_violation_path.empty())
    os << "first violation path (1-based): " << join_1based(r.first_violation_path) << "\n";
  os << "acyclic pairs: " << r.acyclic_pair_count << ", acute flip failures: "
     << r.acyclic_flip_failures << "\n";
  return os.str();
}

int cmd_realize(const std::string& in, bool class_mode, const ExploreBudget& budget,
                const std::string& format, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  std::optional<Quiver> q = load_quiver(in, err);
  if (!q) return kExitParse;
  if (!class_mode) {
    Realization r;
    try {
      r = initial_realization(*q);
    } catch (const std::invalid_argument& e) {
      err << "error: no initial realization: " << e.what() << "\n";
      return kExitInfinite;
    }
    if (!write_output(out_path, realization_to_json(r), out, err)) return kExitFail;
    std::ostream& ios = out_path.empty() ? err : out;
    ios << "corank: " << gram_corank(r) << "\n";
    return kExitOk;
  }
  RealizationClassReport r;
  try {
    r = verify_class_realization(*q, budget);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfinite;
  }
  out << (format == "json" ? realize_report_json(r) : realize_report_text(r));
  if (r.verdict == Verdict::BudgetExhausted) return kExitBudget;
  return r.ok() ? kExitOk : kExitInfinite;
}

int cmd_export_dot(const std::string& in, const std::string& out_path, std::ostream& out,
                   std::ostream& err) {
  std::optional<Quiver> q = load_quiver(in, err);
  if (!q) return kExitParse;
  if (!write_output(out_path, quiver_to_dot(*q), out, err)) return kExitFail;
  return kExitOk;
}

int cmd_path(const std::string& from_path, const std::string& to_path, std::size_t max_depth,
             const ExploreBudget& budget, std::ostream& out, std::ostream& err) {
  std::optional<Quiver> a = load_quiver(from_path, err);
  if (!a) return kExitParse;
  std::optional<Quiver> b = load_quiver(to_path, err);
  if (!b) return kExitParse;
  if (a->rank() != b->rank()) {
    err << "error: ranks differ (" << a->rank() << " vs " << b->rank() << ")\n";
    return kExitParse;
  }
  long amb = std::lcm(a->ambient(), b->ambient());
  std::optional<std::vector<int>> p = find_mutation_path(a->lifted(amb), b->lifted(amb),
                                                         max_depth, budget);
  if (!p) {
    err << "no mutation path of length <= " << max_depth << " found within budget\n";
    return kExitBudget;
  }
  out << join_1based(*p) << "\n";
  return kExitOk;
}

// ---- verification tables ---------------------------------------------------

Quiver path_seed(long ambient, const std::vector<AngleLabel>& labels) {
  std::vector<std::tuple<int, int, AngleLabel>> arrows;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) arrows.emplace_back(i, i + 1, labels[i]);
  return Quiver::from_labeled_arrows(static_cast<int>(labels.size()) + 1, ambient, arrows);
}

std::vector<CycloReal> label_alphabet(long ambient, const std::vector<AngleLabel>& labels) {
  std::vector<CycloReal> a{CycloReal::zero(ambient)};
  for (AngleLabel l : labels) {
    CycloReal w = CycloReal::from_label(l, ambient);
    a.push_back(w);
    a.push_back(-w);
  }
  return a;
}

// lex-min canonical key over the class: a fingerprint usable across seeds
const std::string& class_key(const ClassReport& r) { return r.member_keys.front(); }

std::vector<ClassReport> finite_with_denominator(std::vector<ClassReport> in, long d) {
  std::vector<ClassReport> out;
  for (ClassReport& r : in)
    if (r.verdict == Verdict::Finite && r.highest_denominator == d) out.push_back(std::move(r));
  return out;
}

struct NameSpec {
  const char* name;
  std::size_t reference_size;
  int expected_corank;
};

// Classes in their table listing order: finite row, affine row, extended
// affine row.
const NameSpec kNamedTable[] = {
    {"H3", 6, 0},       {"H3'", 6, 0},      {"H3''", 10, 0},    {"H4", 18, 0},
    {"H4'", 23, 0},     {"H4''", 32, 0},    {"H4'''", 60, 0},   {"H4''''", 30, 0},
    {"F4", 8, 0},       {"~H3", 36, 1},     {"~H3'", 28, 1},    {"~H4", 524, 1},
    {"~F4", 60, 1},     {"H3(1,1)", 8, 2},  {"H4(1,1)", 179, 2}, {"F4(*,+)", 49, 2},
    {"F4(*,*)", 35, 2},
};

}  // namespace

std::vector<NamedClass> named_classes(int threads) {
  const int th = resolve_thread_count(threads);
  const ExploreBudget big{400'000, 65'536};

  struct SeedRow {
    const char* name;
    Quiver seed;
  };
  const SeedRow seeded[] = {
      {"H3", path_seed(5, {{1, 3}, {1, 5}})},
      {"H3'", path_seed(5, {{2, 5}, {1, 3}})},
      {"H3''", path_seed(5, {{1, 5}, {2, 5}})},
      {"H4", path_seed(5, {{1, 5}, {1, 3}, {1, 3}})},
      {"H4'", path_seed(5, {{2, 5}, {1, 3}, {1, 3}})},
      {"H4''", path_seed(5, {{2, 5}, {1, 5}, {1, 3}})},
      {"H4'''", path_seed(5, {{2, 5}, {1, 3}, {1, 5}})},
      {"H4''''", path_seed(5, {{2, 5}, {1, 5}, {2, 5}})},
      {"F4", path_seed(4, {{1, 3}, {1, 4}, {1, 3}})},
      {"~H4", path_seed(5, {{2, 5}, {1, 5}, {1, 3}, {2, 5}})},
      {"~F4", path_seed(4, {{1, 3}, {1, 3}, {1, 4}, {1, 3}})},
  };

  std::map<std::string, ClassReport> found;  // class name -> report
  std::set<std::string> known_keys;
  auto adopt = [&](const std::string& name, const ClassReport& r) {
    known_keys.insert(class_key(r));
    found.emplace(name, r);
  };
  ClassReport f4_report;
  for (const SeedRow& s : seeded) {
    ClassReport r = explore(s.seed, big, th);
    if (std::string(s.name) == "F4") f4_report = r;
    adopt(s.name, r);
  }

  // Denominator-5 cascade: the four rank-3 classes, then one vertex a time.
  // Classes already named above drop out by fingerprint; the rank-4 leftover
  // of size 3 is the n = 2 member of the odd series and stays unnamed.
  std::vector<ClassReport> bases;
  bases.push_back(found.at("H3"));
  bases.push_back(found.at("H3'"));
  bases.push_back(found.at("H3''"));
  bases.push_back(explore(
      Quiver::from_labeled_arrows(3, 5, {{0, 1, {0, 1}}, {1, 2, {1, 5}}, {2, 0, {1, 5}}}), big,
      th));
  const std::vector<CycloReal> a5 = label_alphabet(5, {{1, 3}, {0, 1}, {1, 5}, {2, 5}});
  auto extend = [&](const std::vector<ClassReport>& b, const std::vector<CycloReal>& alphabet,
                    long d) {
    return finite_with_denominator(extend_classification(b, alphabet, big, th), d);
  };

  std::vector<ClassReport> rank4 = extend(bases, a5, 5);
  for (const ClassReport& r : rank4) {
    if (known_keys.count(class_key(r))) continue;
    if (r.size == 36) adopt("~H3", r);
    if (r.size == 28) adopt("~H3'", r);
  }
  std::vector<ClassReport> rank5 = extend(rank4, a5, 5);
  for (const ClassReport& r : rank5)
    if (!known_keys.count(class_key(r))) adopt("H3(1,1)", r);
  std::vector<ClassReport> rank6 = extend(rank5, a5, 5);
  for (const ClassReport& r : rank6)
    if (!known_keys.count(class_key(r))) adopt("H4(1,1)", r);

  // Denominator-4 lane: F4 -> ~F4 -> the two extended affine classes.
  const std::vector<CycloReal> a4 = label_alphabet(4, {{1, 3}, {0, 1}, {1, 4}});
  std::vector<ClassReport> f5 = extend({f4_report}, a4, 4);
  std::vector<ClassReport> f6 = extend(f5, a4, 4);
  for (const ClassReport& r : f6) {
    if (known_keys.count(class_key(r))) continue;
    if (r.size == 49) adopt("F4(*,+)", r);
    if (r.size == 35) adopt("F4(*,*)", r);
  }

  std::vector<NamedClass> out;
  const std::set<std::string> seed_names = {"H3",   "H3'",    "H3''",   "H4",  "H4'", "H4''",
                                            "H4'''", "H4''''", "F4",    "~H4", "~F4"};
  for (const NameSpec& spec : kNamedTable) {
    NamedClass nc;
    nc.name = spec.name;
    nc.reference_size = spec.reference_size;
    nc.expected_corank = spec.expected_corank;
    nc.from_seed = seed_names.count(spec.name) > 0;
    auto it = found.find(spec.name);
    if (it != found.end()) nc.report = it->second;  // else: empty report, rows fail loudly
    out.push_back(std::move(nc));
  }
  return out;
}

bool TableReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.ok; });
}

std::string TableReport::str() const {
  std::size_t w0 = 5, w1 = 8, w2 = 8;
  for (const TableRow& r : rows) {
    w0 = std::max(w0, r.name.size());
    w1 = std::max(w1, r.expected.size());
    w2 = std::max(w2, r.computed.size());
  }
  std::ostringstream os;
  os << "== " << title << " ==\n";
  os << "  " << pad("class", w0) << "  " << pad("expected", w1) << "  " << pad("computed", w2)
     << "\n";
  std::size_t bad = 0;
  for (const TableRow& r : rows) {
    os << "  " << pad(r.name, w0) << "  " << pad(r.expected, w1) << "  " << pad(r.computed, w2)
       << "  " << (r.ok ? "ok" : "MISMATCH") << "\n";
    if (!r.ok) ++bad;
  }
  os << rows.size() << " rows, " << bad << (bad == 1 ? " mismatch" : " mismatches") << "\n";
  return os.str();
}

TableReport table_sizes(int threads) {
  TableReport t;
  t.title = "mutation class sizes (counted up to relabeling)";
  for (const NamedClass& nc : named_classes(threads)) {
    TableRow row{nc.name, std::to_string(nc.reference_size), "", false};
    if (nc.report.verdict == Verdict::Finite) {
      row.computed = std::to_string(nc.report.size);
      row.ok = nc.report.size == nc.reference_size;
    } else {
      row.computed = "class not found";
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

TableReport table_classification(int threads) {
  const int th = resolve_thread_count(threads);
  const ExploreBudget big{400'000, 65'536};
  const std::vector<CycloReal> a5 = label_alphabet(5, {{1, 3}, {0, 1}, {1, 5}, {2, 5}});

  // Exhaustive connected rank-3 grid over the 9-value alphabet, deduplicated
  // by mutation class.
  std::set<std::string> classified;
  std::vector<ClassReport> finite;
  const int A = static_cast<int>(a5.size());
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j)
      for (int k = 0; k < A; ++k) {
        Quiver q(3, 5);
        q.set_arrow(0, 1, a5[i]);
        q.set_arrow(0, 2, a5[j]);
        q.set_arrow(1, 2, a5[k]);
        if (!q.is_connected()) continue;
        std::string key = canonical_key(q);
        if (classified.count(key)) continue;
        ClassReport r = explore(q, big, th);
        if (r.verdict == Verdict::Finite) {
          for (const std::string& mk : r.member_keys) classified.insert(mk);
          finite.push_back(std::move(r));
        } else {
          classified.insert(key);
        }
      }

  TableReport t;
  t.title = "denominator-5 classification by vertex extension";
  std::vector<ClassReport> level = finite_with_denominator(std::move(finite), 5);
  t.rows.push_back({"rank-3 classes", "4", std::to_string(level.size()), level.size() == 4});
  const std::size_t expected[] = {8, 2, 1, 0};
  for (int rank = 4; rank <= 7; ++rank) {
    level = finite_with_denominator(extend_classification(level, a5, big, th), 5);
    std::string name = "rank-" + std::to_string(rank) + " classes";
    std::size_t want = expected[rank - 4];
    t.rows.push_back({name, std::to_string(want), std::to_string(level.size()),
                      level.size() == want});
  }
  return t;
}

TableReport table_series(int threads) {
  const int th = resolve_thread_count(threads);
  TableReport t;
  t.title = "series parameter closure (n <= 40; matrix agreement n <= 12)";
  for (SeriesFamily f : {SeriesFamily::Odd, SeriesFamily::EvenA, SeriesFamily::EvenB})
    for (long n = 2; n <= 40; ++n) {
      const bool with_matrix = n <= 12;
      SeriesClosureReport r = verify_closure(f, n, with_matrix, false, th);
      TableRow row;
      row.name = std::string(family_name(f)) + " n=" + std::to_string(n);
      row.expected = with_matrix ? "closed, matrix agrees" : "closed";
      row.computed = r.param_closed ? "closed" : "not closed";
      if (with_matrix) row.computed += r.matrix_agrees ? ", matrix agrees" : ", matrix DISAGREES";
      row.computed += " (" + std::to_string(r.tuple_count) + " tuples)";
      row.ok = r.param_closed && (!with_matrix || (r.matrix_checked && r.matrix_agrees));
      if (!row.ok && !r.detail.empty()) row.computed += " [" + r.detail + "]";
      t.rows.push_back(std::move(row));
    }
  return t;
}

TableReport table_realizations(int threads) {
  TableReport t;
  t.title = "class-wide realization propagation";
  const ExploreBudget budget{100'000, 65'536};
  auto describe = [](const RealizationClassReport& r) {
    std::ostringstream os;
    os << "corank " << r.corank << (r.corank_constant ? "" : " (varies)") << ", "
       << r.compatibility_violations + r.admissibility_violations << " violations, "
       << r.acyclic_flip_failures << " flip failures, " << r.pair_count << " pairs";
    return os.str();
  };
  for (const NamedClass& nc : named_classes(threads)) {
    TableRow row{nc.name, "corank " + std::to_string(nc.expected_corank) + ", clean", "", false};
    if (nc.report.verdict != Verdict::Finite) {
      row.computed = "class not found";
      t.rows.push_back(std::move(row));
      continue;
    }
    const Quiver& start = nc.from_seed ? nc.report.seed : nc.report.representatives.front();
    RealizationClassReport rc = verify_class_realization(start, budget);
    row.computed = describe(rc);
    row.ok = rc.ok() && rc.corank == nc.expected_corank && rc.acyclic_flip_failures == 0;
    t.rows.push_back(std::move(row));
  }
  for (SeriesFamily f : {SeriesFamily::Odd, SeriesFamily::EvenA, SeriesFamily::EvenB})
    for (long n = 2; n <= 8; ++n) {
      TableRow row{std::string(family_name(f)) + " n=" + std::to_string(n), "corank 2, clean",
                   "", false};
      RealizationClassReport rc =
          verify_class_realization(realize_standard_form(series_base(f, n)), budget);
      row.computed = describe(rc);
      row.ok = rc.ok() && rc.corank == 2 && rc.acyclic_flip_failures == 0;
      t.rows.push_back(std::move(row));
    }
  return t;
}

namespace {

int cmd_tables(const std::string& which, int threads, std::ostream& out) {
  TableReport t;
  if (which == "sizes")
    t = table_sizes(threads);
  else if (which == "classification")
    t = table_classification(threads);
  else if (which == "series")
    t = table_series(threads);
  else
    t = table_realizations(threads);
  out << t.str();
  return t.all_ok() ? kExitOk : kExitFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact mutation classes of quivers with real weights"};
  app.name("qmut");
  app.require_subcommand(1);

  std::string in, to, out_path, format = "text", family, which;
  std::vector<int> seq;
  std::vector<long> tuple_vals;
  std::size_t max_quivers = 1'000'000, max_reps = 65'536, budget3 = 1'000'000, max_depth = 16;
  long n = 0;
  int threads = 0;
  bool mod_opposite = false, list = false, class_mode = false;

  CLI::App* mu = app.add_subcommand("mutate", "apply a mutation sequence to a document");
  mu->add_option("input", in, "quiver document (- for stdin)")->required();
  mu->add_option("--seq", seq, "comma-separated 1-based vertices")->delimiter(',');
  mu->add_option("-o,--out", out_path, "output document (default stdout)");

  CLI::App* ex = app.add_subcommand("explore", "enumerate the mutation class");
  ex->add_option("input", in, "quiver document (- for stdin)")->required();
  ex->add_option("--max-quivers", max_quivers, "class size budget");
  ex->add_option("--max-reps", max_reps, "stored representative cap");
  ex->add_flag("--mod-opposite", mod_opposite, "headline size counts Q and Q^op once");
  ex->add_option("--report", format, "report format")->check(CLI::IsMember({"text", "json"}));
  ex->add_option("--threads", threads, "worker threads (0 = QMUT_THREADS or cores)");

  CLI::App* cl = app.add_subcommand("classify-rank3", "certificate for a rank-3 document");
  cl->add_option("input", in, "quiver document (- for stdin)")->required();
  cl->add_option("--budget", budget3, "exploration budget");
  cl->add_option("--report", format, "report format")->check(CLI::IsMember({"text", "json"}));

  CLI::App* se = app.add_subcommand("series", "rank-4 series tuples and standard forms");
  se->add_option("--family", family, "odd | even-a | even-b")->required();
  se->add_option("--n", n, "family parameter (denominator 2n+1 or 2n)")->required();
  se->add_option("--tuple", tuple_vals, "k,q,m,s (default: the table base tuple)")
      ->delimiter(',');
  se->add_option("--seq", seq, "1-based parameter mutations to apply")->delimiter(',');
  se->add_flag("--list", list, "list all valid tuples instead");
  se->add_option("-o,--out", out_path, "write the standard form as a document");

  CLI::App* re = app.add_subcommand("realize", "Gram-matrix realization of a document");
  re->add_option("input", in, "quiver document (- for stdin)")->required();
  re->add_flag("--class", class_mode, "propagate over the whole mutation class");
  re->add_option("--max-quivers", max_quivers, "pair budget for --class");
  re->add_option("--report", format, "report format for --class")
      ->check(CLI::IsMember({"text", "json"}));
  re->add_option("-o,--out", out_path, "output Gram document (default stdout)");

  CLI::App* ta = app.add_subcommand("tables", "verification tables");
  ta->add_option("which", which, "sizes | classification | series | realizations")
      ->required()
      ->check(CLI::IsMember({"sizes", "classification", "series", "realizations"}));
  ta->add_option("--threads", threads, "worker threads (0 = QMUT_THREADS or cores)");

  CLI::App* dot = app.add_subcommand("export-dot", "write the document as a DOT graph");
  dot->add_option("input", in, "quiver document (- for stdin)")->required();
  dot->add_option("-o,--out", out_path, "output file (default stdout)");

  CLI::App* pa = app.add_subcommand("path", "mutation sequence joining two documents");
  pa->add_option("from", in, "start document")->required();
  pa->add_option("--to", to, "target document")->required();
  pa->add_option("--max-depth", max_depth, "longest sequence tried");
  pa->add_option("--max-quivers", max_quivers, "search budget");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (mu->parsed()) return cmd_mutate(in, seq, out_path, out, err);
    if (ex->parsed())
      return cmd_explore(in, {max_quivers, max_reps}, mod_opposite, format, threads, out, err);
    if (cl->parsed()) return cmd_classify_rank3(in, budget3, format, out, err);
    if (se->parsed()) return cmd_series(family, n, tuple_vals, seq, list, out_path, out, err);
    if (re->parsed())
      return cmd_realize(in, class_mode, {max_quivers, max_reps}, format, out_path, out, err);
    if (ta->parsed()) return cmd_tables(which, threads, out);
    if (dot->parsed()) return cmd_export_dot(in, out_path, out, err);
    if (pa->parsed()) return cmd_path(in, to, max_depth, {max_quivers, max_reps}, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitParse;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace qmut

// JSON (de)serialization for quivers and Gram matrices, and DOT export.

#include "qmut/quiver_io.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qmut {

namespace {

using ordered_json = nlohmann::ordered_json;

// label when the value is a plain cosine, power-basis coordinates otherwise
ordered_json weight_to_json(const CycloReal& w) {
  ordered_json out;
  if (auto lbl = w.to_label()) {
    out["label"] = {{"num", lbl->num}, {"den", lbl->den}};
  } else {
    std::vector<std::string> coeffs;
    for (const mpq_class& c : w.coeffs()) coeffs.push_back(c.get_str());
    out["coeffs"] = coeffs;
  }
  return out;
}

CycloReal weight_from_json(const ordered_json& j, long ambient) {
  if (j.contains("label")) {
    const ordered_json& l = j.at("label");
    AngleLabel lbl(l.at("num").get<long>(), l.at("den").get<long>());
    return CycloReal::from_label(lbl, ambient);
  }
  if (!j.contains("coeffs")) throw std::invalid_argument("weight needs a label or coeffs");
  CycloReal c = CycloReal::generator(ambient);
  CycloReal acc = CycloReal::zero(ambient);
  const auto& coeffs = j.at("coeffs");
  for (std::size_t t = coeffs.size(); t-- > 0;) {
    mpq_class q(coeffs[t].get<std::string>());
    q.canonicalize();
    acc = acc * c + CycloReal::from_rational(q, ambient);
  }
  return acc;
}

ordered_json parse_document(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("document is not an object");
  if (doc.contains("schema_version") && doc.at("schema_version").get<int>() != kSchemaVersion)
    throw std::invalid_argument("unsupported schema_version");
  return doc;
}

std::pair<int, long> rank_and_ambient(const ordered_json& doc) {
  int rank = doc.at("rank").get<int>();
  long ambient = doc.at("ambient").get<long>();
  if (rank < 1) throw std::invalid_argument("rank must be positive");
  if (ambient < 1) throw std::invalid_argument("ambient must be positive");
  return {rank, ambient};
}

}  // namespace

std::string quiver_to_json(const Quiver& q) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["rank"] = q.rank();
  doc["ambient"] = q.ambient();
  doc["arrows"] = ordered_json::array();
  for (const Arrow& a : q.arrows()) {
    ordered_json arrow;
    arrow["from"] = a.from + 1;
    arrow["to"] = a.to + 1;
    arrow.update(weight_to_json(a.weight));
    doc["arrows"].push_back(std::move(arrow));
  }
  return doc.dump(2) + "\n";
}

Quiver quiver_from_json(const std::string& text) {
  ordered_json doc = parse_document(text);
  auto [rank, ambient] = rank_and_ambient(doc);
  Quiver q(rank, ambient);
  std::vector<char> seen(static_cast<std::size_t>(rank) * rank, 0);
  if (!doc.contains("arrows") || !doc.at("arrows").is_array())
    throw std::invalid_argument("document has no arrows array");
  try {
    for (const ordered_json& a : doc.at("arrows")) {
      int from = a.at("from").get<int>() - 1;
      int to = a.at("to").get<int>() - 1;
      if (from < 0 || to < 0 || from >= rank || to >= rank)
        throw std::invalid_argument("arrow vertex out of range");
      if (from == to) throw std::invalid_argument("arrow: loop");
      char& s = seen[static_cast<std::size_t>(std::min(from, to)) * rank +
                     std::max(from, to)];
      if (s) throw std::invalid_argument("arrow: duplicate pair");
      s = 1;
      CycloReal w = weight_from_json(a, ambient);
      if (w.sign() <= 0) throw std::invalid_argument("arrow weight must be positive");
      q.set_arrow(from, to, w);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad arrow entry: ") + e.what());
  }
  return q;
}

std::string realization_to_json(const Realization& r) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["rank"] = r.rank();
  doc["ambient"] = r.ambient();
  doc["gram"] = ordered_json::array();
  for (int i = 0; i < r.rank(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < r.rank(); ++j) row.push_back(weight_to_json(r.at(i, j)));
    doc["gram"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

Realization realization_from_json(const std::string& text) {
  ordered_json doc = parse_document(text);
  auto [rank, ambient] = rank_and_ambient(doc);
  if (!doc.contains("gram") || !doc.at("gram").is_array() ||
      static_cast<int>(doc.at("gram").size()) != rank)
    throw std::invalid_argument("gram must be a rank x rank matrix");
  Realization r(rank, ambient);
  CycloReal two = CycloReal::from_int(2, ambient);
  try {
    for (int i = 0; i < rank; ++i) {
      const ordered_json& row = doc.at("gram").at(i);
      if (static_cast<int>(row.size()) != rank)
        throw std::invalid_argument("gram must be a rank x rank matrix");
      for (int j = 0; j < rank; ++j) {
        CycloReal w = weight_from_json(row.at(j), ambient);
        if (i == j) {
          if (w != two) throw std::invalid_argument("gram diagonal must be 2");
          continue;
        }
        if (i < j) {
          r.set(i, j, w);
        } else if (r.at(i, j) != w) {
          throw std::invalid_argument("gram matrix is not symmetric");
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad gram entry: ") + e.what());
  }
  return r;
}

std::string quiver_to_dot(const Quiver& q) {
  std::string out = "digraph quiver {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (int i = 0; i < q.rank(); ++i)
    out += "  v" + std::to_string(i + 1) + " [label=\"" + std::to_string(i + 1) + "\"];\n";
  for (const Arrow& a : q.arrows()) {
    out += "  v" + std::to_string(a.from + 1) + " -> v" + std::to_string(a.to + 1);
    if (a.weight == CycloReal::from_int(2, q.ambient())) {
      out += " [color=\"black:black\"]";  // doubled line for weight 2
    } else if (a.weight == CycloReal::from_int(1, q.ambient())) {
      // weight-1 arrows stay unlabeled
    } else if (auto lbl = a.weight.to_label()) {
      out += " [label=\"" + lbl->str() + "\"]";
    } else {
      out += " [label=\"" + a.weight.str() + "\"]";
    }
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace qmut

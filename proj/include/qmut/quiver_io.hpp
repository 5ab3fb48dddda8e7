// JSON documents for quivers and Gram matrices, plus DOT export.
//
// Document shape (vertices are 1-based in files, 0-based in memory):
//   {
//     "schema_version": 1,
//     "rank": 3,
//     "ambient": 5,
//     "arrows": [ {"from": 1, "to": 2, "label": {"num": 1, "den": 5}}, ... ]
//   }
// A weight that is not 2cos(pi m/N) is carried as {"coeffs": ["p/q", ...]},
// the coordinates in the power basis of 2cos(pi/ambient).  Gram matrices use
// the same envelope with a full symmetric "gram" matrix of entries instead
// of "arrows".  "//" comments are accepted on input.

#pragma once

#include <string>

#include "qmut/quiver.hpp"
#include "qmut/realization.hpp"

namespace qmut {

inline constexpr int kSchemaVersion = 1;

std::string quiver_to_json(const Quiver& q);
// Throws std::runtime_error on malformed JSON, std::invalid_argument on a
// well-formed document violating the invariants (bad vertex, duplicate pair,
// label not a positive weight, denominator incompatible with the ambient).
Quiver quiver_from_json(const std::string& text);

std::string realization_to_json(const Realization& r);
Realization realization_from_json(const std::string& text);

// Weight-1 arrows unlabeled, weight-2 arrows drawn with a doubled line,
// anything else labeled "num/den" (or the raw coefficient form).
std::string quiver_to_dot(const Quiver& q);

}  // namespace qmut

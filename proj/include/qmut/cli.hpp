// Command-line front end: document-driven subcommands plus the verification
// table suites the acceptance binary replays.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmut/explore.hpp"
#include "qmut/quiver.hpp"

namespace qmut {

// Exit codes shared by every subcommand.
enum : int {
  kExitOk = 0,         // success / finite verdict / path found
  kExitFail = 1,       // table mismatches, unwritable output
  kExitParse = 2,      // malformed document or unusable command line
  kExitBadVertex = 3,  // vertex outside 1..rank
  kExitInfinite = 4,   // infinite verdict / class admits no realization
  kExitBudget = 5,     // search budget or depth exhausted
};

// One verification row: a named quantity, the reference value, the computed
// one.
struct TableRow {
  std::string name;
  std::string expected;
  std::string computed;
  bool ok = false;
};

struct TableReport {
  std::string title;
  std::vector<TableRow> rows;
  bool all_ok() const;
  std::string str() const;  // aligned text table, one mark per row
};

// The seventeen named H/F mutation classes: eleven grown from path seeds,
// the rest reached by vertex extension.  reference_size is the value the
// sizes table asserts; expected_corank follows the class's type row
// (0 finite, 1 affine, 2 extended affine).
struct NamedClass {
  std::string name;
  std::size_t reference_size = 0;
  int expected_corank = 0;
  bool from_seed = false;
  ClassReport report;
};

std::vector<NamedClass> named_classes(int threads);

TableReport table_sizes(int threads);
TableReport table_classification(int threads);
TableReport table_series(int threads);
TableReport table_realizations(int threads);

// argv-style front end (argv[0] skipped) and the stream form tests drive;
// `args` excludes the program name.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmut

#pragma once

#include "qmut/quiver.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qmut {

// Budget for the breadth-first mutation-class enumerator.
struct ExploreBudget {
    std::size_t max_quivers = 1'000'000;       // distinct quivers (up to relabeling) before giving up
    std::size_t max_representatives = 65'536;  // cap on stored representative quivers
};

enum class Verdict { Finite, Infinite, BudgetExhausted };

const char* verdict_name(Verdict v);

// Proof artifact for an Infinite verdict: replaying path_from_seed on the
// explored seed (mutating at the recorded 0-based vertices, in order) yields a
// quiver violating `rule` at `vertices`.
//
// rules: weight-bound      some |weight| > 2
//        label-form        a weight is not 2cos(pi m/N) for the ambient N
//        weight-two-shape  rank 3: a weight-2 arrow outside an oriented (2,y,y) triangle
//        triangle-cond     rank 3: angle-sum test failed
//        markov-subquiver  rank > 3: contains the all-double-arrow oriented triangle
//        rank3-subquiver   rank > 3: contains an infinite rank-3 subquiver
struct InfinitenessWitness {
    std::vector<int> path_from_seed;
    std::string rule;
    std::vector<int> vertices;
    std::string detail;
};

struct ExploreStats {
    std::size_t visited = 0;   // distinct quivers stored
    std::size_t expanded = 0;  // quivers whose mutations were all generated and merged
    std::size_t levels = 0;    // BFS depth reached
};

struct ClassReport {
    Quiver seed;
    Verdict verdict = Verdict::BudgetExhausted;
    std::size_t size = 0;               // quivers in the class, up to simultaneous relabeling
    std::size_t size_mod_opposite = 0;  // same, counting Q and Q^op once (finite classes only)
    std::vector<Quiver> representatives;           // canonical representatives in discovery order (capped)
    std::vector<Quiver> acyclic_members;           // canonical representatives of acyclic members
    std::vector<std::string> acyclic_member_keys;  // parallel to acyclic_members
    // Orbits of the acyclic members under sink/source mutations, as index sets
    // into acyclic_members, ordered by first discovery.
    std::vector<std::vector<std::size_t>> acyclic_orbits;
    std::vector<std::string> member_keys;  // sorted canonical keys (finite classes only)
    std::optional<long> highest_denominator;
    std::optional<InfinitenessWitness> witness;
    ExploreStats stats;
};

// Enumerates the mutation class of `seed` breadth-first, deduplicating by
// canonical form.  Neighbours failing one of the infiniteness rules above end
// the search with a witness.  The report is a deterministic function of the
// seed and budget: thread count never changes any field.
ClassReport explore(const Quiver& seed, const ExploreBudget& budget = {}, int threads = 1);

// First member of each sink/source orbit of acyclic members.  Requires a
// Finite report.
std::vector<Quiver> acyclic_orbit_representatives(const ClassReport& report);

// requested > 0 wins, then the QMUT_THREADS environment variable, then the
// hardware concurrency (at least 1).
int resolve_thread_count(int requested);

// Angle-sum feasibility test for a rank-3 quiver whose weights are all of the
// form 2cos(pi m/N); absent arrows count as label 1/2.  Throws
// std::invalid_argument on a non-label weight.  Disconnected quivers pass
// vacuously (applicable = false).
struct TriangleCheck {
    bool pass = false;
    bool applicable = false;
    bool cyclic = false;
    long den = 1;  // common denominator of the three labels
    std::string detail;
};
TriangleCheck check_triangle_condition(const Quiver& q);

// Outcome of the rank-3 classifier.  The verdict is decided by a bounded BFS
// from the canonical representative which either reaches one of the known
// finite normal forms (families: markov, cycle = oriented (2,y,y), path = two
// arrows with a recognised label pair, disconnected) or exhibits a rule
// violation; exhausting the class without a match also certifies finiteness
// (by_exhaustion).  Certificates are cached per canonical form, so the result
// is a function of the mutation class only.
struct Rank3Certificate {
    Verdict verdict = Verdict::BudgetExhausted;
    std::string normal_form;  // e.g. "markov", "cycle(2,1/5,1/5)", "path{1/3,1/5}", "disconnected"
    std::string family;       // markov | cycle | path | disconnected | exhausted | (empty when infinite)
    bool by_exhaustion = false;
    std::size_t class_size = 0;  // filled when the class was exhausted
    std::optional<InfinitenessWitness> witness;  // path relative to the canonical representative
};
Rank3Certificate classify_rank3(const Quiver& q, std::size_t budget = 1'000'000);

// Attaches one extra vertex to the lead representative of every base class,
// trying every assignment of alphabet values to the new row, and returns the
// finite classes of the extended rank in deterministic discovery order.
// Classes are deduplicated across bases and candidates by canonical form.
// The alphabet must contain zero and be closed under negation; bases must all
// be finite and of equal rank.  A candidate exhausting the budget raises
// std::runtime_error.
std::vector<ClassReport> extend_classification(const std::vector<ClassReport>& bases,
                                               const std::vector<CycloReal>& alphabet,
                                               const ExploreBudget& budget = {},
                                               int threads = 1);

// Bidirectional search for a mutation sequence sigma with
// canonical_key(mu_sigma(from)) == canonical_key(to).  Quivers must share rank
// and ambient.  Returns std::nullopt when no path of length <= max_depth
// exists within the explored budget.
std::optional<std::vector<int>> find_mutation_path(const Quiver& from, const Quiver& to,
                                                   std::size_t max_depth = 16,
                                                   const ExploreBudget& budget = {});

}  // namespace qmut

#pragma once

#include <optional>
#include <vector>

#include "brattelikit/ordering.hpp"

namespace brattelikit {

// Claim about the unobserved tail of a truncated path. Free makes no claim;
// Max/MinTail assert the continuation is all-maximal / all-minimal, which
// turns "stuck within budget" into a definite answer.
enum class TailTag { Free, MaxTail, MinTail };

struct TruncatedPath {
    FinitePath prefix;
    TailTag tag = TailTag::Free;
};

enum class StepStatus { Ok, NeedsDepth, MaximalPath, MinimalPath };

struct StepResult {
    StepStatus status = StepStatus::Ok;
    TruncatedPath path;  // valid when status == Ok
};

struct StepOptions {
    // Successor of a periodic-component maximum wraps to the component
    // minimum (and symmetrically for predecessors), as observed at the
    // prefix depth.
    bool extend_periodic = false;
};

// Vershik successor: advance the deepest-untouched non-maximal edge block,
// resetting everything below to the minimal configuration.
StepResult successor(const DiagramSide& side, const EdgeOrders& orders, const TruncatedPath& p,
                     int depth_budget, const StepOptions& opts = {});
StepResult predecessor(const DiagramSide& side, const EdgeOrders& orders, const TruncatedPath& p,
                       int depth_budget, const StepOptions& opts = {});

struct OrbitResult {
    std::vector<TruncatedPath> states;  // length steps_done + 1, including start
    std::vector<int> itinerary;         // level-0 start vertex per state
    StepStatus terminal = StepStatus::Ok;
    long steps_done = 0;
};

// Iterates successor (predecessor for steps < 0); stops early with the
// terminal status when the dynamics run out of observable depth.
OrbitResult orbit(const DiagramSide& side, const EdgeOrders& orders, const TruncatedPath& start, long steps,
                  int depth_budget, const StepOptions& opts = {});

// A vertex chain confined by single incoming edges from some level on; the
// tail class through it is finite with |S(start)| elements.
struct PeriodicComponentCandidate {
    int start_level = 0;
    std::vector<int> vertex_by_level;  // levels start_level..depth
    long long period = 0;              // |S(v_{start_level})|
    int top_vertex = 0;                // the chain's vertex at scan depth
};

std::vector<PeriodicComponentCandidate> periodic_component_scan(const DiagramSide& side, int depth);

struct MinimalityCertificate {
    enum class Verdict { Minimal, NotMinimal, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    // Minimal: entrywise positive block product F_{from..to}.
    int block_from = 0, block_to = 0;
    std::optional<IntMatrix> block;
    std::vector<PeriodicComponentCandidate> components;  // NotMinimal evidence
};

// Sufficient check, depth-relative: positive telescoped block => Minimal;
// else a periodic component => NotMinimal; else Inconclusive.
MinimalityCertificate minimality_certificate(const DiagramSide& side, int depth);

// A vertex at level m reachable from every level-0 vertex: tail classes
// through it visit all level-0 cylinders.
struct TransitivityEvidence {
    int level = 0;
    int vertex = 0;
};

std::optional<TransitivityEvidence> transitivity_evidence(const DiagramSide& side, int depth);

// The combined tail-equivalence analysis of one side.
struct ComponentReport {
    std::vector<PeriodicComponentCandidate> periodic_components;
    MinimalityCertificate minimality;
    std::optional<TransitivityEvidence> transitivity;
    int depth = 0;
};

ComponentReport component_report(const DiagramSide& side, int depth);

// Minimum number of levels below k at which the forward reach sets of two
// vertices intersect; a quantitative connectivity modulus. Unknown(cap) is
// "no meeting as far as we looked"; Infinite is proven by support-cycle
// detection on stationary sources.
struct MeetResult {
    enum class Kind { Value, Unknown, Infinite };
    Kind kind = Kind::Unknown;
    int value = -1;
    int cap = 0;
};

MeetResult meet_depth(const BiInfiniteDiagram& d, long k, int v, int w, int cap);
MeetResult meet_depth_max(const BiInfiniteDiagram& d, long k, int cap);

}  // namespace brattelikit

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mmskit/instance.hpp"
#include "mmskit/oracle.hpp"

namespace mmskit {

struct PipelineOptions {
    OracleOptions oracle;
    /// Execution policy for per-agent oracle loops.
    Execution exec = Execution::parallel;
};

/// perm[i][j-1] is the input good that is agent i's j-th most valuable (ties: lower index first).
struct OrderMap {
    std::vector<std::vector<int>> perm;

    static OrderMap identity(int n, int m);
};

struct Ordered {
    Instance instance;
    OrderMap map;
};

/// Sorts every agent's row into non-increasing order independently.
Ordered order(const Instance& inst);

/// Turns an allocation of order(original) into one of `original` where every agent values her
/// bundle at least as much as before: slots are scanned in increasing ordered index and the
/// owner of slot j takes her most valuable remaining original good. Unowned slots end up in
/// the unassigned pool.
Allocation lift_ordered_allocation(const Instance& original, const OrderMap& map,
                                   const Allocation& ordered_alloc);

/// Rescales every witness bundle of every agent's MMS partition to value 1.
/// Throws DomainError if some agent has MMS 0.
Instance normalize(const Instance& inst, const PipelineOptions& options = {});

enum class RuleId { R1 = 1, R2 = 2, R3 = 3, R4 = 4, R5 = 5 };

std::string to_string(RuleId rule);

/// The good indices a rule hands out when n agents remain; may exceed m (dummy goods).
std::vector<int> rule_goods(RuleId rule, int n);

/// Restricts tie-breaking to a preferred set of agents (1-based indices of the current instance).
using AgentFilter = std::function<bool(int agent)>;

/// Lowest-index agent whose value for the rule's good set is >= alpha, or nullopt. When
/// `priority` is given, eligible agents it accepts are preferred over the rest.
std::optional<int> rule_applicable(const Instance& inst, RuleId rule, const Rational& alpha,
                                   const AgentFilter& priority = {});

/// True iff none of R1..R4 applies at alpha.
bool is_irreducible(const Instance& inst, const Rational& alpha);

enum class StepKind { R1, R2, R3, R4, R5, BagAward, ZeroMms };

std::string to_string(StepKind kind);
StepKind step_kind(RuleId rule);

struct TraceStep {
    StepKind kind;
    int agent;        // original agent id
    Bundle goods;     // good ids of the trace's base space
    Rational threshold;
};

/// Removal log plus the index bookkeeping needed to lift allocations. Row k of the current
/// instance is original agent agents[k-1]; column g is base good goods[g-1]. Inside `reduce`
/// the base space is the ordered input, mapped back through `base_order`.
struct ReductionTrace {
    std::vector<TraceStep> steps;
    /// Per original agent, the factor 1/MMS_i applied by `reduce` (0 for stripped zero-MMS agents).
    std::vector<Rational> scaling;
    std::vector<int> agents;
    std::vector<int> goods;
    OrderMap base_order;

    static ReductionTrace identity(int n, int m);
};

/// Removes `agent` and the listed goods (current indices; indices past m are dummies and are
/// dropped) from the instance, appends a step, and compacts the remaining goods in order.
Instance remove_award(const Instance& inst, int agent, std::span<const int> goods, StepKind kind,
                      const Rational& threshold, ReductionTrace& trace);

/// Applies a rule that rule_applicable reported for `agent`. Throws ContractViolation otherwise.
Instance apply_rule(const Instance& inst, RuleId rule, int agent, const Rational& alpha,
                    ReductionTrace& trace);

struct Reduced {
    Instance instance;
    ReductionTrace trace;
};

/// Orders the instance, scales every row to MMS 1 (zero-MMS agents are stripped with an empty
/// award), then applies R1..R4 at 3/4 + epsilon, always the smallest applicable rule, until the
/// instance is irreducible.
Reduced reduce(const Instance& inst, const Rational& epsilon, const PipelineOptions& options = {});

/// order(normalize(reduce(inst, epsilon))) together with everything needed to lift back.
struct DeltaOni {
    Instance instance;    // ordered, normalized, irreducible
    OrderMap order;       // final ordering, relative to `normalized`
    Instance normalized;  // normalize(reduced)
    ReductionTrace trace;
    Rational epsilon;
};

DeltaOni to_delta_oni(const Instance& inst, const Rational& epsilon,
                      const PipelineOptions& options = {});

/// Lifts an allocation of oni.instance to the input instance: undoes the final ordering,
/// re-attaches the reduction awards, and undoes the initial ordering.
Allocation lift_allocation(const DeltaOni& oni, const Instance& original, const Allocation& inner);

}  // namespace mmskit

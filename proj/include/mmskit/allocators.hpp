#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmskit/instance.hpp"
#include "mmskit/transforms.hpp"

namespace mmskit {

/// Working state of a bag-filling run. Bags hold real goods only (dummies are dropped).
struct BagState {
    std::vector<Bundle> bags;
    std::vector<char> open;  // open[k] is false once bag k was awarded
    Bundle pool;             // goods that may still be added to a bag
    std::map<int, Bundle> satisfied;

    /// True iff the bags, the pool and the satisfied bundles partition goods 1..m.
    bool is_partition(int m) const;
};

struct AgentClassification {
    std::vector<int> n1;
    std::vector<int> n2;
    std::vector<int> n1_1;
    std::vector<int> n1_2;

    bool in_n1_1(int agent) const;
    /// Members of N¹₂ ∪ N², the priority class of approx_mms2.
    bool in_n1_2_or_n2(int agent) const;
};

/// B_k = {k, 2n-k+1} for k = 1..n, dropping indices past m.
std::vector<Bundle> b_bags(int n, int m);
/// C_k = {k, 2n-k+1, 2n+k} for k = 1..n, dropping indices past m.
std::vector<Bundle> c_bags(int n, int m);

/// Computed once on the δ-ONI instance. Throws ContractViolation if the instance is not
/// ordered or m < 2n.
AgentClassification classify_agents(const Instance& inst, const Rational& delta);

/// True iff |N¹₁|·(1/4 + δ/3) ≤ n·(1/4 − δ), i.e. the approx_mms1 branch.
bool small_n1_1(const AgentClassification& cls, int n, const Rational& delta);

/// One award made by an allocator, in the allocator's input ids.
struct AwardEvent {
    StepKind kind;
    int agent;
    Bundle goods;
    Rational threshold;
    /// Remaining agents that valued the bundle at >= threshold when it was awarded.
    std::vector<int> eligible;
    bool priority_used = false;
};

struct AllocatorLog {
    std::vector<AwardEvent> events;
    /// Goods added to bags during filling.
    std::uint64_t goods_added = 0;
};

/// Plain bag filling with B-bags {k, 2n-k+1}. Lowest bag first, then lowest agent.
/// Throws GuaranteeViolation when the pool runs dry.
Allocation bag_fill(const Instance& inst, const Rational& alpha, AllocatorLog* log = nullptr);

/// Bag filling at 3/4+δ with priority to N¹₁.
Allocation approx_mms1(const Instance& inst, const Rational& delta, AllocatorLog* log = nullptr);
Allocation approx_mms1(const Instance& inst, const Rational& delta, const AgentClassification& cls,
                       AllocatorLog* log = nullptr);

/// B-bag awards, R5, R2/R3, then C-bag filling at 3/4+δ with priority to N¹₂ ∪ N².
Allocation approx_mms2(const Instance& inst, const Rational& delta, AllocatorLog* log = nullptr);
Allocation approx_mms2(const Instance& inst, const Rational& delta, const AgentClassification& cls,
                       AllocatorLog* log = nullptr);

inline const Rational kDefaultDelta{3, 956};
/// Largest factor the driver accepts: 3/4 + 3/3836.
inline const Rational kMaxAlpha = Rational(3, 4) + Rational(3, 3836);

enum class Branch { bag_fill, approx_mms1, approx_mms2 };
std::string to_string(Branch branch);

struct SolveOptions {
    PipelineOptions pipeline;
    std::optional<Rational> delta;  // defaults to 3/956
};

/// Number of times each step kind fired during one solve, indexed by StepKind.
using StepCounters = std::array<std::uint64_t, 7>;

struct Solution {
    Allocation allocation;   // over the input instance
    Branch branch = Branch::bag_fill;
    AgentClassification classification;
    StepCounters counters{};
    int reduced_agents = 0;  // agents left after reduce
};

/// Full pipeline. For alpha <= 3/4 the instance is reduced at 3/4 and bag-filled at 3/4.
/// Throws DomainError for alpha <= 0 or alpha > 3/4 + 3/3836.
Solution main_approx_mms(const Instance& inst, const Rational& alpha, const SolveOptions& options = {});

}  // namespace mmskit

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmskit/instance.hpp"
#include "mmskit/parallel.hpp"

namespace mmskit {

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;
inline constexpr int kDefaultExhaustiveCap = 12;

struct OracleOptions {
    /// Branch nodes the search may expand before giving up with BudgetExceeded.
    std::uint64_t node_budget = kDefaultNodeBudget;
};

/// Budget from the MMSKIT_BUDGET environment variable, or the default when unset.
OracleOptions oracle_options_from_env();

struct MmsResult {
    Rational value;
    /// Exactly d bundles of instance good ids; the minimum bundle value equals `value`.
    Partition witness;
    std::uint64_t nodes = 0;
};

/// Exact MMS^d of `subset` for `agent` by branch and bound.
/// Throws DomainError for d < 1, BoundsError for bad indices, BudgetExceeded past the node budget.
MmsResult mms(const Instance& inst, int agent, int d, const Bundle& subset,
              const OracleOptions& options = {});

/// MMS_i of the whole instance (d = n, all goods).
MmsResult mms(const Instance& inst, int agent, const OracleOptions& options = {});

/// Exact MMS^d of a bare value list. Witness ids are 1-based positions in `values`.
MmsResult mms_of_values(std::span<const Rational> values, int d, const OracleOptions& options = {});

/// MMS_i for every agent of the instance, one oracle call per agent.
std::vector<MmsResult> mms_all(const Instance& inst, const OracleOptions& options = {},
                               Execution exec = Execution::parallel);

struct ExhaustiveOptions {
    int cap = kDefaultExhaustiveCap;
    Execution exec = Execution::parallel;
};

/// Reference oracle: enumerates all d^|subset| assignment vectors. The witness is the
/// lexicographically first optimal assignment, identical for serial and parallel execution.
/// Throws BudgetExceeded when |subset| > cap.
MmsResult mms_exhaustive(const Instance& inst, int agent, int d, const Bundle& subset,
                         const ExhaustiveOptions& options = {});

/// Integer image of a value list: values[g] == weights[g] / scale, scale = lcm of denominators.
struct ScaledValues {
    std::vector<mpz_class> weights;
    mpz_class scale = 1;
};
ScaledValues scale_to_integers(std::span<const Rational> values);

}  // namespace mmskit

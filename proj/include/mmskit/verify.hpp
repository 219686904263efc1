#pragma once

#include <string>
#include <vector>

#include "mmskit/instance.hpp"
#include "mmskit/json_io.hpp"
#include "mmskit/transforms.hpp"

namespace mmskit {

struct AgentVerdict {
    Rational mms;
    Rational received;
    bool ok = false;
};

struct VerificationReport {
    Rational alpha;
    std::vector<AgentVerdict> agents;
    bool pass = false;
};

/// Exact check of v_i(A_i) >= alpha * MMS_i for every agent. Throws ContractViolation on a
/// malformed allocation and BudgetExceeded when the oracle gives up.
VerificationReport check_alpha_mms(const Instance& inst, const Allocation& alloc, const Rational& alpha,
                                   const PipelineOptions& options = {});

/// {"alpha":"p/q","agents":[{"mms":"p/q","received":"p/q","ok":bool}],"pass":bool}
io::Json report_to_json(const VerificationReport& report);

struct CheckResult {
    bool ok = true;
    /// Names the first failing predicate; empty when ok.
    std::string diagnostic;
};

/// Ordered, normalized (MMS exactly 1 and row total exactly n), and none of R1..R4 applicable at 3/4+delta.
CheckResult check_oni(const Instance& inst, const Rational& delta, const PipelineOptions& options = {});

struct LemmaReport {
    bool ok = true;
    std::vector<std::string> failures;
    /// Number of individual implications that were actually exercised (non-vacuous).
    int checked = 0;
};

/// Pair bound on B-bags, plus (when the instance is (3/4+delta)-irreducible) m >= 2n and the
/// 1/12+delta bound on good 2n+1 for agents with an overfull B-bag. Certifies that the instance
/// is ordered and normalized first and throws ContractViolation otherwise.
LemmaReport check_structural_lemmas(const Instance& inst, const Rational& delta,
                                    const PipelineOptions& options = {});

/// Same predicates without certifying the preconditions.
LemmaReport check_structural_lemmas_uncertified(const Instance& inst, const Rational& delta);

/// With R1..R3 inapplicable at alpha: v(k) < alpha, v(k) < alpha/3 past 2n, v(k) < alpha/4 past 3n.
/// Throws ContractViolation if one of R1..R3 applies.
LemmaReport check_rule_value_bounds(const Instance& inst, const Rational& alpha);

/// `after` has the agents of `before` minus `removed_agent`, in the same order. True iff every
/// survivor's MMS in `after` is at least factor times her MMS in `before`.
bool check_reduction_validity(const Instance& before, const Instance& after, int removed_agent,
                              const Rational& factor = Rational(1), const PipelineOptions& options = {});

/// For |S| = 2k with k < n and x = max(0, max_{g in S} v(g) - MMS/2):
/// MMS^{n-k}(M \ S) >= MMS^n(M) - 2x.
bool check_sequence_reduction(const Instance& inst, int agent, const Bundle& removed,
                              const PipelineOptions& options = {});

}  // namespace mmskit

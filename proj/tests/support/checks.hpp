#pragma once

#include <string>
#include <vector>

#include "mmskit/allocators.hpp"
#include "mmskit/transforms.hpp"

namespace testsupport {

/// delta = 4 eps / (1 - 4 eps), the irreducibility margin after normalizing a reduction at 3/4 + eps.
mmskit::Rational delta_for(const mmskit::Rational& eps);

/// Every bundle of `ordered_alloc` is worth at least as much to its owner after lifting to `original`.
/// Returns an empty string on success, otherwise a description of the first failure.
std::string check_ordered_lift(const mmskit::Instance& original, const mmskit::Ordered& ordered,
                               const mmskit::Allocation& ordered_alloc);

/// Lifts `inner` through the pipeline and checks, for every original agent i:
///  - agents removed by a rule get v_i >= threshold * MMS_i,
///  - survivors get v_i >= (1 - 4 eps) * MMS_i * v'_i(inner bundle) in the delta-ONI instance.
std::string check_pipeline_lift(const mmskit::Instance& original, const mmskit::DeltaOni& oni,
                                const mmskit::Allocation& inner);

/// Replays an allocator log against the instance it ran on: each winner is eligible and values
/// her bundle at >= the threshold; where a priority class applies, a non-priority winner means
/// no eligible agent was in the class; without priority the winner is the lowest eligible agent.
std::string replay_log(const mmskit::Instance& inst, const mmskit::AllocatorLog& log, mmskit::Branch branch,
                       const mmskit::AgentClassification& cls);

}  // namespace testsupport

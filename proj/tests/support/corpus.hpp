#pragma once

#include <cstdint>
#include <vector>

#include "mmskit/gen.hpp"

namespace testsupport {

/// Seeded corpus cycling through the four families; n in [2,6], m in [n,18], grid 100.
/// Entry k draws n from its own stream so the goods range can start at n.
std::vector<mmskit::GenSpec> mixed_corpus(int count, std::uint64_t base_seed);

/// Same shape with smaller instances (n in [2,4], m in [n,10]) for oracle-heavy checks.
std::vector<mmskit::GenSpec> small_corpus(int count, std::uint64_t base_seed);

}  // namespace testsupport

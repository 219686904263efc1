#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mmskit/instance.hpp"

namespace mmskit::io {

using Json = nlohmann::json;

/// {"n": int, "m": int, "values": [[value,...],...]}; a value is a JSON integer or a "p/q" string.
Instance instance_from_json(const Json& j);
/// Integers are written as JSON numbers when they fit in 64 bits, everything else as "p/q".
Json instance_to_json(const Instance& inst);

/// {"bundles": [[goods...],...], "unassigned": [goods...]}, 1-based good ids.
Allocation allocation_from_json(const Json& j);
Json allocation_to_json(const Allocation& alloc);

Json partition_to_json(const Partition& p);
Json bundle_to_json(const Bundle& b);
Bundle bundle_from_json(const Json& j);

Rational rational_from_json(const Json& j);
/// Always a "p/q" string.
Json rational_to_json(const Rational& r);

Json read_json_file(const std::filesystem::path& path);
/// Writes `j.dump(2)` plus a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace mmskit::io

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mmskit/instance.hpp"
#include "mmskit/json_io.hpp"

namespace mmskit {

/// std::mt19937_64 (output sequence fixed by the standard) with value-range reduction done by rejection sampling, so draws do not depend
/// on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform integer in [lo, hi]; requires lo <= hi.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    /// Fisher-Yates, last position first.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

enum class Family { uniform, correlated, heavy_pairs, heavy_singles };

std::string to_string(Family family);
/// Throws DomainError for an unknown name.
Family family_from_string(const std::string& name);

struct GenSpec {
    std::uint64_t seed = 0;
    int n_min = 2;
    int n_max = 2;
    int m_min = 4;
    int m_max = 4;
    Family family = Family::uniform;
    int grid = 100;
};

/// Throws DomainError on empty ranges, n < 1, m < 1, or grid < 1 (heavy-pairs needs grid >= 100,
/// heavy-singles grid >= 4).
void validate(const GenSpec& spec);

/// Pure function of the spec.
Instance generate(const GenSpec& spec);

io::Json spec_to_json(const GenSpec& spec);
GenSpec spec_from_json(const io::Json& j);

struct CorpusEntry {
    GenSpec spec;
    std::string path;  // relative to the manifest's directory
};

/// Entry i uses seed base.seed + i.
std::vector<GenSpec> corpus_specs(const GenSpec& base, int count);

/// Writes instance_NNNN.json files plus manifest.json into `dir`; returns the manifest path.
std::filesystem::path write_corpus(const std::filesystem::path& dir, const std::vector<GenSpec>& specs);

/// {"entries":[{"spec":{...},"path":"..."}]}
std::vector<CorpusEntry> read_manifest(const std::filesystem::path& manifest);
io::Json manifest_to_json(const std::vector<CorpusEntry>& entries);

}  // namespace mmskit

#include "mmskit/gen.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "mmskit/errors.hpp"

namespace mmskit {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw DomainError("Rng::uniform: empty range");
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next());  // full 64-bit range
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t threshold = (0 - range) % range;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return lo + static_cast<std::int64_t>(r % range);
    }
}

std::string to_string(Family family) {
    switch (family) {
        case Family::uniform: return "uniform";
        case Family::correlated: return "correlated";
        case Family::heavy_pairs: return "heavy-pairs";
        case Family::heavy_singles: return "heavy-singles";
    }
    return "?";
}

Family family_from_string(const std::string& name) {
    for (Family f : {Family::uniform, Family::correlated, Family::heavy_pairs, Family::heavy_singles}) {
        if (to_string(f) == name) return f;
    }
    throw DomainError("unknown family '" + name + "' (uniform, correlated, heavy-pairs, heavy-singles)");
}

void validate(const GenSpec& spec) {
    if (spec.n_min < 1 || spec.n_min > spec.n_max) throw DomainError("agent range must be nonempty with n >= 1");
    if (spec.m_min < 1 || spec.m_min > spec.m_max) throw DomainError("goods range must be nonempty with m >= 1");
    if (spec.grid < 1) throw DomainError("grid must be >= 1");
    if (spec.family == Family::heavy_pairs && spec.grid < 100) throw DomainError("heavy-pairs needs grid >= 100");
    if (spec.family == Family::heavy_singles && spec.grid < 4) throw DomainError("heavy-singles needs grid >= 4");
}

namespace {

using Row = std::vector<std::int64_t>;

Row uniform_row(Rng& rng, int m, int grid) {
    Row row(static_cast<std::size_t>(m));
    for (auto& v : row) v = rng.uniform(0, grid);
    return row;
}

// One bundle of h1 plus dust, n-2 bundles of {67, 33}, and {34, 33, 33}; every bundle sums to
// 100 units, so MMS is exactly 100 units and B_1 = {h1, 33} is overfull after ordering.
Row heavy_pairs_row(Rng& rng, int n, int dust, std::int64_t unit) {
    const std::int64_t h1 = 68 + rng.uniform(0, 2);
    const std::int64_t total = 100 - h1;
    const std::int64_t cap = 75 - h1;  // keeps {1, 2n+1} below 3/4
    Row pieces(static_cast<std::size_t>(dust), total / dust);
    for (std::int64_t r = 0; r < total % dust; ++r) ++pieces[static_cast<std::size_t>(r)];
    for (int t = 0; t < dust; ++t) {
        const auto a = static_cast<std::size_t>(rng.uniform(0, dust - 1));
        const auto b = static_cast<std::size_t>(rng.uniform(0, dust - 1));
        if (a != b && pieces[a] > 0 && pieces[b] < cap) {
            --pieces[a];
            ++pieces[b];
        }
    }
    Row row{h1};
    for (int k = 0; k < n - 2; ++k) row.push_back(67);
    for (int k = 0; k < n - 2; ++k) row.push_back(33);
    row.insert(row.end(), {34, 33, 33});
    row.insert(row.end(), pieces.begin(), pieces.end());
    for (auto& v : row) v *= unit;
    rng.shuffle(row);
    return row;
}

// n goods of 2x and 2n goods of x (x = grid/4), zeros elsewhere: every MMS bundle is {2x, x, x}.
Row heavy_singles_row(Rng& rng, int n, int m, int grid) {
    const std::int64_t x = grid / 4;
    Row row;
    for (int k = 0; k < n; ++k) row.push_back(2 * x);
    for (int k = 0; k < 2 * n; ++k) row.push_back(x);
    row.resize(static_cast<std::size_t>(m), 0);
    rng.shuffle(row);
    return row;
}

Instance to_instance(int n, int m, const std::vector<Row>& rows) {
    std::vector<std::vector<Rational>> values;
    for (const auto& r : rows) values.emplace_back(r.begin(), r.end());
    return Instance(n, m, std::move(values));
}

}  // namespace

Instance generate(const GenSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const int n = static_cast<int>(rng.uniform(spec.n_min, spec.n_max));
    int m = static_cast<int>(rng.uniform(spec.m_min, spec.m_max));
    std::vector<Row> rows;
    switch (spec.family) {
        case Family::uniform:
            for (int i = 0; i < n; ++i) rows.push_back(uniform_row(rng, m, spec.grid));
            break;
        case Family::correlated: {
            const Row base = uniform_row(rng, m, spec.grid);
            const std::int64_t w = std::max(1, spec.grid / 10);
            for (int i = 0; i < n; ++i) {
                Row row(base);
                for (auto& v : row) v = std::clamp<std::int64_t>(v + rng.uniform(-w, w), 0, spec.grid);
                rows.push_back(std::move(row));
            }
            break;
        }
        case Family::heavy_pairs: {
            if (n == 1) {
                rows.push_back(uniform_row(rng, m, spec.grid));
                break;
            }
            const int dust = std::max(6, m - 2 * n);
            m = 2 * n + dust;
            const std::int64_t unit = spec.grid / 100;
            for (int i = 0; i < n; ++i) {
                if (rng.uniform(0, 7) == 0) {
                    rows.push_back(uniform_row(rng, m, spec.grid));
                } else {
                    rows.push_back(heavy_pairs_row(rng, n, dust, unit));
                }
            }
            break;
        }
        case Family::heavy_singles: {
            m = std::max(m, std::min(3 * n, spec.m_max));
            for (int i = 0; i < n; ++i) {
                if (rng.uniform(0, 4) < 4 && m >= 3 * n) {
                    rows.push_back(heavy_singles_row(rng, n, m, spec.grid));
                } else {
                    rows.push_back(uniform_row(rng, m, spec.grid));
                }
            }
            break;
        }
    }
    return to_instance(n, m, rows);
}

io::Json spec_to_json(const GenSpec& spec) {
    return {{"seed", spec.seed},
            {"agents", {spec.n_min, spec.n_max}},
            {"goods", {spec.m_min, spec.m_max}},
            {"family", to_string(spec.family)},
            {"grid", spec.grid}};
}

GenSpec spec_from_json(const io::Json& j) {
    try {
        GenSpec s;
        s.seed = j.at("seed").get<std::uint64_t>();
        s.n_min = j.at("agents").at(0).get<int>();
        s.n_max = j.at("agents").at(1).get<int>();
        s.m_min = j.at("goods").at(0).get<int>();
        s.m_max = j.at("goods").at(1).get<int>();
        s.family = family_from_string(j.at("family").get<std::string>());
        s.grid = j.at("grid").get<int>();
        return s;
    } catch (const io::Json::exception& e) {
        throw ParseError(std::string("bad generator spec: ") + e.what());
    }
}

std::vector<GenSpec> corpus_specs(const GenSpec& base, int count) {
    if (count < 0) throw DomainError("count must be >= 0");
    std::vector<GenSpec> out;
    for (int i = 0; i < count; ++i) {
        GenSpec s = base;
        s.seed = base.seed + static_cast<std::uint64_t>(i);
        out.push_back(s);
    }
    return out;
}

io::Json manifest_to_json(const std::vector<CorpusEntry>& entries) {
    io::Json list = io::Json::array();
    for (const auto& e : entries) list.push_back({{"spec", spec_to_json(e.spec)}, {"path", e.path}});
    return {{"entries", list}};
}

std::filesystem::path write_corpus(const std::filesystem::path& dir, const std::vector<GenSpec>& specs) {
    std::filesystem::create_directories(dir);
    std::vector<CorpusEntry> entries;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "instance_%04zu.json", i);
        io::write_json_file(dir / name, io::instance_to_json(generate(specs[i])));
        entries.push_back({specs[i], name});
    }
    const auto manifest = dir / "manifest.json";
    io::write_json_file(manifest, manifest_to_json(entries));
    return manifest;
}

std::vector<CorpusEntry> read_manifest(const std::filesystem::path& manifest) {
    const io::Json j = io::read_json_file(manifest);
    std::vector<CorpusEntry> out;
    try {
        for (const auto& e : j.at("entries")) {
            out.push_back({spec_from_json(e.at("spec")), e.at("path").get<std::string>()});
        }
    } catch (const io::Json::exception& e) {
        throw ParseError(std::string("bad manifest: ") + e.what());
    }
    return out;
}

}  // namespace mmskit

#include "support/brute.hpp"

#include <algorithm>

namespace testsupport {

namespace {

void dfs(std::span<const Rational> values, std::size_t g, std::vector<Rational>& load, Rational& best) {
    if (g == values.size()) {
        best = std::max(best, *std::min_element(load.begin(), load.end()));
        return;
    }
    for (auto& l : load) {
        l += values[g];
        dfs(values, g + 1, load, best);
        l -= values[g];
    }
}

}  // namespace

Rational brute_mms(std::span<const Rational> values, int d) {
    std::vector<Rational> load(static_cast<std::size_t>(d));
    Rational best;
    dfs(values, 0, load, best);
    return best;
}

Rational brute_mms(const Instance& inst, int agent) { return brute_mms(inst.row(agent), inst.n()); }

Instance random_instance(mmskit::Rng& rng, int n, int m, int maxv) {
    std::vector<std::vector<Rational>> v(static_cast<std::size_t>(n));
    for (auto& row : v) {
        for (int g = 0; g < m; ++g) row.emplace_back(rng.uniform(0, maxv));
    }
    return Instance(n, m, std::move(v));
}

Instance random_rational_instance(mmskit::Rng& rng, int n, int m, int maxv, int maxq) {
    std::vector<std::vector<Rational>> v(static_cast<std::size_t>(n));
    for (auto& row : v) {
        for (int g = 0; g < m; ++g) row.emplace_back(rng.uniform(0, maxv), rng.uniform(1, maxq));
    }
    return Instance(n, m, std::move(v));
}

Rational bundle_value(const Instance& inst, int agent, const mmskit::Bundle& b) {
    return mmskit::value(inst, agent, b);
}

}  // namespace testsupport

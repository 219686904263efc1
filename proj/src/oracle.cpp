#include "mmskit/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "mmskit/errors.hpp"

namespace mmskit {

namespace {

// Weight arithmetic shared by the int64 fast path and the GMP fallback.
template <class W>
W weight_from(const mpz_class& z);
template <>
std::int64_t weight_from<std::int64_t>(const mpz_class& z) { return z.get_si(); }
template <>
mpz_class weight_from<mpz_class>(const mpz_class& z) { return z; }

mpz_class to_mpz(std::int64_t w) { return mpz_class(static_cast<long>(w)); }
const mpz_class& to_mpz(const mpz_class& w) { return w; }

template <class W>
std::vector<W> convert(const std::vector<mpz_class>& weights) {
    std::vector<W> out;
    out.reserve(weights.size());
    for (const auto& w : weights) out.push_back(weight_from<W>(w));
    return out;
}

/// True when every intermediate of a search over `weights` with d bins fits in int64.
bool fits_int64(const std::vector<mpz_class>& weights, int d) {
    mpz_class total = 0;
    for (const auto& w : weights) total += w;
    const mpz_class limit(static_cast<long>(std::numeric_limits<std::int64_t>::max() / 4));
    return total * (d + 1) < limit;
}

// Max-min multiway partitioning by depth-first branch and bound. Goods arrive sorted by
// non-increasing weight; each level assigns the next good to one bin.
template <class W>
class PartitionSearch {
public:
    PartitionSearch(std::vector<W> weights, int bins, std::uint64_t budget)
        : w_(std::move(weights)), d_(bins), budget_(budget),
          load_(static_cast<std::size_t>(bins), W(0)), bin_of_(w_.size(), 0),
          suffix_(w_.size() + 1, W(0)) {
        for (std::size_t t = w_.size(); t-- > 0;) suffix_[t] = suffix_[t + 1] + w_[t];
        upper_ = suffix_[0] / W(d_);
    }

    void run() {
        seed_greedy();
        if (best_ < upper_) dfs(0);
    }

    const W& best() const { return best_; }
    const std::vector<int>& best_bins() const { return best_bin_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    // Largest good to the currently lightest bin (lowest index on ties).
    void seed_greedy() {
        std::vector<W> load(static_cast<std::size_t>(d_), W(0));
        best_bin_.assign(w_.size(), 0);
        for (std::size_t t = 0; t < w_.size(); ++t) {
            const auto lightest = static_cast<std::size_t>(
                std::min_element(load.begin(), load.end()) - load.begin());
            load[lightest] += w_[t];
            best_bin_[t] = static_cast<int>(lightest);
        }
        best_ = *std::min_element(load.begin(), load.end());
    }

    // Bins sorted by (load, index).
    void sorted_bins(std::vector<int>& order) const {
        order.resize(static_cast<std::size_t>(d_));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return load_[static_cast<std::size_t>(a)] < load_[static_cast<std::size_t>(b)];
        });
    }

    // Best conceivable final minimum if the remaining weight were divisible: raise the
    // lowest bins to a common level.
    W water_level(const std::vector<int>& order, const W& remaining) const {
        W prefix(0);
        for (int j = 1; j <= d_; ++j) {
            prefix += load_[static_cast<std::size_t>(order[static_cast<std::size_t>(j - 1)])];
            if (j == d_) break;
            const W& next = load_[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
            if (prefix + remaining <= next * W(j)) return (prefix + remaining) / W(j);
        }
        return (prefix + remaining) / W(d_);
    }

    void dfs(std::size_t t) {
        if (++nodes_ > budget_) {
            throw BudgetExceeded("oracle budget exceeded (" + std::to_string(budget_) + " nodes)");
        }
        if (t == w_.size()) {
            const W& low = *std::min_element(load_.begin(), load_.end());
            if (best_ < low) {
                best_ = low;
                best_bin_ = bin_of_;
            }
            return;
        }
        std::vector<int> order;
        sorted_bins(order);
        if (water_level(order, suffix_[t]) <= best_) return;
        // Every bin at or below the incumbent still needs at least one more good.
        std::size_t starving = 0;
        for (const auto& l : load_) starving += (l <= best_) ? 1 : 0;
        if (starving > w_.size() - t) return;

        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            const auto b = static_cast<std::size_t>(order[pos]);
            if (pos > 0 && load_[static_cast<std::size_t>(order[pos - 1])] == load_[b]) continue;
            load_[b] += w_[t];
            bin_of_[t] = static_cast<int>(b);
            dfs(t + 1);
            load_[b] -= w_[t];
            if (best_ == upper_) return;
        }
    }

    std::vector<W> w_;
    int d_;
    std::uint64_t budget_;
    std::vector<W> load_;
    std::vector<int> bin_of_;
    std::vector<W> suffix_;
    W upper_{0};
    W best_{0};
    std::vector<int> best_bin_;
    std::uint64_t nodes_ = 0;
};

struct RawResult {
    mpz_class best;
    std::vector<int> bin_of;  // per input position
    std::uint64_t nodes = 0;
};

template <class W>
RawResult run_search(const std::vector<mpz_class>& weights, int d, std::uint64_t budget) {
    // Positive goods sorted by non-increasing weight (stable); zero goods go to bin 0.
    std::vector<std::size_t> order;
    for (std::size_t g = 0; g < weights.size(); ++g) {
        if (sgn(weights[g]) > 0) order.push_back(g);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    std::vector<mpz_class> sorted;
    sorted.reserve(order.size());
    for (auto g : order) sorted.push_back(weights[g]);

    PartitionSearch<W> search(convert<W>(sorted), d, budget);
    search.run();

    RawResult out;
    out.best = to_mpz(search.best());
    out.bin_of.assign(weights.size(), 0);
    for (std::size_t t = 0; t < order.size(); ++t) out.bin_of[order[t]] = search.best_bins()[t];
    out.nodes = search.nodes();
    return out;
}

// Plain enumeration of assignment vectors in lexicographic order, no pruning.
template <class W>
class Enumerator {
public:
    Enumerator(const std::vector<W>& weights, int bins) : w_(weights), d_(bins) {}

    // Enumerates all completions of the fixed prefix bin_of[0..start). Keeps the
    // lexicographically first assignment attaining the strict maximum.
    void run(std::vector<int> prefix) {
        load_.assign(static_cast<std::size_t>(d_), W(0));
        bin_of_ = std::move(prefix);
        for (std::size_t t = 0; t < bin_of_.size(); ++t) {
            load_[static_cast<std::size_t>(bin_of_[t])] += w_[t];
        }
        const std::size_t start = bin_of_.size();
        bin_of_.resize(w_.size(), 0);
        found_ = false;
        dfs(start);
    }

    bool found() const { return found_; }
    const W& best() const { return best_; }
    const std::vector<int>& best_bins() const { return best_bin_; }

private:
    void dfs(std::size_t t) {
        if (t == w_.size()) {
            const W& low = *std::min_element(load_.begin(), load_.end());
            if (!found_ || best_ < low) {
                found_ = true;
                best_ = low;
                best_bin_ = bin_of_;
            }
            return;
        }
        for (int b = 0; b < d_; ++b) {
            load_[static_cast<std::size_t>(b)] += w_[t];
            bin_of_[t] = b;
            dfs(t + 1);
            load_[static_cast<std::size_t>(b)] -= w_[t];
        }
    }

    const std::vector<W>& w_;
    int d_;
    std::vector<W> load_;
    std::vector<int> bin_of_;
    bool found_ = false;
    W best_{0};
    std::vector<int> best_bin_;
};

template <class W>
RawResult run_enumeration(const std::vector<mpz_class>& weights, int d, Execution exec) {
    const auto w = convert<W>(weights);
    const std::size_t k = w.size();
    RawResult out;
    if (exec == Execution::serial || max_threads() < 2) {
        Enumerator<W> e(w, d);
        e.run({});
        out.best = to_mpz(e.best());
        out.bin_of = e.best_bins();
        return out;
    }

    // Split on the first p goods; prefixes are numbered in lexicographic order so the
    // sequential combine below picks the same witness as the serial enumeration.
    std::size_t p = 0;
    std::size_t prefixes = 1;
    while (p < k && prefixes < 256) {
        prefixes *= static_cast<std::size_t>(d);
        ++p;
    }
    struct Slot {
        bool found = false;
        mpz_class best;
        std::vector<int> bins;
    };
    std::vector<Slot> slots(prefixes);
    for_each_index(prefixes, Execution::parallel, [&](std::size_t id) {
        std::vector<int> prefix(p, 0);
        std::size_t rest = id;
        for (std::size_t t = p; t-- > 0;) {
            prefix[t] = static_cast<int>(rest % static_cast<std::size_t>(d));
            rest /= static_cast<std::size_t>(d);
        }
        Enumerator<W> e(w, d);
        e.run(std::move(prefix));
        slots[id] = Slot{e.found(), to_mpz(e.best()), e.best_bins()};
    });
    bool have = false;
    for (auto& s : slots) {
        if (s.found && (!have || out.best < s.best)) {
            have = true;
            out.best = s.best;
            out.bin_of = std::move(s.bins);
        }
    }
    return out;
}

Partition to_partition(const std::vector<int>& bin_of, int d, std::span<const int> ids) {
    std::vector<std::vector<int>> goods(static_cast<std::size_t>(d));
    for (std::size_t t = 0; t < bin_of.size(); ++t) {
        goods[static_cast<std::size_t>(bin_of[t])].push_back(ids[t]);
    }
    Partition p;
    p.bundles.reserve(goods.size());
    for (auto& g : goods) p.bundles.emplace_back(std::move(g));
    return p;
}

void check_d(int d) {
    if (d < 1) throw DomainError("MMS needs d >= 1, got d = " + std::to_string(d));
}

std::vector<Rational> subset_values(const Instance& inst, int agent, const Bundle& subset) {
    const auto row = inst.row(agent);
    std::vector<Rational> values;
    values.reserve(subset.size());
    for (int g : subset) {
        if (g > inst.m()) throw BoundsError("good " + std::to_string(g) + " out of range");
        values.push_back(row[static_cast<std::size_t>(g - 1)]);
    }
    return values;
}

Rational unscale(const mpz_class& best, const mpz_class& scale) {
    return Rational(mpq_class(best, scale));
}

}  // namespace

ScaledValues scale_to_integers(std::span<const Rational> values) {
    ScaledValues out;
    for (const auto& v : values) {
        mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), v.get().get_den_mpz_t());
    }
    out.weights.reserve(values.size());
    for (const auto& v : values) {
        out.weights.push_back(v.get().get_num() * (out.scale / v.get().get_den()));
    }
    return out;
}

OracleOptions oracle_options_from_env() {
    OracleOptions options;
    if (const char* env = std::getenv("MMSKIT_BUDGET"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) {
            throw DomainError(std::string("MMSKIT_BUDGET must be a positive integer, got '") + env + "'");
        }
        options.node_budget = v;
    }
    return options;
}

MmsResult mms_of_values(std::span<const Rational> values, int d, const OracleOptions& options) {
    check_d(d);
    const auto scaled = scale_to_integers(values);
    const RawResult raw = fits_int64(scaled.weights, d)
                              ? run_search<std::int64_t>(scaled.weights, d, options.node_budget)
                              : run_search<mpz_class>(scaled.weights, d, options.node_budget);
    std::vector<int> ids(values.size());
    std::iota(ids.begin(), ids.end(), 1);
    return MmsResult{unscale(raw.best, scaled.scale), to_partition(raw.bin_of, d, ids), raw.nodes};
}

MmsResult mms(const Instance& inst, int agent, int d, const Bundle& subset,
              const OracleOptions& options) {
    check_d(d);
    const auto values = subset_values(inst, agent, subset);
    MmsResult r = mms_of_values(values, d, options);
    for (auto& bundle : r.witness.bundles) {
        std::vector<int> goods;
        goods.reserve(bundle.size());
        for (int pos : bundle) goods.push_back(subset.goods()[static_cast<std::size_t>(pos - 1)]);
        bundle = Bundle(std::move(goods));
    }
    return r;
}

MmsResult mms(const Instance& inst, int agent, const OracleOptions& options) {
    return mms(inst, agent, inst.n(), Bundle::range(inst.m()), options);
}

std::vector<MmsResult> mms_all(const Instance& inst, const OracleOptions& options, Execution exec) {
    std::vector<MmsResult> out(static_cast<std::size_t>(inst.n()));
    for_each_index(out.size(), exec, [&](std::size_t i) {
        out[i] = mms(inst, static_cast<int>(i) + 1, options);
    });
    return out;
}

MmsResult mms_exhaustive(const Instance& inst, int agent, int d, const Bundle& subset,
                         const ExhaustiveOptions& options) {
    check_d(d);
    const auto values = subset_values(inst, agent, subset);
    if (static_cast<int>(values.size()) > options.cap) {
        throw BudgetExceeded("exhaustive oracle cap exceeded: |subset| = " +
                             std::to_string(values.size()) + " > " + std::to_string(options.cap));
    }
    const auto scaled = scale_to_integers(values);
    const RawResult raw = fits_int64(scaled.weights, d)
                              ? run_enumeration<std::int64_t>(scaled.weights, d, options.exec)
                              : run_enumeration<mpz_class>(scaled.weights, d, options.exec);
    return MmsResult{unscale(raw.best, scaled.scale), to_partition(raw.bin_of, d, subset.goods()), 0};
}

}  // namespace mmskit

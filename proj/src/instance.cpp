#include "mmskit/instance.hpp"

#include <algorithm>
#include <string>

#include "mmskit/errors.hpp"

namespace mmskit {

Bundle::Bundle(std::initializer_list<int> goods) : Bundle(std::vector<int>(goods)) {}

Bundle::Bundle(std::vector<int> goods) : goods_(std::move(goods)) {
    std::sort(goods_.begin(), goods_.end());
    if (!goods_.empty() && goods_.front() < 1) {
        throw ContractViolation("bundle contains good index " + std::to_string(goods_.front()));
    }
    if (std::adjacent_find(goods_.begin(), goods_.end()) != goods_.end()) {
        throw ContractViolation("bundle contains a duplicate good");
    }
}

Bundle Bundle::range(int m) {
    Bundle b;
    b.goods_.resize(static_cast<std::size_t>(std::max(m, 0)));
    for (int g = 1; g <= m; ++g) b.goods_[static_cast<std::size_t>(g - 1)] = g;
    return b;
}

bool Bundle::contains(int good) const {
    return std::binary_search(goods_.begin(), goods_.end(), good);
}

void Bundle::insert(int good) {
    if (good < 1) throw ContractViolation("bundle good index must be >= 1");
    auto it = std::lower_bound(goods_.begin(), goods_.end(), good);
    if (it != goods_.end() && *it == good) throw ContractViolation("good already in bundle");
    goods_.insert(it, good);
}

Bundle Bundle::united(const Bundle& other) const {
    std::vector<int> out;
    out.reserve(size() + other.size());
    std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(out));
    return Bundle(std::move(out));
}

void Allocation::validate(int n, int m) const {
    if (static_cast<int>(bundles.size()) != n) {
        throw ContractViolation("allocation has " + std::to_string(bundles.size()) +
                                " bundles for " + std::to_string(n) + " agents");
    }
    std::vector<int> owner(static_cast<std::size_t>(m) + 1, 0);
    auto claim = [&](const Bundle& b, int who) {
        for (int g : b) {
            if (g > m) {
                throw ContractViolation("allocation references good " + std::to_string(g) +
                                        " but m = " + std::to_string(m));
            }
            if (owner[static_cast<std::size_t>(g)] != 0) {
                throw ContractViolation("good " + std::to_string(g) + " allocated twice");
            }
            owner[static_cast<std::size_t>(g)] = who;
        }
    };
    for (int i = 0; i < n; ++i) claim(bundles[static_cast<std::size_t>(i)], i + 1);
    claim(unassigned, -1);
    for (int g = 1; g <= m; ++g) {
        if (owner[static_cast<std::size_t>(g)] == 0) {
            throw ContractViolation("good " + std::to_string(g) + " missing from allocation");
        }
    }
}

void Allocation::complete() {
    if (bundles.empty()) return;
    bundles.front() = bundles.front().united(unassigned);
    unassigned = Bundle{};
}

Instance::Instance(std::vector<std::vector<Rational>> values) : values_(std::move(values)) {
    m_ = values_.empty() ? 0 : static_cast<int>(values_.front().size());
    for (const auto& row : values_) {
        if (static_cast<int>(row.size()) != m_) throw ContractViolation("ragged valuation matrix");
        for (const auto& v : row) {
            if (v.sign() < 0) throw DomainError("negative valuation " + v.to_string());
        }
    }
}

Instance::Instance(int n, int m, std::vector<std::vector<Rational>> values)
    : Instance(std::move(values)) {
    if (n < 0 || m < 0) throw DomainError("negative instance dimension");
    if (this->n() != n) {
        throw ContractViolation("expected " + std::to_string(n) + " agent rows, got " +
                                std::to_string(this->n()));
    }
    if (n > 0 && m_ != m) {
        throw ContractViolation("expected " + std::to_string(m) + " goods per row, got " +
                                std::to_string(m_));
    }
    m_ = m;
}

const Rational& Instance::at(int agent, int good) const {
    if (agent < 1 || agent > n()) throw BoundsError("agent " + std::to_string(agent) + " out of range");
    if (good < 1 || good > m_) throw BoundsError("good " + std::to_string(good) + " out of range");
    return values_[static_cast<std::size_t>(agent - 1)][static_cast<std::size_t>(good - 1)];
}

Rational Instance::value_or_zero(int agent, int good) const {
    if (good > m_) return Rational{};
    return at(agent, good);
}

std::span<const Rational> Instance::row(int agent) const {
    if (agent < 1 || agent > n()) throw BoundsError("agent " + std::to_string(agent) + " out of range");
    return values_[static_cast<std::size_t>(agent - 1)];
}

Rational value(const Instance& inst, int agent, const Bundle& bundle) {
    Rational total;
    for (int g : bundle) total += inst.at(agent, g);
    if (bundle.empty()) (void)inst.row(agent);  // still bounds-check the agent
    return total;
}

Rational value_with_dummies(const Instance& inst, int agent, std::span<const int> goods) {
    Rational total;
    for (int g : goods) total += inst.value_or_zero(agent, g);
    return total;
}

bool is_ordered(const Instance& inst) {
    for (const auto& row : inst.values()) {
        for (std::size_t g = 1; g < row.size(); ++g) {
            if (row[g - 1] < row[g]) return false;
        }
    }
    return true;
}

Instance restrict(const Instance& inst, std::span<const int> agents, std::span<const int> goods) {
    std::vector<std::vector<Rational>> values;
    values.reserve(agents.size());
    for (int i : agents) {
        std::vector<Rational> row;
        row.reserve(goods.size());
        for (int g : goods) row.push_back(inst.at(i, g));
        values.push_back(std::move(row));
    }
    return Instance(static_cast<int>(agents.size()), static_cast<int>(goods.size()), std::move(values));
}

}  // namespace mmskit

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "mmskit/rational.hpp"

namespace mmskit {

/// Sorted set of distinct 1-based good indices.
class Bundle {
public:
    Bundle() = default;
    Bundle(std::initializer_list<int> goods);
    /// Sorts and validates; throws ContractViolation on duplicates or indices < 1.
    explicit Bundle(std::vector<int> goods);

    /// Goods 1..m.
    static Bundle range(int m);

    const std::vector<int>& goods() const noexcept { return goods_; }
    std::size_t size() const noexcept { return goods_.size(); }
    bool empty() const noexcept { return goods_.empty(); }
    bool contains(int good) const;
    auto begin() const noexcept { return goods_.begin(); }
    auto end() const noexcept { return goods_.end(); }

    /// Inserts a good that is not yet present.
    void insert(int good);
    Bundle united(const Bundle& other) const;

    friend bool operator==(const Bundle&, const Bundle&) = default;

private:
    std::vector<int> goods_;
};

/// An ordered list of d bundles.
struct Partition {
    std::vector<Bundle> bundles;

    std::size_t size() const noexcept { return bundles.size(); }
    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Per-agent bundles plus the pool of goods nobody received.
struct Allocation {
    std::vector<Bundle> bundles;
    Bundle unassigned;

    /// Throws ContractViolation unless bundles.size() == n and all bundles together with
    /// `unassigned` partition goods 1..m exactly.
    void validate(int n, int m) const;

    /// Moves the unassigned pool into the bundle of the lowest-index agent (no-op if n = 0).
    void complete();

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// n agents, m goods, nonnegative additive valuations.
class Instance {
public:
    Instance() = default;
    /// Throws DomainError on negative entries and ContractViolation on ragged rows.
    explicit Instance(std::vector<std::vector<Rational>> values);
    Instance(int n, int m, std::vector<std::vector<Rational>> values);

    int n() const noexcept { return static_cast<int>(values_.size()); }
    int m() const noexcept { return m_; }

    /// Value of one good for one agent (both 1-based, bounds checked).
    const Rational& at(int agent, int good) const;
    /// Value of a good, or zero for indices past m (the dummy-good convention).
    Rational value_or_zero(int agent, int good) const;
    std::span<const Rational> row(int agent) const;
    const std::vector<std::vector<Rational>>& values() const noexcept { return values_; }

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    int m_ = 0;
    std::vector<std::vector<Rational>> values_;
};

/// Exact additive value of a bundle for an agent. Throws BoundsError on bad indices.
Rational value(const Instance& inst, int agent, const Bundle& bundle);

/// Sum of an agent's values over goods, treating indices past m as zero-valued dummies.
Rational value_with_dummies(const Instance& inst, int agent, std::span<const int> goods);

/// True iff every agent's row is non-increasing in the shared good order.
bool is_ordered(const Instance& inst);

/// Instance restricted to the listed agents and goods (both 1-based, kept in the given order).
Instance restrict(const Instance& inst, std::span<const int> agents, std::span<const int> goods);

}  // namespace mmskit

#include "mmskit/transforms.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mmskit/errors.hpp"

namespace mmskit {

OrderMap OrderMap::identity(int n, int m) {
    OrderMap map;
    std::vector<int> ids(static_cast<std::size_t>(m));
    std::iota(ids.begin(), ids.end(), 1);
    map.perm.assign(static_cast<std::size_t>(n), ids);
    return map;
}

Ordered order(const Instance& inst) {
    Ordered out;
    std::vector<std::vector<Rational>> values;
    values.reserve(static_cast<std::size_t>(inst.n()));
    for (int i = 1; i <= inst.n(); ++i) {
        const auto row = inst.row(i);
        std::vector<int> perm(row.size());
        std::iota(perm.begin(), perm.end(), 1);
        std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
            return row[static_cast<std::size_t>(b - 1)] < row[static_cast<std::size_t>(a - 1)];
        });
        std::vector<Rational> sorted;
        sorted.reserve(row.size());
        for (int g : perm) sorted.push_back(row[static_cast<std::size_t>(g - 1)]);
        values.push_back(std::move(sorted));
        out.map.perm.push_back(std::move(perm));
    }
    out.instance = Instance(inst.n(), inst.m(), std::move(values));
    return out;
}

Allocation lift_ordered_allocation(const Instance& original, const OrderMap& map,
                                   const Allocation& ordered_alloc) {
    const int n = original.n();
    const int m = original.m();
    if (static_cast<int>(map.perm.size()) != n) {
        throw ContractViolation("order map has " + std::to_string(map.perm.size()) +
                                " rows for " + std::to_string(n) + " agents");
    }
    for (const auto& p : map.perm) {
        if (static_cast<int>(p.size()) != m) throw ContractViolation("order map row has wrong length");
    }
    ordered_alloc.validate(n, m);

    std::vector<int> slot_owner(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 0; i < n; ++i) {
        for (int g : ordered_alloc.bundles[static_cast<std::size_t>(i)]) {
            slot_owner[static_cast<std::size_t>(g)] = i + 1;
        }
    }
    std::vector<char> taken(static_cast<std::size_t>(m) + 1, 0);
    std::vector<std::size_t> cursor(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> goods(static_cast<std::size_t>(n));
    for (int j = 1; j <= m; ++j) {
        const int owner = slot_owner[static_cast<std::size_t>(j)];
        if (owner == 0) continue;
        const auto i = static_cast<std::size_t>(owner - 1);
        const auto& perm = map.perm[i];
        // perm lists the owner's goods by non-increasing value, so the first untaken entry
        // is her most valuable remaining good.
        while (taken[static_cast<std::size_t>(perm[cursor[i]])]) ++cursor[i];
        const int g = perm[cursor[i]];
        taken[static_cast<std::size_t>(g)] = 1;
        goods[i].push_back(g);
    }
    Allocation out;
    for (auto& g : goods) out.bundles.emplace_back(std::move(g));
    std::vector<int> rest;
    for (int g = 1; g <= m; ++g) {
        if (!taken[static_cast<std::size_t>(g)]) rest.push_back(g);
    }
    out.unassigned = Bundle(std::move(rest));
    return out;
}

Instance normalize(const Instance& inst, const PipelineOptions& options) {
    const auto shares = mms_all(inst, options.oracle, options.exec);
    std::vector<std::vector<Rational>> values(inst.values());
    for (int i = 1; i <= inst.n(); ++i) {
        const auto& share = shares[static_cast<std::size_t>(i - 1)];
        if (share.value.is_zero()) {
            throw DomainError("normalize: agent " + std::to_string(i) + " has MMS 0");
        }
        auto& row = values[static_cast<std::size_t>(i - 1)];
        for (const auto& bundle : share.witness.bundles) {
            const Rational total = value(inst, i, bundle);
            for (int g : bundle) row[static_cast<std::size_t>(g - 1)] /= total;
        }
    }
    return Instance(inst.n(), inst.m(), std::move(values));
}

std::string to_string(RuleId rule) { return "R" + std::to_string(static_cast<int>(rule)); }

std::vector<int> rule_goods(RuleId rule, int n) {
    switch (rule) {
        case RuleId::R1: return {1};
        case RuleId::R2: return {2 * n - 1, 2 * n, 2 * n + 1};
        case RuleId::R3: return {3 * n - 2, 3 * n - 1, 3 * n, 3 * n + 1};
        case RuleId::R4: return {1, 2 * n + 1};
        case RuleId::R5: return {1, 2};
    }
    throw ContractViolation("unknown rule");
}

std::optional<int> rule_applicable(const Instance& inst, RuleId rule, const Rational& alpha,
                                   const AgentFilter& priority) {
    const auto goods = rule_goods(rule, inst.n());
    std::optional<int> fallback;
    for (int i = 1; i <= inst.n(); ++i) {
        if (value_with_dummies(inst, i, goods) < alpha) continue;
        if (!priority || priority(i)) return i;
        if (!fallback) fallback = i;
    }
    return fallback;
}

bool is_irreducible(const Instance& inst, const Rational& alpha) {
    for (RuleId r : {RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4}) {
        if (rule_applicable(inst, r, alpha)) return false;
    }
    return true;
}

std::string to_string(StepKind kind) {
    switch (kind) {
        case StepKind::R1: return "R1";
        case StepKind::R2: return "R2";
        case StepKind::R3: return "R3";
        case StepKind::R4: return "R4";
        case StepKind::R5: return "R5";
        case StepKind::BagAward: return "bag";
        case StepKind::ZeroMms: return "zero-mms";
    }
    return "?";
}

StepKind step_kind(RuleId rule) {
    switch (rule) {
        case RuleId::R1: return StepKind::R1;
        case RuleId::R2: return StepKind::R2;
        case RuleId::R3: return StepKind::R3;
        case RuleId::R4: return StepKind::R4;
        case RuleId::R5: return StepKind::R5;
    }
    throw ContractViolation("unknown rule");
}

ReductionTrace ReductionTrace::identity(int n, int m) {
    ReductionTrace t;
    t.scaling.assign(static_cast<std::size_t>(n), Rational(1));
    t.agents.resize(static_cast<std::size_t>(n));
    std::iota(t.agents.begin(), t.agents.end(), 1);
    t.goods.resize(static_cast<std::size_t>(m));
    std::iota(t.goods.begin(), t.goods.end(), 1);
    t.base_order = OrderMap::identity(n, m);
    return t;
}

Instance remove_award(const Instance& inst, int agent, std::span<const int> goods, StepKind kind,
                      const Rational& threshold, ReductionTrace& trace) {
    if (static_cast<int>(trace.agents.size()) != inst.n() ||
        static_cast<int>(trace.goods.size()) != inst.m()) {
        throw ContractViolation("trace bookkeeping does not match the instance");
    }
    if (agent < 1 || agent > inst.n()) throw BoundsError("agent " + std::to_string(agent) + " out of range");

    std::vector<char> removed(static_cast<std::size_t>(inst.m()) + 1, 0);
    std::vector<int> awarded;
    for (int g : goods) {
        if (g < 1) throw BoundsError("good " + std::to_string(g) + " out of range");
        if (g > inst.m()) continue;  // dummy
        if (removed[static_cast<std::size_t>(g)]) throw ContractViolation("good listed twice");
        removed[static_cast<std::size_t>(g)] = 1;
        awarded.push_back(trace.goods[static_cast<std::size_t>(g - 1)]);
    }
    std::vector<int> keep_agents;
    std::vector<int> next_agent_ids;
    for (int i = 1; i <= inst.n(); ++i) {
        if (i == agent) continue;
        keep_agents.push_back(i);
        next_agent_ids.push_back(trace.agents[static_cast<std::size_t>(i - 1)]);
    }
    std::vector<int> keep_goods;
    std::vector<int> next_good_ids;
    for (int g = 1; g <= inst.m(); ++g) {
        if (removed[static_cast<std::size_t>(g)]) continue;
        keep_goods.push_back(g);
        next_good_ids.push_back(trace.goods[static_cast<std::size_t>(g - 1)]);
    }
    trace.steps.push_back(TraceStep{kind, trace.agents[static_cast<std::size_t>(agent - 1)],
                                    Bundle(std::move(awarded)), threshold});
    trace.agents = std::move(next_agent_ids);
    trace.goods = std::move(next_good_ids);
    return restrict(inst, keep_agents, keep_goods);
}

Instance apply_rule(const Instance& inst, RuleId rule, int agent, const Rational& alpha,
                    ReductionTrace& trace) {
    if (agent < 1 || agent > inst.n()) throw BoundsError("agent " + std::to_string(agent) + " out of range");
    const auto goods = rule_goods(rule, inst.n());
    if (value_with_dummies(inst, agent, goods) < alpha) {
        throw ContractViolation(to_string(rule) + " is not applicable to agent " + std::to_string(agent));
    }
    return remove_award(inst, agent, goods, step_kind(rule), alpha, trace);
}

Reduced reduce(const Instance& inst, const Rational& epsilon, const PipelineOptions& options) {
    if (epsilon.sign() < 0) throw DomainError("reduce needs epsilon >= 0");
    const Rational alpha = Rational(3, 4) + epsilon;

    Ordered ordered = order(inst);
    Reduced out;
    out.trace = ReductionTrace::identity(inst.n(), inst.m());
    out.trace.base_order = std::move(ordered.map);

    const auto shares = mms_all(ordered.instance, options.oracle, options.exec);
    std::vector<std::vector<Rational>> scaled(ordered.instance.values());
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const Rational& share = shares[i].value;
        if (share.is_zero()) {
            out.trace.scaling[i] = Rational{};
            continue;
        }
        out.trace.scaling[i] = Rational(1) / share;
        for (auto& v : scaled[i]) v /= share;
    }
    Instance current(inst.n(), inst.m(), std::move(scaled));

    // Zero-MMS agents are satisfied by anything, including nothing.
    for (int i = current.n(); i >= 1; --i) {
        if (shares[static_cast<std::size_t>(i - 1)].value.is_zero()) {
            current = remove_award(current, i, {}, StepKind::ZeroMms, Rational{}, out.trace);
        }
    }
    // Stripped from the back so row ids stay valid; log them in agent order.
    std::reverse(out.trace.steps.begin(), out.trace.steps.end());

    constexpr RuleId kRules[] = {RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4};
    bool changed = true;
    while (changed) {
        changed = false;
        for (RuleId rule : kRules) {
            if (auto agent = rule_applicable(current, rule, alpha)) {
                current = apply_rule(current, rule, *agent, alpha, out.trace);
                changed = true;
                break;
            }
        }
    }
    out.instance = std::move(current);
    return out;
}

DeltaOni to_delta_oni(const Instance& inst, const Rational& epsilon, const PipelineOptions& options) {
    Reduced reduced = reduce(inst, epsilon, options);
    Instance normalized = normalize(reduced.instance, options);
    Ordered ordered = order(normalized);
    return DeltaOni{std::move(ordered.instance), std::move(ordered.map), std::move(normalized),
                    std::move(reduced.trace), epsilon};
}

Allocation lift_allocation(const DeltaOni& oni, const Instance& original, const Allocation& inner) {
    const auto& trace = oni.trace;
    if (static_cast<int>(trace.agents.size()) != oni.instance.n() ||
        static_cast<int>(trace.goods.size()) != oni.instance.m()) {
        throw ContractViolation("trace does not match the reduced instance");
    }
    if (static_cast<int>(trace.scaling.size()) != original.n()) {
        throw ContractViolation("trace does not match the original instance");
    }
    const Allocation reduced = lift_ordered_allocation(oni.normalized, oni.order, inner);

    const int n = original.n();
    std::vector<std::optional<Bundle>> bundles(static_cast<std::size_t>(n));
    auto give = [&](int agent, Bundle goods) {
        if (agent < 1 || agent > n) throw ContractViolation("trace names unknown agent");
        auto& slot = bundles[static_cast<std::size_t>(agent - 1)];
        if (slot) throw ContractViolation("agent " + std::to_string(agent) + " allocated twice");
        slot = std::move(goods);
    };
    for (const auto& step : trace.steps) give(step.agent, step.goods);
    auto to_base = [&](const Bundle& b) {
        std::vector<int> ids;
        ids.reserve(b.size());
        for (int g : b) ids.push_back(trace.goods[static_cast<std::size_t>(g - 1)]);
        return Bundle(std::move(ids));
    };
    for (std::size_t k = 0; k < reduced.bundles.size(); ++k) {
        give(trace.agents[k], to_base(reduced.bundles[k]));
    }
    Allocation base;
    for (int i = 0; i < n; ++i) {
        auto& slot = bundles[static_cast<std::size_t>(i)];
        if (!slot) throw ContractViolation("agent " + std::to_string(i + 1) + " missing from trace");
        base.bundles.push_back(std::move(*slot));
    }
    base.unassigned = to_base(reduced.unassigned);
    return lift_ordered_allocation(original, trace.base_order, base);
}

}  // namespace mmskit

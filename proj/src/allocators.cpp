#include "mmskit/allocators.hpp"

#include <algorithm>
#include <numeric>

#include "mmskit/errors.hpp"
#include "mmskit/json_io.hpp"

namespace mmskit {

namespace {

const Rational kQuarter{1, 4};

bool contains_sorted(const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); }

std::vector<int> iota_ids(int count) {
    std::vector<int> ids(static_cast<std::size_t>(std::max(count, 0)));
    std::iota(ids.begin(), ids.end(), 1);
    return ids;
}

/// Bundle of the given indices that are <= m (dummies dropped).
Bundle real_goods(std::initializer_list<int> goods, int m) {
    std::vector<int> out;
    for (int g : goods) {
        if (g >= 1 && g <= m) out.push_back(g);
    }
    return Bundle(std::move(out));
}

// Bag-filling engine over one instance. Agents and goods are the instance's own indices;
// `agent_ids`/`good_ids` translate them for the log and for state dumps.
class Filler {
public:
    Filler(const Instance& inst, Rational alpha, AgentFilter priority, AllocatorLog* log,
           std::vector<int> agent_ids, std::vector<int> good_ids, std::string label)
        : inst_(inst), alpha_(std::move(alpha)), priority_(std::move(priority)), log_(log),
          agent_ids_(std::move(agent_ids)), good_ids_(std::move(good_ids)), label_(std::move(label)),
          remaining_(static_cast<std::size_t>(inst.n()) + 1, 1) {
        remaining_[0] = 0;
    }

    void set_bags(std::vector<Bundle> bags, Bundle pool) {
        state_.bags = std::move(bags);
        state_.open.assign(state_.bags.size(), 1);
        state_.pool = std::move(pool);
        check_partition();
        cache_.assign(state_.bags.size(), std::vector<Rational>(static_cast<std::size_t>(inst_.n()) + 1));
        for (std::size_t k = 0; k < state_.bags.size(); ++k) {
            for (int i = 1; i <= inst_.n(); ++i) {
                cache_[k][static_cast<std::size_t>(i)] = value(inst_, i, state_.bags[k]);
            }
        }
    }

    /// Awards every bag some remaining agent already values at >= alpha, lowest bag first.
    /// One ascending pass suffices: awards only shrink the agent set.
    void award_ready_bags() {
        for (std::size_t k = 0; k < state_.bags.size(); ++k) {
            if (!state_.open[k]) continue;
            auto elig = eligible(k);
            if (!elig.empty()) award(k, elig);
        }
    }

    /// Visits open bags in order, adding the lowest pool good until someone is satisfied.
    void fill_open_bags() {
        for (std::size_t k = 0; k < state_.bags.size(); ++k) {
            if (!state_.open[k]) continue;
            auto elig = eligible(k);
            while (elig.empty()) {
                if (state_.pool.empty()) {
                    throw GuaranteeViolation(label_ + ": ran out of goods while filling bag " +
                                                 std::to_string(k + 1),
                                             dump(k).dump(2));
                }
                const int g = state_.pool.goods().front();
                state_.pool = Bundle(std::vector<int>(state_.pool.begin() + 1, state_.pool.end()));
                state_.bags[k].insert(g);
                for (int i = 1; i <= inst_.n(); ++i) cache_[k][static_cast<std::size_t>(i)] += inst_.at(i, g);
                if (log_) ++log_->goods_added;
                check_partition();
                elig = eligible(k);
            }
            award(k, elig);
        }
    }

    const BagState& state() const { return state_; }

private:
    void check_partition() const {
        if (!state_.is_partition(inst_.m())) {
            throw GuaranteeViolation(label_ + ": bag state no longer partitions the goods", dump(0).dump(2));
        }
    }

    std::vector<int> eligible(std::size_t k) const {
        std::vector<int> out;
        for (int i = 1; i <= inst_.n(); ++i) {
            if (remaining_[static_cast<std::size_t>(i)] && cache_[k][static_cast<std::size_t>(i)] >= alpha_) {
                out.push_back(i);
            }
        }
        return out;
    }

    void award(std::size_t k, const std::vector<int>& elig) {
        int winner = elig.front();
        bool used = false;
        if (priority_) {
            auto it = std::find_if(elig.begin(), elig.end(), [&](int i) { return priority_(i); });
            if (it != elig.end()) {
                winner = *it;
                used = true;
            }
        }
        remaining_[static_cast<std::size_t>(winner)] = 0;
        state_.open[k] = 0;
        state_.satisfied.emplace(winner, state_.bags[k]);
        check_partition();
        if (log_) {
            AwardEvent ev{StepKind::BagAward, agent_ids_[static_cast<std::size_t>(winner - 1)],
                          translate(state_.bags[k]), alpha_, {}, used};
            for (int i : elig) ev.eligible.push_back(agent_ids_[static_cast<std::size_t>(i - 1)]);
            log_->events.push_back(std::move(ev));
        }
    }

    Bundle translate(const Bundle& b) const {
        std::vector<int> out;
        for (int g : b) out.push_back(good_ids_[static_cast<std::size_t>(g - 1)]);
        return Bundle(std::move(out));
    }

    io::Json dump(std::size_t failing_bag) const {
        io::Json j;
        j["phase"] = label_;
        j["alpha"] = io::rational_to_json(alpha_);
        j["failing_bag"] = failing_bag + 1;
        j["instance"] = io::instance_to_json(inst_);
        j["agent_ids"] = agent_ids_;
        j["good_ids"] = good_ids_;
        j["bags"] = io::Json::array();
        for (std::size_t k = 0; k < state_.bags.size(); ++k) {
            j["bags"].push_back({{"goods", io::bundle_to_json(state_.bags[k])}, {"open", state_.open[k] != 0}});
        }
        j["pool"] = io::bundle_to_json(state_.pool);
        j["satisfied"] = io::Json::object();
        for (const auto& [agent, bundle] : state_.satisfied) {
            j["satisfied"][std::to_string(agent)] = io::bundle_to_json(bundle);
        }
        std::vector<int> left;
        for (int i = 1; i <= inst_.n(); ++i) {
            if (remaining_[static_cast<std::size_t>(i)]) left.push_back(i);
        }
        j["unsatisfied_agents"] = left;
        return j;
    }

    const Instance& inst_;
    Rational alpha_;
    AgentFilter priority_;
    AllocatorLog* log_;
    std::vector<int> agent_ids_;
    std::vector<int> good_ids_;
    std::string label_;
    std::vector<char> remaining_;
    BagState state_;
    std::vector<std::vector<Rational>> cache_;
};

Bundle goods_after(int first, int m) {
    std::vector<int> out;
    for (int g = std::max(first, 1); g <= m; ++g) out.push_back(g);
    return Bundle(std::move(out));
}

Allocation to_allocation(int n, int m, const std::map<int, Bundle>& satisfied) {
    Allocation out;
    out.bundles.resize(static_cast<std::size_t>(n));
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    for (const auto& [agent, bundle] : satisfied) {
        out.bundles[static_cast<std::size_t>(agent - 1)] = bundle;
        for (int g : bundle) used[static_cast<std::size_t>(g)] = 1;
    }
    std::vector<int> rest;
    for (int g = 1; g <= m; ++g) {
        if (!used[static_cast<std::size_t>(g)]) rest.push_back(g);
    }
    out.unassigned = Bundle(std::move(rest));
    return out;
}

void check_allocator_input(const Instance& inst, const Rational& delta, const char* name) {
    if (delta.sign() < 0) throw DomainError(std::string(name) + ": delta must be >= 0");
    if (!is_ordered(inst)) throw ContractViolation(std::string(name) + ": instance is not ordered");
    if (inst.m() < 2 * inst.n()) throw ContractViolation(std::string(name) + ": needs m >= 2n");
    if (!is_irreducible(inst, Rational(3, 4) + delta)) {
        throw ContractViolation(std::string(name) + ": instance is not (3/4+delta)-irreducible");
    }
}

}  // namespace

std::vector<Bundle> b_bags(int n, int m) {
    std::vector<Bundle> bags;
    for (int k = 1; k <= n; ++k) bags.push_back(real_goods({k, 2 * n - k + 1}, m));
    return bags;
}

std::vector<Bundle> c_bags(int n, int m) {
    std::vector<Bundle> bags;
    for (int k = 1; k <= n; ++k) bags.push_back(real_goods({k, 2 * n - k + 1, 2 * n + k}, m));
    return bags;
}

bool BagState::is_partition(int m) const {
    std::vector<int> seen(static_cast<std::size_t>(m) + 1, 0);
    auto mark = [&](const Bundle& b) {
        for (int g : b) {
            if (g < 1 || g > m || seen[static_cast<std::size_t>(g)]++) return false;
        }
        return true;
    };
    for (std::size_t k = 0; k < bags.size(); ++k) {
        if (open[k] && !mark(bags[k])) return false;
    }
    if (!mark(pool)) return false;
    for (const auto& entry : satisfied) {
        if (!mark(entry.second)) return false;
    }
    return std::all_of(seen.begin() + 1, seen.end(), [](int c) { return c == 1; });
}

bool AgentClassification::in_n1_1(int agent) const { return contains_sorted(n1_1, agent); }

bool AgentClassification::in_n1_2_or_n2(int agent) const {
    return contains_sorted(n1_2, agent) || contains_sorted(n2, agent);
}

AgentClassification classify_agents(const Instance& inst, const Rational& delta) {
    const int n = inst.n();
    if (inst.m() < 2 * n) {
        throw ContractViolation("classify_agents: needs m >= 2n, got m=" + std::to_string(inst.m()) +
                                " n=" + std::to_string(n));
    }
    if (!is_ordered(inst)) throw ContractViolation("classify_agents: instance is not ordered");
    const Rational light = kQuarter - Rational(5) * delta;
    AgentClassification cls;
    for (int i = 1; i <= n; ++i) {
        bool heavy_bag = false;
        for (int k = 1; k <= n && !heavy_bag; ++k) {
            heavy_bag = inst.at(i, k) + inst.at(i, 2 * n - k + 1) > Rational(1);
        }
        if (heavy_bag) {
            cls.n2.push_back(i);
            continue;
        }
        cls.n1.push_back(i);
        if (inst.value_or_zero(i, 2 * n + 1) >= light) {
            cls.n1_1.push_back(i);
        } else {
            cls.n1_2.push_back(i);
        }
    }
    return cls;
}

bool small_n1_1(const AgentClassification& cls, int n, const Rational& delta) {
    const Rational lhs = Rational(static_cast<std::int64_t>(cls.n1_1.size())) * (kQuarter + delta / Rational(3));
    const Rational rhs = Rational(n) * (kQuarter - delta);
    return lhs <= rhs;
}

Allocation bag_fill(const Instance& inst, const Rational& alpha, AllocatorLog* log) {
    if (alpha.sign() <= 0) throw DomainError("bag_fill: alpha must be positive");
    if (!is_ordered(inst)) throw ContractViolation("bag_fill: instance is not ordered");
    const int n = inst.n();
    const int m = inst.m();
    Filler filler(inst, alpha, {}, log, iota_ids(n), iota_ids(m), "bag_fill");
    filler.set_bags(b_bags(n, m), goods_after(2 * n + 1, m));
    filler.award_ready_bags();
    filler.fill_open_bags();
    return to_allocation(n, m, filler.state().satisfied);
}

Allocation approx_mms1(const Instance& inst, const Rational& delta, AllocatorLog* log) {
    check_allocator_input(inst, delta, "approx_mms1");
    return approx_mms1(inst, delta, classify_agents(inst, delta), log);
}

Allocation approx_mms1(const Instance& inst, const Rational& delta, const AgentClassification& cls,
                       AllocatorLog* log) {
    check_allocator_input(inst, delta, "approx_mms1");
    if (delta > Rational(11, 1000)) throw ContractViolation("approx_mms1: needs delta <= 11/1000");
    if (!small_n1_1(cls, inst.n(), delta)) {
        throw ContractViolation("approx_mms1: |N1_1| exceeds n(1/4-delta)/(1/4+delta/3)");
    }
    const int n = inst.n();
    const int m = inst.m();
    Filler filler(inst, Rational(3, 4) + delta, [&cls](int i) { return cls.in_n1_1(i); }, log, iota_ids(n),
                  iota_ids(m), "approx_mms1");
    // [2n] is covered by the bags, so M \ J is exactly the goods past 2n.
    filler.set_bags(b_bags(n, m), goods_after(2 * n + 1, m));
    filler.award_ready_bags();
    filler.fill_open_bags();
    return to_allocation(n, m, filler.state().satisfied);
}

Allocation approx_mms2(const Instance& inst, const Rational& delta, AllocatorLog* log) {
    check_allocator_input(inst, delta, "approx_mms2");
    return approx_mms2(inst, delta, classify_agents(inst, delta), log);
}

Allocation approx_mms2(const Instance& inst, const Rational& delta, const AgentClassification& cls,
                       AllocatorLog* log) {
    check_allocator_input(inst, delta, "approx_mms2");
    if (delta > kDefaultDelta) throw ContractViolation("approx_mms2: needs delta <= 3/956");
    if (small_n1_1(cls, inst.n(), delta)) {
        throw ContractViolation("approx_mms2: |N1_1| does not exceed n(1/4-delta)/(1/4+delta/3)");
    }
    const int n = inst.n();
    const int m = inst.m();
    const Rational alpha = Rational(3, 4) + delta;
    auto in_p = [&cls](int original) { return cls.in_n1_2_or_n2(original); };

    Filler first(inst, alpha, in_p, log, iota_ids(n), iota_ids(m), "approx_mms2/B-bags");
    first.set_bags(b_bags(n, m), goods_after(2 * n + 1, m));
    first.award_ready_bags();

    std::map<int, Bundle> awards = first.state().satisfied;
    std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
    for (const auto& [agent, bundle] : awards) {
        (void)agent;
        for (int g : bundle) used[static_cast<std::size_t>(g)] = 1;
    }

    // Residual instance, compacted; rt maps its rows and columns back to input ids.
    ReductionTrace rt;
    for (int i = 1; i <= n; ++i) {
        if (!awards.count(i)) rt.agents.push_back(i);
    }
    for (int g = 1; g <= m; ++g) {
        if (!used[static_cast<std::size_t>(g)]) rt.goods.push_back(g);
    }
    Instance res = restrict(inst, rt.agents, rt.goods);

    auto residual_priority = [&](int row) { return in_p(rt.agents[static_cast<std::size_t>(row - 1)]); };
    auto apply_logged = [&](RuleId rule, int row, bool prioritized) {
        const auto goods = rule_goods(rule, res.n());
        AwardEvent ev{step_kind(rule), rt.agents[static_cast<std::size_t>(row - 1)], {}, alpha, {}, false};
        for (int i = 1; i <= res.n(); ++i) {
            if (value_with_dummies(res, i, goods) >= alpha) ev.eligible.push_back(rt.agents[static_cast<std::size_t>(i - 1)]);
        }
        ev.priority_used = prioritized && residual_priority(row);
        res = apply_rule(res, rule, row, alpha, rt);
        ev.goods = rt.steps.back().goods;
        if (log) log->events.push_back(std::move(ev));
    };
    auto r5_state = [&](const char* where) {
        io::Json j;
        j["phase"] = where;
        j["alpha"] = io::rational_to_json(alpha);
        j["residual"] = io::instance_to_json(res);
        j["agent_ids"] = rt.agents;
        j["good_ids"] = rt.goods;
        return j.dump(2);
    };

    while (auto row = rule_applicable(res, RuleId::R5, alpha, residual_priority)) {
        apply_logged(RuleId::R5, *row, true);
    }
    for (;;) {
        std::optional<int> row;
        RuleId rule = RuleId::R2;
        if ((row = rule_applicable(res, RuleId::R2, alpha))) {
            rule = RuleId::R2;
        } else if ((row = rule_applicable(res, RuleId::R3, alpha))) {
            rule = RuleId::R3;
        } else {
            break;
        }
        apply_logged(rule, *row, false);
        if (rule_applicable(res, RuleId::R5, alpha)) {
            throw GuaranteeViolation("approx_mms2: R5 became applicable after " + to_string(rule),
                                     r5_state("approx_mms2/R2-R3"));
        }
    }
    if (rule_applicable(res, RuleId::R5, alpha)) {
        throw GuaranteeViolation("approx_mms2: R5 applicable when C-bags are built", r5_state("approx_mms2/C-bags"));
    }

    const int rn = res.n();
    const int rm = res.m();
    Filler last(res, alpha, residual_priority, log, rt.agents, rt.goods, "approx_mms2/C-bags");
    last.set_bags(c_bags(rn, rm), goods_after(3 * rn + 1, rm));
    last.fill_open_bags();

    for (const auto& step : rt.steps) awards.emplace(step.agent, step.goods);
    for (const auto& [row, bundle] : last.state().satisfied) {
        std::vector<int> ids;
        for (int g : bundle) ids.push_back(rt.goods[static_cast<std::size_t>(g - 1)]);
        awards.emplace(rt.agents[static_cast<std::size_t>(row - 1)], Bundle(std::move(ids)));
    }
    return to_allocation(n, m, awards);
}

std::string to_string(Branch branch) {
    switch (branch) {
        case Branch::bag_fill: return "bag_fill";
        case Branch::approx_mms1: return "approx_mms1";
        case Branch::approx_mms2: return "approx_mms2";
    }
    return "?";
}

Solution main_approx_mms(const Instance& inst, const Rational& alpha, const SolveOptions& options) {
    if (alpha.sign() <= 0) throw DomainError("alpha must be positive");
    if (alpha > kMaxAlpha) {
        throw DomainError("alpha " + alpha.to_string() + " exceeds the supported bound 3/4+3/3836");
    }
    Solution sol;
    AllocatorLog log;
    const Rational three_quarters(3, 4);
    DeltaOni oni;
    Allocation inner;
    if (alpha <= three_quarters) {
        // Reducing and filling at 3/4 keeps the reduction lossless and still meets alpha.
        oni = to_delta_oni(inst, Rational{}, options.pipeline);
        inner = bag_fill(oni.instance, three_quarters, &log);
        sol.branch = Branch::bag_fill;
    } else {
        const Rational delta = options.delta.value_or(kDefaultDelta);
        oni = to_delta_oni(inst, alpha - three_quarters, options.pipeline);
        sol.classification = classify_agents(oni.instance, delta);
        if (small_n1_1(sol.classification, oni.instance.n(), delta)) {
            inner = approx_mms1(oni.instance, delta, sol.classification, &log);
            sol.branch = Branch::approx_mms1;
        } else {
            inner = approx_mms2(oni.instance, delta, sol.classification, &log);
            sol.branch = Branch::approx_mms2;
        }
    }
    sol.reduced_agents = oni.instance.n();
    for (const auto& step : oni.trace.steps) ++sol.counters[static_cast<std::size_t>(step.kind)];
    for (const auto& ev : log.events) ++sol.counters[static_cast<std::size_t>(ev.kind)];
    sol.allocation = lift_allocation(oni, inst, inner);
    return sol;
}

}  // namespace mmskit

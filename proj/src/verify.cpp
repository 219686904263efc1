#include "mmskit/verify.hpp"

#include <algorithm>
#include <string>

#include "mmskit/errors.hpp"

namespace mmskit {

namespace {

std::string agent_tag(int i) { return "agent " + std::to_string(i); }

// Normalized means some MMS partition has every bundle worth exactly 1, which holds iff
// MMS = 1 and the row sums to n. Returns the first agent that fails, or 0.
int first_unnormalized(const Instance& inst, const std::vector<MmsResult>& shares, std::string& why) {
    for (int i = 1; i <= inst.n(); ++i) {
        const Rational& v = shares[static_cast<std::size_t>(i - 1)].value;
        if (v != Rational(1)) {
            why = agent_tag(i) + " has MMS " + v.to_string();
            return i;
        }
        const Rational total = value(inst, i, Bundle::range(inst.m()));
        if (total != Rational(inst.n())) {
            why = agent_tag(i) + " has total value " + total.to_string() + " for n = " + std::to_string(inst.n());
            return i;
        }
    }
    return 0;
}

}  // namespace

VerificationReport check_alpha_mms(const Instance& inst, const Allocation& alloc, const Rational& alpha,
                                   const PipelineOptions& options) {
    alloc.validate(inst.n(), inst.m());
    const auto shares = mms_all(inst, options.oracle, options.exec);
    VerificationReport report;
    report.alpha = alpha;
    report.pass = true;
    for (int i = 1; i <= inst.n(); ++i) {
        AgentVerdict v;
        v.mms = shares[static_cast<std::size_t>(i - 1)].value;
        v.received = value(inst, i, alloc.bundles[static_cast<std::size_t>(i - 1)]);
        v.ok = v.received >= alpha * v.mms;
        report.pass = report.pass && v.ok;
        report.agents.push_back(std::move(v));
    }
    return report;
}

io::Json report_to_json(const VerificationReport& report) {
    io::Json agents = io::Json::array();
    for (const auto& a : report.agents) {
        agents.push_back({{"mms", io::rational_to_json(a.mms)},
                          {"received", io::rational_to_json(a.received)},
                          {"ok", a.ok}});
    }
    return {{"alpha", io::rational_to_json(report.alpha)}, {"agents", agents}, {"pass", report.pass}};
}

CheckResult check_oni(const Instance& inst, const Rational& delta, const PipelineOptions& options) {
    if (!is_ordered(inst)) return {false, "ordered"};
    std::string why;
    if (first_unnormalized(inst, mms_all(inst, options.oracle, options.exec), why)) {
        return {false, "normalized: " + why};
    }
    const Rational alpha = Rational(3, 4) + delta;
    for (RuleId r : {RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4}) {
        if (auto who = rule_applicable(inst, r, alpha)) {
            return {false, to_string(r) + " applicable (" + agent_tag(*who) + ")"};
        }
    }
    return {};
}

LemmaReport check_structural_lemmas_uncertified(const Instance& inst, const Rational& delta) {
    LemmaReport rep;
    const int n = inst.n();
    const Rational one(1);
    const Rational third(1, 3);
    const Rational two_thirds(2, 3);
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.failures.push_back(std::move(msg));
    };
    std::vector<char> overfull(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        for (int k = 1; k <= n; ++k) {
            const Rational hi = inst.value_or_zero(i, k);
            const Rational lo = inst.value_or_zero(i, 2 * n - k + 1);
            if (hi + lo <= one) continue;
            overfull[static_cast<std::size_t>(i)] = 1;
            ++rep.checked;
            if (!(lo <= third && hi > two_thirds)) {
                fail(agent_tag(i) + ": B_" + std::to_string(k) + " exceeds 1 but v(" + std::to_string(k) +
                     ")=" + hi.to_string() + ", v(" + std::to_string(2 * n - k + 1) + ")=" + lo.to_string());
            }
        }
    }
    if (!is_irreducible(inst, Rational(3, 4) + delta)) return rep;
    ++rep.checked;
    if (inst.m() < 2 * n) {
        fail("irreducible instance with m=" + std::to_string(inst.m()) + " < 2n=" + std::to_string(2 * n));
    }
    const Rational bound = Rational(1, 12) + delta;
    for (int i = 1; i <= n; ++i) {
        if (!overfull[static_cast<std::size_t>(i)]) continue;
        ++rep.checked;
        const Rational v = inst.value_or_zero(i, 2 * n + 1);
        if (!(v < bound)) {
            fail(agent_tag(i) + " has an overfull B-bag and v(2n+1)=" + v.to_string());
        }
    }
    return rep;
}

LemmaReport check_structural_lemmas(const Instance& inst, const Rational& delta, const PipelineOptions& options) {
    if (!is_ordered(inst)) throw ContractViolation("structural lemmas need an ordered instance");
    std::string why;
    if (first_unnormalized(inst, mms_all(inst, options.oracle, options.exec), why)) {
        throw ContractViolation("structural lemmas need a normalized instance; " + why);
    }
    return check_structural_lemmas_uncertified(inst, delta);
}

LemmaReport check_rule_value_bounds(const Instance& inst, const Rational& alpha) {
    for (RuleId r : {RuleId::R1, RuleId::R2, RuleId::R3}) {
        if (rule_applicable(inst, r, alpha)) {
            throw ContractViolation("value bounds need R1..R3 inapplicable; " + to_string(r) + " applies");
        }
    }
    if (!is_ordered(inst)) throw ContractViolation("value bounds need an ordered instance");
    LemmaReport rep;
    const int n = inst.n();
    const Rational third = alpha / Rational(3);
    const Rational quarter = alpha / Rational(4);
    for (int i = 1; i <= n; ++i) {
        for (int g = 1; g <= inst.m(); ++g) {
            const Rational& v = inst.at(i, g);
            const Rational& cap = g > 3 * n ? quarter : (g > 2 * n ? third : alpha);
            ++rep.checked;
            if (!(v < cap)) {
                rep.ok = false;
                rep.failures.push_back(agent_tag(i) + ": v(" + std::to_string(g) + ")=" + v.to_string() +
                                       " not below " + cap.to_string());
            }
        }
    }
    return rep;
}

bool check_reduction_validity(const Instance& before, const Instance& after, int removed_agent,
                              const Rational& factor, const PipelineOptions& options) {
    if (removed_agent < 1 || removed_agent > before.n()) throw BoundsError("removed agent out of range");
    if (after.n() != before.n() - 1) throw ContractViolation("after must have exactly one agent fewer");
    const auto old_shares = mms_all(before, options.oracle, options.exec);
    const auto new_shares = mms_all(after, options.oracle, options.exec);
    int row = 0;
    for (int i = 1; i <= before.n(); ++i) {
        if (i == removed_agent) continue;
        const Rational& was = old_shares[static_cast<std::size_t>(i - 1)].value;
        const Rational& now = new_shares[static_cast<std::size_t>(row)].value;
        ++row;
        if (now < factor * was) return false;
    }
    return true;
}

bool check_sequence_reduction(const Instance& inst, int agent, const Bundle& removed, const PipelineOptions& options) {
    const int n = inst.n();
    if (removed.size() % 2 != 0) throw ContractViolation("sequence reduction needs an even-sized set");
    const int k = static_cast<int>(removed.size() / 2);
    if (k >= n) throw ContractViolation("sequence reduction needs |S| < 2n");
    const Rational share = mms(inst, agent, options.oracle).value;
    Rational top;
    for (int g : removed) top = std::max(top, inst.at(agent, g));
    Rational x = top - share / Rational(2);
    if (x.sign() < 0) x = Rational{};
    std::vector<int> rest;
    for (int g = 1; g <= inst.m(); ++g) {
        if (!removed.contains(g)) rest.push_back(g);
    }
    const Rational after = mms(inst, agent, n - k, Bundle(std::move(rest)), options.oracle).value;
    return after >= share - Rational(2) * x;
}

}  // namespace mmskit

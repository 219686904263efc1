#include <doctest.h>

#include "mmskit/errors.hpp"
#include "mmskit/transforms.hpp"
#include "mmskit/verify.hpp"
#include "support/brute.hpp"

using namespace mmskit;

namespace {

Instance make(std::vector<std::vector<Rational>> rows) { return Instance(std::move(rows)); }

const Rational kThreeQuarters(3, 4);

}  // namespace

TEST_SUITE("transforms") {
    TEST_CASE("order sorts each row independently") {
        const auto o = order(make({{1, 5, 3}}));
        CHECK(o.instance == make({{5, 3, 1}}));
        CHECK(o.map.perm == std::vector<std::vector<int>>{{2, 3, 1}});

        const auto two = order(make({{1, 2}, {2, 1}}));
        CHECK(two.instance == make({{2, 1}, {2, 1}}));
        CHECK(two.map.perm[0] == std::vector<int>{2, 1});
        CHECK(two.map.perm[1] == std::vector<int>{1, 2});
    }

    TEST_CASE("order is the identity on ordered input; ties keep index order") {
        const Instance inst = make({{4, 4, 2, 0}, {3, 1, 1, 1}});
        const auto o = order(inst);
        CHECK(o.instance == inst);
        CHECK(o.map.perm == OrderMap::identity(2, 4).perm);
    }

    TEST_CASE("lift_ordered_allocation") {
        const Instance original = make({{1, 5, 3}});
        const auto o = order(original);
        const Allocation lifted = lift_ordered_allocation(original, o.map, Allocation{{Bundle{1}}, Bundle{2, 3}});
        CHECK(lifted.bundles[0] == Bundle{2});
        CHECK(lifted.unassigned == Bundle{1, 3});

        const Instance ordered = make({{3, 2, 1}, {5, 5, 0}});
        const Allocation a{{Bundle{1, 3}, Bundle{2}}, Bundle{}};
        CHECK(lift_ordered_allocation(ordered, OrderMap::identity(2, 3), a) == a);

        CHECK_THROWS_AS(lift_ordered_allocation(original, o.map, Allocation{{Bundle{1, 1 + 3}}, Bundle{}}),
                        ContractViolation);
        CHECK_THROWS_AS(lift_ordered_allocation(original, OrderMap::identity(2, 3), Allocation{{Bundle{1}}, Bundle{2, 3}}),
                        ContractViolation);
    }

    TEST_CASE("lift clash: the earlier slot picks first") {
        // Both agents like good 1 best; agent 1 owns ordered slot 1, agent 2 slot 2.
        const Instance original = make({{9, 1, 5}, {8, 7, 1}});
        const auto o = order(original);
        const Allocation ordered_alloc{{Bundle{1}, Bundle{2}}, Bundle{3}};
        const Allocation lifted = lift_ordered_allocation(original, o.map, ordered_alloc);
        CHECK(lifted.bundles[0] == Bundle{1});
        CHECK(lifted.bundles[1] == Bundle{2});
        for (int i = 1; i <= 2; ++i) {
            CHECK(value(original, i, lifted.bundles[static_cast<std::size_t>(i - 1)]) >=
                  value(o.instance, i, ordered_alloc.bundles[static_cast<std::size_t>(i - 1)]));
        }
    }

    TEST_CASE("normalize") {
        const Instance one = normalize(make({{1, 1, 1, 1}}));
        CHECK(one == make({{Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}}));

        const Instance two = normalize(make({{2, 2, 2, 2}, {2, 2, 2, 2}}));
        for (const auto& row : two.values()) {
            for (const auto& v : row) CHECK(v == Rational(1, 2));
        }
        CHECK(mms(two, 1).value == Rational(1));

        const Instance again = normalize(two);
        CHECK(mms(again, 2).value == Rational(1));

        CHECK_THROWS_AS(normalize(make({{1, 1}, {0, 5}})), DomainError);
    }

    TEST_CASE("normalize output: MMS 1 and total at least n") {
        Rng rng(99);
        for (int t = 0; t < 20; ++t) {
            const auto inst = testsupport::random_instance(rng, 3, 8, 20);
            bool positive = true;
            for (int i = 1; i <= 3; ++i) positive = positive && mms(inst, i).value.sign() > 0;
            if (!positive) continue;
            const Instance nrm = normalize(inst);
            for (int i = 1; i <= 3; ++i) {
                CHECK(mms(nrm, i).value == Rational(1));
                CHECK(value(nrm, i, Bundle::range(8)) >= Rational(3));
            }
        }
    }

    TEST_CASE("rule_applicable") {
        const Rational a = kThreeQuarters;
        CHECK(rule_applicable(make({{a, 0}}), RuleId::R1, a) == 1);

        const Rational q = a / Rational(4);
        const Instance flat = make({{q, q, q, q, q}, {q, q, q, q, q}});
        CHECK_FALSE(rule_applicable(flat, RuleId::R2, a).has_value());

        // Good 2n+1 = 5 is a dummy when m = 4.
        CHECK(rule_applicable(make({{a, 0, 0, 0}, {0, 0, 0, 0}}), RuleId::R4, a) == 1);
        CHECK_FALSE(rule_applicable(make({{a - Rational(1, 100), 1, 0, 0}, {0, 0, 0, 0}}), RuleId::R4, a));

        const Instance pair = make({{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 2)}});
        CHECK(rule_applicable(pair, RuleId::R5, a) == 1);
        CHECK(rule_applicable(pair, RuleId::R5, a, [](int i) { return i == 2; }) == 2);
        CHECK(rule_applicable(pair, RuleId::R5, a, [](int) { return false; }) == 1);

        CHECK_FALSE(rule_applicable(Instance(0, 3, {}), RuleId::R1, a));
    }

    TEST_CASE("rule goods") {
        CHECK(rule_goods(RuleId::R1, 3) == std::vector<int>{1});
        CHECK(rule_goods(RuleId::R2, 3) == std::vector<int>{5, 6, 7});
        CHECK(rule_goods(RuleId::R3, 3) == std::vector<int>{7, 8, 9, 10});
        CHECK(rule_goods(RuleId::R4, 3) == std::vector<int>{1, 7});
        CHECK(rule_goods(RuleId::R5, 3) == std::vector<int>{1, 2});
    }

    TEST_CASE("apply_rule bookkeeping") {
        const Rational a = kThreeQuarters;
        {
            const Instance inst = make({{1, 0, 0}, {1, 1, 1}});
            auto trace = ReductionTrace::identity(2, 3);
            const Instance out = apply_rule(inst, RuleId::R1, 1, a, trace);
            CHECK(out.n() == 1);
            CHECK(out.m() == 2);
            REQUIRE(trace.steps.size() == 1);
            CHECK(trace.steps[0].kind == StepKind::R1);
            CHECK(trace.steps[0].agent == 1);
            CHECK(trace.steps[0].goods == Bundle{1});
            CHECK(trace.agents == std::vector<int>{2});
            CHECK(trace.goods == std::vector<int>{2, 3});
        }
        {
            const Instance inst = make({{1, 1, 1, 1, 1}, {2, 2, 1, 1, 1}});
            auto trace = ReductionTrace::identity(2, 5);
            const Instance out = apply_rule(inst, RuleId::R2, 2, a, trace);
            CHECK(out == make({{1, 1}}));
            CHECK(trace.steps[0].goods == Bundle{3, 4, 5});
        }
        {
            std::vector<std::vector<Rational>> rows(3, std::vector<Rational>{7, 6, 5, 4, 3, 2, 1});
            const Instance inst(rows);
            auto trace = ReductionTrace::identity(3, 7);
            const Instance out = apply_rule(inst, RuleId::R4, 3, a, trace);
            CHECK(out == make({{6, 5, 4, 3, 2}, {6, 5, 4, 3, 2}}));
            CHECK(trace.steps[0].goods == Bundle{1, 7});
            CHECK(trace.goods == std::vector<int>{2, 3, 4, 5, 6});
            CHECK(is_ordered(out));
        }
        {
            const Instance inst = make({{Rational(1, 2), 0}});
            auto trace = ReductionTrace::identity(1, 2);
            CHECK_THROWS_AS(apply_rule(inst, RuleId::R1, 1, a, trace), ContractViolation);
            CHECK_THROWS_AS(apply_rule(inst, RuleId::R1, 2, a, trace), BoundsError);
        }
        {
            // R2 with n = 2 and m = 4: good 5 is a dummy and vanishes.
            const Instance inst = make({{1, 1, 1, 1}, {1, 1, 1, 1}});
            auto trace = ReductionTrace::identity(2, 4);
            const Instance out = apply_rule(inst, RuleId::R2, 1, a, trace);
            CHECK(out.m() == 2);
            CHECK(trace.steps[0].goods == Bundle{3, 4});
        }
    }

    TEST_CASE("reduce: identical unit goods, m = n") {
        const Instance inst = make({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
        const Reduced r = reduce(inst, 0);
        CHECK(r.instance.n() == 0);
        CHECK(r.trace.steps.size() == 3);
        for (const auto& s : r.trace.steps) CHECK(s.kind == StepKind::R1);
    }

    TEST_CASE("reduce: irreducible input is only ordered and scaled") {
        // MMS 4 for both; every rule set is worth < 3/4 after scaling.
        const Instance inst = make({{2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1}, {1, 1, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1}});
        const Reduced r = reduce(inst, 0);
        CHECK(r.trace.steps.empty());
        CHECK(r.instance.n() == 2);
        CHECK(r.trace.scaling == std::vector<Rational>{Rational(1, 8), Rational(1, 8)});
        CHECK(is_ordered(r.instance));
        CHECK(r.instance.at(1, 1) == Rational(1, 4));
    }

    TEST_CASE("reduce on the two-agent example") {
        const Instance inst = make({{4, 1, 1, 1, 1}, {1, 1, 1, 1, 1}});
        for (const Rational& eps : {Rational(0), Rational(1, 100), Rational(3, 3836)}) {
            const Reduced r = reduce(inst, eps);
            REQUIRE_FALSE(r.trace.steps.empty());
            CHECK(r.trace.steps[0].kind == StepKind::R1);
            CHECK(r.trace.steps[0].agent == 1);
            CHECK(r.trace.scaling[0] == Rational(1, 4));
            CHECK(r.trace.scaling[1] == Rational(1, 2));
            for (int i = 1; i <= r.instance.n(); ++i) {
                CHECK(mms(r.instance, i).value >= Rational(1) - Rational(4) * eps);
            }
            CHECK(is_irreducible(r.instance, kThreeQuarters + eps));
        }
    }

    TEST_CASE("reduce strips zero-MMS agents") {
        const Instance inst = make({{0, 0, 5}, {1, 1, 1}, {0, 0, 0}});
        const Reduced r = reduce(inst, 0);
        REQUIRE(r.trace.steps.size() >= 2);
        CHECK(r.trace.steps[0].kind == StepKind::ZeroMms);
        CHECK(r.trace.steps[0].agent == 1);
        CHECK(r.trace.steps[0].goods.empty());
        CHECK(r.trace.steps[1].kind == StepKind::ZeroMms);
        CHECK(r.trace.steps[1].agent == 3);
        CHECK(r.trace.scaling[0] == Rational(0));
        CHECK(r.trace.scaling[2] == Rational(0));
        CHECK_THROWS_AS(reduce(inst, Rational(-1, 10)), DomainError);
    }

    TEST_CASE("to_delta_oni degenerate and eps = 0") {
        const Instance gone = make({{1, 1}, {1, 1}});
        const DeltaOni empty = to_delta_oni(gone, 0);
        CHECK(empty.instance.n() == 0);
        const Allocation lifted = lift_allocation(empty, gone, Allocation{{}, Bundle::range(empty.instance.m())});
        CHECK_NOTHROW(lifted.validate(2, 2));
        CHECK(lifted.bundles[0].size() + lifted.bundles[1].size() == 2);

        Rng rng(4);
        for (int t = 0; t < 10; ++t) {
            const auto inst = testsupport::random_instance(rng, 3, 9, 30);
            const DeltaOni oni = to_delta_oni(inst, 0);
            CHECK(check_oni(oni.instance, 0).ok);
            CHECK(oni.instance.m() >= 2 * oni.instance.n());
        }
    }

    TEST_CASE("lift_allocation") {
        // Already ordered, normalized and irreducible: the pipeline changes nothing but scale.
        const Instance inst = make({{2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1}, {2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1}});
        const DeltaOni oni = to_delta_oni(inst, 0);
        CHECK(oni.trace.steps.empty());
        const Allocation inner{{Bundle{1, 4, 5}, Bundle{2, 3, 6}}, Bundle{7, 8, 9, 10, 11, 12}};
        CHECK(lift_allocation(oni, inst, inner) == inner);

        const Instance r1 = make({{12, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}});
        const DeltaOni with_r1 = to_delta_oni(r1, 0);
        REQUIRE(!with_r1.trace.steps.empty());
        const auto& step = with_r1.trace.steps[0];
        CHECK(step.kind == StepKind::R1);
        Allocation rest;
        rest.bundles.resize(static_cast<std::size_t>(with_r1.instance.n()));
        rest.unassigned = Bundle::range(with_r1.instance.m());
        const Allocation lifted = lift_allocation(with_r1, r1, rest);
        CHECK(lifted.bundles[0] == Bundle{1});

        Allocation wrong;
        wrong.bundles.resize(static_cast<std::size_t>(with_r1.instance.n()) + 1);
        CHECK_THROWS_AS(lift_allocation(with_r1, r1, wrong), ContractViolation);
    }
}

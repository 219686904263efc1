#include <doctest.h>

#include <json.hpp>

#include "mmskit/allocators.hpp"
#include "mmskit/errors.hpp"
#include "mmskit/verify.hpp"
#include "support/brute.hpp"

using namespace mmskit;

namespace {

Instance make(std::vector<std::vector<Rational>> rows) { return Instance(std::move(rows)); }

Instance halves(int n) {
    return Instance(std::vector<std::vector<Rational>>(static_cast<std::size_t>(n),
                                                       std::vector<Rational>(static_cast<std::size_t>(2 * n), Rational(1, 2))));
}

// n goods of 1/2 and 2n goods of 1/4 for every agent: ordered, normalized, all agents in N1_1.
Instance halves_and_quarters(int n) {
    std::vector<Rational> row(static_cast<std::size_t>(n), Rational(1, 2));
    row.resize(static_cast<std::size_t>(3 * n), Rational(1, 4));
    return Instance(std::vector<std::vector<Rational>>(static_cast<std::size_t>(n), row));
}

const Rational kDelta = kDefaultDelta;

}  // namespace

TEST_SUITE("allocators") {
    TEST_CASE("bag layouts") {
        CHECK(b_bags(3, 9) == std::vector<Bundle>{Bundle{1, 6}, Bundle{2, 5}, Bundle{3, 4}});
        CHECK(c_bags(3, 9) == std::vector<Bundle>{Bundle{1, 6, 7}, Bundle{2, 5, 8}, Bundle{3, 4, 9}});
        CHECK(c_bags(3, 7) == std::vector<Bundle>{Bundle{1, 6, 7}, Bundle{2, 5}, Bundle{3, 4}});
        CHECK(b_bags(0, 0).empty());
    }

    TEST_CASE("classification") {
        const auto cls = classify_agents(halves(2), kDelta);
        CHECK(cls.n1 == std::vector<int>{1, 2});
        CHECK(cls.n2.empty());
        CHECK(cls.n1_1.empty());  // good 5 is a dummy
        CHECK(cls.n1_2 == std::vector<int>{1, 2});

        // Agent 2 has v(B_1) = 1 + 1/100.
        const Instance over = make({{Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)},
                                    {Rational(51, 100), Rational(1, 2), Rational(1, 2), Rational(1, 2)}});
        const auto c2 = classify_agents(over, kDelta);
        CHECK(c2.n2 == std::vector<int>{2});
        CHECK(c2.n1 == std::vector<int>{1});

        const auto c3 = classify_agents(halves_and_quarters(3), kDelta);
        CHECK(c3.n1_1 == std::vector<int>{1, 2, 3});
        CHECK(c3.in_n1_1(2));
        CHECK_FALSE(c3.in_n1_2_or_n2(2));

        CHECK_THROWS_AS(classify_agents(make({{1, 1, 1}, {1, 1, 1}}), kDelta), ContractViolation);
        CHECK_THROWS_AS(classify_agents(make({{1, 2}}), kDelta), ContractViolation);
    }

    TEST_CASE("branch threshold is exact") {
        // n (1/4 - d) / (1/4 + d/3) with d = 3/956 and n = 4: 4 * (236/956) / (240/956) = 3.93...
        AgentClassification cls;
        cls.n1_1 = {1, 2, 3};
        CHECK(small_n1_1(cls, 4, kDelta));
        cls.n1_1 = {1, 2, 3, 4};
        CHECK_FALSE(small_n1_1(cls, 4, kDelta));
        // The threshold equals n exactly at d = 0.
        CHECK(small_n1_1(cls, 4, 0));
        cls.n1_1.clear();
        CHECK(small_n1_1(cls, 0, kDelta));
    }

    TEST_CASE("bag_fill basics") {
        // n = 1: bag {1, 2} grows until it is worth alpha.
        const Instance one = make({{Rational(3, 10), Rational(3, 10), Rational(2, 10), Rational(1, 10), Rational(1, 10)}});
        AllocatorLog log;
        const Allocation a = bag_fill(one, Rational(3, 4), &log);
        CHECK(a.bundles[0] == Bundle{1, 2, 3});
        CHECK(a.unassigned == Bundle{4, 5});
        CHECK(log.goods_added == 1);

        const Allocation u = bag_fill(halves(3), Rational(3, 4));
        CHECK(u.unassigned.empty());
        CHECK(u.bundles == std::vector<Bundle>{Bundle{1, 6}, Bundle{2, 5}, Bundle{3, 4}});
    }

    TEST_CASE("bag_fill reports running out of goods with a state dump") {
        const Instance inst = make({{Rational(1, 2), Rational(1, 4), Rational(1, 4)}});
        try {
            bag_fill(inst, Rational(2));
            FAIL("expected a guarantee violation");
        } catch (const GuaranteeViolation& e) {
            const auto j = nlohmann::json::parse(e.state());
            CHECK(j.at("phase") == "bag_fill");
            CHECK(j.at("pool").empty());
            CHECK(j.at("unsatisfied_agents") == nlohmann::json::array({1}));
        }
        CHECK_THROWS_AS(bag_fill(inst, 0), DomainError);
        CHECK_THROWS_AS(bag_fill(make({{1, 2}}), Rational(1, 2)), ContractViolation);
    }

    TEST_CASE("approx_mms1 with empty priority class equals bag_fill") {
        Rng rng(8);
        int tried = 0;
        for (int t = 0; t < 400 && tried < 10; ++t) {
            const auto inst = testsupport::random_instance(rng, 3, 14, 20);
            const DeltaOni oni = to_delta_oni(inst, Rational(3, 3836));
            if (oni.instance.n() == 0) continue;
            AgentClassification cls = classify_agents(oni.instance, kDelta);
            if (!cls.n1_1.empty()) continue;
            ++tried;
            CHECK(approx_mms1(oni.instance, kDelta, cls) == bag_fill(oni.instance, Rational(3, 4) + kDelta));
        }
        CHECK(tried > 0);
    }

    TEST_CASE("approx_mms1 n = 1") {
        const Instance one(std::vector<std::vector<Rational>>{std::vector<Rational>(10, Rational(1, 10))});
        const Allocation a = approx_mms1(one, kDelta);
        CHECK(a.bundles[0] == Bundle::range(8));
    }

    TEST_CASE("allocator preconditions") {
        CHECK_THROWS_AS(approx_mms1(make({{1, 2}}), kDelta), ContractViolation);
        CHECK_THROWS_AS(approx_mms1(make({{1, 0}}), kDelta), ContractViolation);  // R1 applies
        const Instance hq = halves_and_quarters(3);
        CHECK_THROWS_AS(approx_mms1(hq, Rational(1, 50)), ContractViolation);
        // Three of three agents in N1_1 is too many for the first branch.
        CHECK_THROWS_AS(approx_mms1(hq, kDelta), ContractViolation);
        CHECK_THROWS_AS(approx_mms2(halves(2), kDelta), ContractViolation);
        CHECK_THROWS_AS(approx_mms2(hq, Rational(1, 100)), ContractViolation);
        CHECK_THROWS_AS(approx_mms2(hq, Rational(-1, 100)), DomainError);
    }

    TEST_CASE("approx_mms2 on halves and quarters uses R5 then R3") {
        for (int n : {2, 3, 4, 5, 6}) {
            CAPTURE(n);
            const Instance hq = halves_and_quarters(n);
            AllocatorLog log;
            const Allocation a = approx_mms2(hq, kDelta, &log);
            CHECK_NOTHROW(a.validate(n, 3 * n));
            for (int i = 1; i <= n; ++i) {
                CHECK(value(hq, i, a.bundles[static_cast<std::size_t>(i - 1)]) >= Rational(3, 4) + kDelta);
            }
            bool saw_r5 = false;
            for (const auto& ev : log.events) saw_r5 = saw_r5 || ev.kind == StepKind::R5;
            CHECK(saw_r5);
        }
    }

    TEST_CASE("main_approx_mms range and trivial cases") {
        const Instance one = make({{3, 1, 2}});
        const Solution s = main_approx_mms(one, kMaxAlpha);
        CHECK(s.allocation.bundles[0] == Bundle{1, 2, 3});

        try {
            main_approx_mms(one, Rational(9, 10));
            FAIL("expected a domain error");
        } catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("3/4+3/3836") != std::string::npos);
        }
        CHECK_THROWS_AS(main_approx_mms(one, 0), DomainError);
        CHECK(main_approx_mms(make({{1, 1}, {1, 1}}), Rational(1, 2)).branch == Branch::bag_fill);
    }

    TEST_CASE("driver constants") {
        const Rational eps = kMaxAlpha - Rational(3, 4);
        CHECK(eps == Rational(3, 3836));
        const Rational four_eps = Rational(4) * eps;
        CHECK(four_eps / (Rational(1) - four_eps) == kDefaultDelta);
        CHECK((Rational(1) - four_eps) * (Rational(3, 4) + kDefaultDelta) == kMaxAlpha);
        CHECK(Rational(1) - four_eps == Rational(956, 959));
    }

    TEST_CASE("bag state partition predicate") {
        BagState st;
        st.bags = {Bundle{1, 4}, Bundle{2, 3}};
        st.open = {1, 0};
        st.pool = Bundle{5};
        st.satisfied.emplace(2, Bundle{2, 3});
        CHECK(st.is_partition(5));
        CHECK_FALSE(st.is_partition(6));
        st.open = {1, 1};
        CHECK_FALSE(st.is_partition(5));
    }
}

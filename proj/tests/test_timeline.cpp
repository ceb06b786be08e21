#include <cmath>
#include <random>

#include "doctest.h"
#include "rsq/timeline.hpp"
#include "support.hpp"

using namespace rsq;

TEST_CASE("interval set operations") {
    CHECK(normalize({{5, 6}, {1, 2}, {2, 3}, {4, 3}}) == IntervalSet{{1, 3}, {5, 6}});
    CHECK(clip({{0, 4}, {6, 9}}, 2, 7) == IntervalSet{{2, 4}, {6, 7}});
    CHECK(clip({{0, 1}}, 2, 7).empty());
    CHECK(unite({{0, 1}}, {{0.5, 2}, {3, 4}}) == IntervalSet{{0, 2}, {3, 4}});
    CHECK(covers({{0, 1}, {3, 4}}, 1.0));
    CHECK(covers({{0, 1}, {3, 4}}, 3.0));
    CHECK_FALSE(covers({{0, 1}, {3, 4}}, 2.0));
}

TEST_CASE("SetTimeline append merges equal neighbours") {
    SetTimeline tl;
    tl.append(0, 1, {1, 2});
    tl.append(1, 2, {1, 2});
    tl.append(2, 5, {3});
    REQUIRE(tl.segments.size() == 2);
    CHECK(tl.begin() == 0.0);
    CHECK(tl.end() == 5.0);
    CHECK(*tl.at(1.5) == std::vector<NodeId>{1, 2});
    CHECK(*tl.at(2.0) == std::vector<NodeId>{3});
    CHECK(*tl.at(5.0) == std::vector<NodeId>{3});
    CHECK(tl.at(5.1) == nullptr);
    CHECK(tl.at(-0.1) == nullptr);
    CHECK(tl.change_points() == std::vector<double>{2.0});

    const auto m = membership(tl);
    CHECK(m.at(1) == IntervalSet{{0, 2}});
    CHECK(m.at(3) == IntervalSet{{2, 5}});
}

TEST_CASE("static objects give a single segment") {
    const MotionState q{{0, 0}, {0, 0}, 0};
    std::vector<TrackedObject> objs{{test::obj(0, 10, 0, {3}), {{0, 100}}},
                                    {test::obj(1, 20, 0, {1}), {{0, 100}}},
                                    {test::obj(2, 30, 0, {2}), {{0, 100}}}};
    const auto tl = skyline_timeline(q, 50.0, objs, 0.0, 10.0);
    REQUIRE(tl.segments.size() == 1);
    CHECK(tl.segments[0].members == std::vector<NodeId>{0, 1});
}

TEST_CASE("degenerate window is one snapshot segment") {
    const MotionState q{{0, 0}, {0, 0}, 0};
    std::vector<TrackedObject> objs{{test::obj(4, 10, 0, {1}), {{0, 10}}}};
    const auto tl = skyline_timeline(q, 50.0, objs, 3.0, 3.0);
    REQUIRE(tl.segments.size() == 1);
    CHECK(tl.segments[0].begin == 3.0);
    CHECK(tl.segments[0].end == 3.0);
    CHECK(tl.segments[0].members == std::vector<NodeId>{4});
}

TEST_CASE("an entering object changes the set at its crossing time") {
    const MotionState q{{0, 0}, {0, 0}, 0};
    std::vector<TrackedObject> objs{{test::obj(0, 30, 0, {5}), {{0, 100}}},
                                    {test::obj(1, -200, 0, {1}, {10, 0}), {{0, 100}}}};
    const auto tl = skyline_timeline(q, 100.0, objs, 0.0, 40.0);
    // 1 enters at 10, dominates 0 while within 30 m of q (17..23) and leaves at 30.
    REQUIRE(tl.segments.size() == 5);
    const std::vector<double> starts{0, 10, 17, 23, 30};
    const std::vector<std::vector<NodeId>> sets{{0}, {0, 1}, {1}, {0, 1}, {0}};
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(tl.segments[k].begin == doctest::Approx(starts[k]));
        CHECK(tl.segments[k].members == sets[k]);
    }
}

TEST_CASE("availability bounds membership") {
    const MotionState q{{0, 0}, {0, 0}, 0};
    std::vector<TrackedObject> objs{{test::obj(0, 10, 0, {1}), {{2, 4}}}};
    const auto tl = skyline_timeline(q, 50.0, objs, 0.0, 6.0);
    CHECK(tl.at(1.0)->empty());
    CHECK(*tl.at(3.0) == std::vector<NodeId>{0});
    CHECK(tl.at(5.0)->empty());
}

TEST_CASE("skyline_timeline matches a 10 ms sampled recomputation") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> pos(0.0, 200.0), vel(-8.0, 8.0), av(0.0, 10.0);
    std::uniform_int_distribution<int> count(1, 8), attr(0, 3);
    const double from = 2.0, to = 22.0;
    for (int rep = 0; rep < 60; ++rep) {
        const MotionState q{{pos(rng), pos(rng)}, {vel(rng), vel(rng)}, 0.0};
        std::vector<TrackedObject> objs;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            auto o = test::obj(i, pos(rng), pos(rng), {double(attr(rng)), double(attr(rng))},
                               {vel(rng), vel(rng)}, 0.0);
            double a = av(rng), b = av(rng) + 12.0;
            objs.push_back({o, {{a, b}}});
        }
        const double R = 80.0;
        const auto tl = skyline_timeline(q, R, objs, from, to);
        REQUIRE_FALSE(tl.empty());
        CHECK(tl.begin() == from);
        CHECK(tl.end() == to);
        for (std::size_t k = 1; k < tl.segments.size(); ++k)
            CHECK(tl.segments[k].members != tl.segments[k - 1].members);

        const auto cps = tl.change_points();
        for (double t = from + 0.005; t < to; t += 0.01) {
            bool near_change = false;
            for (double c : cps) near_change = near_change || std::abs(c - t) < 1e-6;
            if (near_change) continue;
            std::vector<DataObject> avail;
            for (const auto& o : objs)
                if (covers(o.availability, t)) avail.push_back(o.object);
            const auto expect = test::brute_range_skyline(position_at(q, t), R, avail, t);
            REQUIRE(*tl.at(t) == expect);
        }
    }
}

TEST_CASE("skyline_timeline contract errors") {
    const MotionState q{{0, 0}, {0, 0}, 0};
    std::vector<TrackedObject> objs{{test::obj(0, 1, 0, {1}), {{0, 1}}},
                                    {test::obj(1, 2, 0, {1, 2}), {{0, 1}}}};
    CHECK_THROWS_AS(skyline_timeline(q, 10.0, objs, 0.0, 1.0), ContractError);
    CHECK_THROWS_AS(skyline_timeline(q, 10.0, {}, 2.0, 1.0), ContractError);
    CHECK_THROWS_AS(skyline_timeline(q, 0.0, {}, 0.0, 1.0), ContractError);
}

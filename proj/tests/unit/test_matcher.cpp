#include <algorithm>
#include <random>

#include "doctest.h"
#include "ouroboros/error.hpp"
#include "ouroboros/matcher.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace ouroboros;
using namespace ouroboros::testing;

namespace {

std::vector<double> weights_of(const Schema& s) {
    std::vector<double> w;
    for (const auto& slot : s.slots) w.push_back(slot.weight);
    return w;
}

std::vector<OracleBinding> as_oracle(const std::vector<Binding>& bs) {
    std::vector<OracleBinding> out;
    for (const auto& b : bs) out.push_back({b.slot_index, b.feature_index, b.score});
    return out;
}

// Nested chain: level0 holds a leaf slot, level k wraps level k-1.
SchemaStore nested_chain(int levels) {
    SchemaStore store;
    store.insert(make_schema("level0", {exact_slot("leaf", "leaf", 1.0)}));
    for (int k = 1; k <= levels; ++k) {
        const std::string inner = "level" + std::to_string(k - 1);
        store.insert(make_schema("level" + std::to_string(k),
                                 {{DimensionId(inner), SubSchema{inner}, 1.0, std::nullopt}}));
    }
    return store;
}

}  // namespace

TEST_CASE("match_slot") {
    const SchemaStore store;
    CHECK(match_slot(exact_slot("eye", "eye", 0.9), symbol("eye", "eye"), store) == 1.0);
    CHECK(match_slot(exact_slot("eye", "eye", 0.9), symbol("eye", "closed"), store) == 0.0);
    CHECK(match_slot(exact_slot("eye", "eye", 0.9), symbol("nose", "eye"), store) == 0.0);
    CHECK(match_slot(exact_slot("eye", "eye", 0.9), number("eye", 1.0), store) == 0.0);

    const Slot range = range_slot("size", 10.0, 20.0, 1.0);
    CHECK(match_slot(range, number("size", 15.0), store) == 1.0);
    CHECK(match_slot(range, number("size", 10.0), store) == 1.0);
    // 1 - (25 - 20) / 5
    CHECK(match_slot(range, number("size", 25.0), store) == 0.0);
    CHECK(match_slot(range, number("size", 22.5), store) == doctest::Approx(0.5));
    CHECK(match_slot(range, number("size", 8.0), store) == doctest::Approx(0.6));
    CHECK(match_slot(range, number("size", 40.0), store) == 0.0);
    CHECK(match_slot(range, symbol("size", "big"), store) == 0.0);

    const Slot point = range_slot("size", 5.0, 5.0, 1.0);
    CHECK(match_slot(point, number("size", 5.0), store) == 1.0);
    CHECK(match_slot(point, number("size", 5.25), store) == doctest::Approx(0.75));
    CHECK(match_slot(point, number("size", 7.0), store) == 0.0);
}

TEST_CASE("sub-schema slots score the fit of the nested schema") {
    auto store = store_of({face_schema()});
    store.insert(make_schema("PERSON", {{DimensionId("FACE"), SubSchema{"FACE"}, 0.9, std::nullopt},
                                        exact_slot("torso", "torso", 0.7)}));
    const std::vector<FeatureDatum> features{symbol("eye", "eye"), symbol("nose", "nose"),
                                             symbol("torso", "torso")};
    const Slot& face_slot = store.at("PERSON").slots[0];
    CHECK(match_slot(face_slot, features[0], store, features) == doctest::Approx(1.6 / 3.6));
    CHECK(match_slot(face_slot, features[2], store, features) == 0.0);
    // A feature naming the part on the slot's own dimension is an already recognised part.
    CHECK(match_slot(face_slot, symbol("FACE", "FACE"), store) == 1.0);

    const auto report = consumption_analysis(store, "PERSON", features, 0);
    CHECK(report.fit == doctest::Approx((0.9 * 1.6 / 3.6 + 0.7) / 1.6));
    CHECK(report.bindings.size() == 2);
    CHECK(report.unexplained == std::vector<std::size_t>{1});

    CHECK(error_code([&] {
              SchemaStore dangling = store_of({make_schema(
                  "X", {{DimensionId("Y"), SubSchema{"Y"}, 1.0, std::nullopt}})});
              consumption_analysis(dangling, "X", std::vector<FeatureDatum>{symbol("y", "y")}, 0);
          }) == ErrorCode::UnknownSchema);
}

TEST_CASE("sub-schema recursion is depth limited") {
    const std::vector<FeatureDatum> leaf{symbol("leaf", "leaf")};
    const auto ok = nested_chain(8);
    CHECK(consumption_analysis(ok, "level8", leaf, 0).fit == doctest::Approx(1.0));

    const auto deep = nested_chain(9);
    CHECK(error_code([&] { consumption_analysis(deep, "level9", leaf, 0); }) ==
          ErrorCode::DepthExceeded);

    const auto cyclic = store_of({make_schema(
        "LOOP", {{DimensionId("LOOP"), SubSchema{"LOOP"}, 1.0, std::nullopt}, exact_slot("k", "k", 1.0)})});
    const std::vector<FeatureDatum> k{symbol("k", "k")};
    CHECK(error_code([&] { consumption_analysis(cyclic, "LOOP", k, 0); }) ==
          ErrorCode::DepthExceeded);
}

TEST_CASE("bind_features examples") {
    const SchemaStore store;
    const Schema one = make_schema("ONE", {exact_slot("x", "x", 1.0)});
    const std::vector<FeatureDatum> x{symbol("x", "x")};
    CHECK(bind_features(one, x, store) == std::vector<Binding>{{0, 0, 1.0}});

    const Schema twins = make_schema("TWINS", {exact_slot("eye", "eye", 0.9), exact_slot("eye", "eye", 0.9)});
    const std::vector<FeatureDatum> eye{symbol("eye", "eye")};
    CHECK(bind_features(twins, eye, store) == std::vector<Binding>{{0, 0, 1.0}});

    const Schema face = face_schema();
    const std::vector<FeatureDatum> eye_nose{symbol("eye", "eye"), symbol("nose", "nose")};
    const auto bindings = bind_features(face, eye_nose, store);
    const auto expected = brute_force_assignment(weights_of(face), score_matrix(face, eye_nose, store));
    CHECK(as_oracle(bindings) == expected);
    double total = 0.0;
    for (const auto& b : bindings) total += face.slots[b.slot_index].weight * b.score;
    CHECK(total == doctest::Approx(1.6));
    CHECK(consumption_analysis(face, eye_nose, 0, store).fit == doctest::Approx(1.6 / 3.6));

    std::vector<FeatureDatum> many(17, symbol("eye", "eye"));
    CHECK(error_code([&] { bind_features(face, many, store); }) == ErrorCode::CapacityExceeded);
    std::vector<Slot> wide(17, exact_slot("x", "x", 0.5));
    CHECK(error_code([&] { bind_features(make_schema("W", wide), x, store); }) ==
          ErrorCode::CapacityExceeded);
}

TEST_CASE("assignment prefers the best total over greedy choices") {
    // Greedy would give slot 0 feature 0 (0.9) and leave slot 1 with nothing.
    const std::vector<double> weights{1.0, 1.0};
    const std::vector<std::vector<double>> scores{{0.9, 0.8}, {0.85, 0.0}};
    const auto b = assign_exact(weights, scores);
    CHECK(b == std::vector<Binding>{{0, 1, 0.8}, {1, 0, 0.85}});
}

TEST_CASE("consumption_analysis verdicts") {
    const auto store = store_of({face_schema()});
    const std::vector<FeatureDatum> all{symbol("eye", "eye"), symbol("eye", "eye"), symbol("nose", "nose"),
                                        symbol("mouth", "mouth"), symbol("ear", "ear")};
    const auto full = consumption_analysis(store, "FACE", all, 0);
    CHECK(full.fit == doctest::Approx(1.0));
    CHECK(full.verdict == Verdict::Satisfied);
    CHECK(full.empty_slots.empty());

    const std::vector<FeatureDatum> ear{symbol("ear", "ear")};
    const auto lonely = consumption_analysis(store, "FACE", ear, 2);
    CHECK(lonely.fit == doctest::Approx(0.4 / 3.6));
    CHECK(lonely.verdict == Verdict::Impasse);
    CHECK(consumption_analysis(store, "FACE", ear, 0).verdict == Verdict::Gap);

    const std::vector<FeatureDatum> eye_nose{symbol("eye", "eye"), symbol("nose", "nose"),
                                             symbol("tail", "tail")};
    const auto partial = consumption_analysis(store, "FACE", eye_nose, 1);
    CHECK(partial.fit == doctest::Approx(1.6 / 3.6));
    CHECK(partial.verdict == Verdict::Gap);
    CHECK(partial.empty_slots == std::vector<std::size_t>{1, 3, 4});
    CHECK(partial.unexplained == std::vector<std::size_t>{2});

    CHECK(error_code([&] { consumption_analysis(store, "CAR", ear, 0); }) == ErrorCode::UnknownSchema);
}

TEST_CASE("Satisfied needs the critical slots") {
    std::vector<Slot> slots{exact_slot("key", "key", 0.8)};
    for (int i = 0; i < 10; ++i) slots.push_back(exact_slot("f" + std::to_string(i), "v", 1.0));
    const auto store = store_of({make_schema("BIG", slots)});
    std::vector<FeatureDatum> minor;
    for (int i = 0; i < 10; ++i) minor.push_back(symbol("f" + std::to_string(i), "v"));
    const auto r = consumption_analysis(store, "BIG", minor, 1);
    CHECK(r.fit == doctest::Approx(10.0 / 10.8));
    CHECK(r.fit >= 0.9);
    CHECK(r.verdict == Verdict::Gap);

    // Critical slot bound, but with a weak score.
    const auto ranged = store_of({make_schema("R", {range_slot("t", 0.0, 10.0, 0.9), exact_slot("u", "u", 0.05)})});
    const std::vector<FeatureDatum> weak{number("t", 13.0), symbol("u", "u")};
    const auto rr = consumption_analysis(ranged, "R", weak, 1);
    CHECK(rr.bindings.size() == 2);
    CHECK(rr.verdict == Verdict::Gap);
}

TEST_CASE("highlight_slots") {
    const auto store = store_of({face_schema(), make_schema("SOLO", {exact_slot("x", "x", 0.6)})});
    const Schema& face = store.at("FACE");

    const std::vector<FeatureDatum> all{symbol("eye", "eye"), symbol("eye", "eye"), symbol("nose", "nose"),
                                        symbol("mouth", "mouth"), symbol("ear", "ear")};
    CHECK(highlight_slots(consumption_analysis(store, "FACE", all, 0), face).empty());

    const std::vector<FeatureDatum> eye_nose{symbol("eye", "eye"), symbol("nose", "nose")};
    const auto bid = highlight_slots(consumption_analysis(store, "FACE", eye_nose, 0), face);
    REQUIRE(bid.size() == 3);
    CHECK(bid[0].dimension.name() == "eye");
    CHECK(bid[0].weight == 0.9);
    CHECK(bid[1].dimension.name() == "mouth");
    CHECK(bid[2].dimension.name() == "ear");

    const auto solo = highlight_slots(consumption_analysis(store, "SOLO", {}, 0), store.at("SOLO"));
    REQUIRE(solo.size() == 1);
    CHECK(solo[0].slot_index == 0);
    CHECK(solo[0].expectation == Expectation{ExactSymbol{"x"}});
}

TEST_CASE("bind_features equals exhaustive enumeration on random instances") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> size(0, 6), grid(0, 4), wgrid(1, 4);
    const SchemaStore store;
    int mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Schema s = make_schema("S", {});
        const int n = std::max(1, size(rng));
        for (int i = 0; i < n; ++i)
            s.slots.push_back(range_slot("d" + std::to_string(grid(rng) % 3), grid(rng), grid(rng) + 1.0,
                                         wgrid(rng) / 4.0));
        std::vector<FeatureDatum> features;
        const int m = size(rng);
        for (int j = 0; j < m; ++j)
            features.push_back(number("d" + std::to_string(grid(rng) % 3), grid(rng) * 0.75));
        const auto got = as_oracle(bind_features(s, features, store));
        const auto want = brute_force_assignment(weights_of(s), score_matrix(s, features, store));
        if (got != want) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("report invariants on random instances") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> size(1, 6), dim(0, 3), sym(0, 1), wgrid(1, 10), iter(0, 3);
    const char* dims[] = {"a", "b", "c", "d"};
    const char* syms[] = {"x", "y"};
    for (int trial = 0; trial < 300; ++trial) {
        Schema s = make_schema("S", {});
        const int n = size(rng);
        for (int i = 0; i < n; ++i) s.slots.push_back(exact_slot(dims[dim(rng)], syms[sym(rng)], wgrid(rng) / 10.0));
        const auto store = store_of({s});
        std::vector<FeatureDatum> features;
        const int m = size(rng) - 1;
        for (int j = 0; j < m; ++j) features.push_back(symbol(dims[dim(rng)], syms[sym(rng)]));
        const int iteration = iter(rng);
        const auto r = consumption_analysis(s, features, iteration, store);

        // Partition of slots and features.
        std::vector<int> slot_seen(s.slots.size(), 0), feature_seen(features.size(), 0);
        double bound = 0.0;
        for (const auto& b : r.bindings) {
            ++slot_seen[b.slot_index];
            ++feature_seen[b.feature_index];
            bound += s.slots[b.slot_index].weight * b.score;
        }
        for (auto e : r.empty_slots) ++slot_seen[e];
        for (auto u : r.unexplained) ++feature_seen[u];
        CHECK(std::all_of(slot_seen.begin(), slot_seen.end(), [](int c) { return c == 1; }));
        CHECK(std::all_of(feature_seen.begin(), feature_seen.end(), [](int c) { return c == 1; }));
        CHECK(r.fit == doctest::Approx(bound / s.total_weight()).epsilon(1e-9));
        for (std::size_t i = 1; i < r.empty_slots.size(); ++i) {
            const double prev = s.slots[r.empty_slots[i - 1]].weight;
            const double cur = s.slots[r.empty_slots[i]].weight;
            CHECK((prev > cur || (prev == cur && r.empty_slots[i - 1] < r.empty_slots[i])));
        }

        // Verdict recomputed from fit and bindings with the default thresholds.
        bool critical = true;
        for (std::size_t i = 0; i < s.slots.size(); ++i) {
            if (s.slots[i].weight < 0.8) continue;
            bool ok = false;
            for (const auto& b : r.bindings) ok = ok || (b.slot_index == i && b.score >= 0.5);
            critical = critical && ok;
        }
        Verdict expect = Verdict::Gap;
        if (r.fit >= 0.9 - 1e-12 && critical)
            expect = Verdict::Satisfied;
        else if (r.fit < 0.2 - 1e-12 && iteration >= 1)
            expect = Verdict::Impasse;
        CHECK(r.verdict == expect);

        // Adding a perfect match for an empty slot never lowers fit.
        if (!r.empty_slots.empty() && features.size() < 16) {
            const Slot& target = s.slots[r.empty_slots.front()];
            auto more = features;
            more.push_back(symbol(target.dimension.name(), std::get<ExactSymbol>(target.expectation).symbol));
            CHECK(consumption_analysis(s, more, iteration, store).fit >= r.fit - 1e-12);
        }
    }
}

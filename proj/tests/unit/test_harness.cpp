#include <sstream>

#include "doctest.h"
#include "ouroboros/error.hpp"
#include "ouroboros/loop_engine.hpp"
#include "support/fixtures.hpp"

using namespace ouroboros;
using namespace ouroboros::testing;

namespace {

HighlightEntry request(const std::string& dim) { return {DimensionId(dim), ExactSymbol{dim}, 0.7, 0}; }

GroundFeature on_request(FeatureDatum f, Position pos) {
    f.position = pos;
    DimensionId dim = f.dimension;
    return {std::move(f), {RevealKind::OnRequest, 0, dim}};
}

GroundFeature initial(FeatureDatum f) { return {std::move(f), {RevealKind::Initial, 0, DimensionId()}}; }

}  // namespace

TEST_CASE("build_scenario") {
    const auto face = build_scenario(data_file("face.scenario"));
    CHECK(face.name == "face");
    REQUIRE(face.ground.size() == 5);
    CHECK(face.ground[0].policy.kind == RevealKind::Initial);
    for (std::size_t i = 1; i < 5; ++i) CHECK(face.ground[i].policy.kind == RevealKind::OnRequest);
    CHECK(face.ground[2].policy.dimension.name() == "nose");

    const auto duck = build_scenario(data_file("duck_rabbit.scenario"));
    for (const auto& g : duck.ground) CHECK(g.policy.kind == RevealKind::Initial);

    std::stringstream none(R"({"dim":"eye","value":"eye","policy":{"kind":"on_request","dim":"eye"},"salience":1.0})"
                           "\n");
    CHECK(error_code([&] { read_scenario(none, "x"); }) == ErrorCode::NoInitialFeature);

    std::stringstream bad(R"({"dim":"eye","value":"eye","policy":{"kind":"sometime"},"salience":1.0})"
                          "\n");
    CHECK(error_code([&] { read_scenario(bad, "x"); }) == ErrorCode::ParseError);

    std::stringstream timed(R"({"dim":"a","value":2.5,"policy":{"kind":"initial"},"salience":0.5})"
                            "\n"
                            R"({"dim":"b","value":"b","pos":[1,2],"policy":{"kind":"at_tick","t":4},"salience":1})"
                            "\n");
    const auto s = read_scenario(timed, "timed");
    REQUIRE(s.ground.size() == 2);
    CHECK(std::get<double>(s.ground[0].feature.value) == 2.5);
    CHECK(s.ground[1].policy.at_tick == 4);
    std::stringstream out;
    write_scenario(s, out);
    CHECK(read_scenario(out, "timed").ground.size() == 2);

    CHECK(error_code([&] { build_scenario("/nonexistent/x.scenario"); }) == ErrorCode::IoError);
}

TEST_CASE("jitter derives from the seed") {
    const auto a = build_scenario(data_file("face.scenario"), 7, 0.1);
    const auto b = build_scenario(data_file("face.scenario"), 7, 0.1);
    const auto c = build_scenario(data_file("face.scenario"), 8, 0.1);
    const auto plain = build_scenario(data_file("face.scenario"));
    std::stringstream sa, sb, sc, sp;
    write_scenario(a, sa);
    write_scenario(b, sb);
    write_scenario(c, sc);
    write_scenario(plain, sp);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str() != sc.str());
    CHECK(sa.str() != sp.str());
    for (std::size_t i = 0; i < a.ground.size(); ++i) {
        const auto& p = *a.ground[i].feature.position;
        const auto& q = *plain.ground[i].feature.position;
        CHECK(std::abs(p.x - q.x) <= 0.1);
        CHECK(std::abs(p.y - q.y) <= 0.1);
    }
}

TEST_CASE("attend") {
    const Scenario scenario{"s",
                            {initial(symbol("eye", "eye")), on_request(symbol("eye", "eye"), {1, 1}),
                             on_request(symbol("nose", "n1"), {0, 0}), on_request(symbol("nose", "n2"), {0, 1})}};
    ScenarioRun run(scenario);
    auto eye = attend(run, request("eye"), 3);
    REQUIRE(eye.has_value());
    CHECK(eye->ground_index == 1);
    CHECK(eye->feature.tick == 3);
    CHECK_FALSE(attend(run, request("eye"), 4).has_value());
    CHECK_FALSE(attend(run, request("ear"), 4).has_value());
    auto n1 = attend(run, request("nose"), 5);
    auto n2 = attend(run, request("nose"), 6);
    REQUIRE(n1.has_value());
    REQUIRE(n2.has_value());
    CHECK(n1->ground_index == 2);
    CHECK(n2->ground_index == 3);
    CHECK_FALSE(attend(run, request("nose"), 7).has_value());
}

TEST_CASE("scan paths") {
    const auto store = load_store(data_file("face.store"));
    const auto scenario = build_scenario(data_file("face.scenario"), 3, 0.05);
    const auto trace = run_episode(store, MonitorState{}, scenario, EngineConfig{});
    const auto path = scan_path(trace);
    REQUIRE(path.size() == 4);
    const char* order[] = {"eye", "nose", "mouth", "ear"};
    for (std::size_t i = 0; i < 4; ++i) CHECK(path[i].dimension.name() == order[i]);
    for (std::size_t i = 1; i < path.size(); ++i) CHECK(path[i].tick > path[i - 1].tick);
    CHECK(path[0].position.x == doctest::Approx(1.0).epsilon(0.1));

    const auto again = run_episode(store, MonitorState{}, build_scenario(data_file("face.scenario"), 3, 0.05),
                                   EngineConfig{});
    CHECK(scan_path(again) == path);

    CHECK(scan_path(EpisodeTrace{}).empty());

    GroundFeature later{symbol("nose", "nose"), {RevealKind::AtTick, 2, DimensionId()}};
    later.feature.position = Position{0, 0};
    const Scenario passive{"p", {initial(symbol("eye", "eye")), later}};
    const auto ptrace = run_episode(store, MonitorState{}, passive, EngineConfig{}, {6, true});
    CHECK(scan_path(ptrace).empty());
}

TEST_CASE("scan path follows descending slot weight") {
    // Weights chosen so the ordering is strict.
    const auto store = store_of({make_schema(
        "S", {exact_slot("a", "a", 0.3), exact_slot("b", "b", 0.95), exact_slot("c", "c", 0.6),
              exact_slot("d", "d", 0.75), exact_slot("seed", "seed", 0.2)})});
    const Scenario scenario{"w",
                            {on_request(symbol("a", "a"), {0, 0}), on_request(symbol("b", "b"), {1, 0}),
                             on_request(symbol("c", "c"), {2, 0}), on_request(symbol("d", "d"), {3, 0}),
                             initial(symbol("seed", "seed"))}};
    const auto trace = run_episode(store, MonitorState{}, scenario, EngineConfig{});
    const auto path = scan_path(trace);
    REQUIRE(path.size() == 4);
    const char* order[] = {"b", "d", "c", "a"};
    for (std::size_t i = 0; i < 4; ++i) CHECK(path[i].dimension.name() == order[i]);
}

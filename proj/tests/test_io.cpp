#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "urysohn/io.hpp"

using namespace urysohn;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(URYSOHN_DATA_DIR) + "/" + name; }

std::string schema_error(const json& j) {
    try {
        monoid_from_json(j);
    } catch (const SchemaError& e) {
        return e.where();
    }
    return "none";
}

std::string space_error(const json& j) {
    try {
        space_from_json(j);
    } catch (const SchemaError& e) {
        return e.where();
    }
    return "none";
}

} // namespace

TEST_CASE("monoid files round trip for every builtin") {
    for (const auto& name : builtin_names()) {
        auto spec = builtin(name);
        auto j = monoid_to_json(spec);
        auto back = monoid_from_json(j);
        INFO(name);
        CHECK(monoid_to_json(back) == j);
        CHECK(back.kind() == spec.kind());
        auto samples = spec.is_finite() ? spec.finite_elements() : spec.carrier().sample_elements();
        for (const auto& r : samples) {
            CHECK(back.contains(r));
            CHECK(format_value(back, ExtendedValue::principal(r)) == format_value(spec, ExtendedValue::principal(r)));
        }
    }
}

TEST_CASE("shipped data files") {
    auto m = monoid_from_json(read_json_file(data("finite_0_1_2_72.json")));
    CHECK(m.is_finite());
    CHECK(m.labels() == std::vector<std::string>{"0", "1", "2", "7/2"});
    auto report = four_values_search(m);
    REQUIRE(report.witness);
    CHECK(format_quadruple(m, *report.witness) == "(1,1,7/2,2;2)");

    auto t = monoid_from_json(read_json_file(data("two_three.json")));
    CHECK(star_add(t, ExtendedValue::principal(1), ExtendedValue::principal(3)) == ExtendedValue::principal(4));

    auto s = space_from_json(read_json_file(data("example_four_points.json")));
    CHECK(s.size() == 4);
    CHECK(s.d(*s.index_of("y"), *s.index_of("z")) == ExtendedValue::principal(4));
    CHECK(space_to_json(space_from_json(space_to_json(s))) == space_to_json(s));
    CHECK_THROWS_AS(read_json_file(data("missing.json")), Error);
}

TEST_CASE("schema errors point at the bad node") {
    CHECK(schema_error(json::array()) == "");
    CHECK(schema_error({{"kind", "other"}}) == "/kind");
    CHECK(schema_error({{"kind", "finite"}, {"elements", {"0", 1}}, {"table", json::array()}}) == "/elements/1");
    CHECK(schema_error({{"kind", "finite"}, {"elements", {"0", "a"}}, {"table", {{0, 1}, {1, "x"}}}}) == "/table/1/1");
    CHECK(schema_error({{"kind", "finite"}, {"elements", {"0", "a"}}, {"table", {{0, 1}}}}) == "/table");
    CHECK(schema_error({{"kind", "interval-max"},
                        {"intervals", {{{"lo", "0"}, {"lo_closed", true}, {"hi", "x/y"}}}}}) == "/intervals/0/hi");
    CHECK(schema_error({{"kind", "interval-max"}, {"intervals", {{{"lo", "0"}, {"hi", "1"}}}}}) ==
          "/intervals/0");
    CHECK(schema_error({{"kind", "interval-max"},
                        {"intervals", {{{"lo", "0"}, {"lo_closed", true}, {"hi", "inf"}}}},
                        {"excluded", {"1", 2}}}) == "/excluded/1");

    json ok_space = {{"monoid", "R2"}, {"points", {"a", "b"}}, {"distances", {{"a", "b", "2"}}}};
    CHECK(space_error(ok_space) == "none");
    auto missing = ok_space;
    missing["distances"] = json::array();
    CHECK(space_error(missing) == "/distances");
    auto unknown = ok_space;
    unknown["distances"] = {{"a", "c", "1"}};
    CHECK(space_error(unknown) == "/distances/0/1");
    auto bad_value = ok_space;
    bad_value["distances"] = {{"a", "b", "5"}};
    CHECK(space_error(bad_value) == "/distances/0/2");
    auto conflict = ok_space;
    conflict["distances"] = {{"a", "b", "1"}, {"b", "a", "2"}};
    CHECK(space_error(conflict) == "/distances/1");
    auto no_builtin = ok_space;
    no_builtin["monoid"] = "R0";
    CHECK(space_error(no_builtin) == "/monoid");
    auto inline_monoid = ok_space;
    inline_monoid["monoid"] = {{"kind", "finite"}, {"elements", {"0"}}};
    CHECK(space_error(inline_monoid) == "/monoid");
}

TEST_CASE("a non-string distance names its pointer once") {
    json j = {{"monoid", "R2"}, {"points", {"a", "b"}}, {"distances", {{"a", "b", 1}}}};
    try {
        space_from_json(j);
        FAIL("accepted a numeric distance");
    } catch (const SchemaError& e) {
        CHECK(e.where() == "/distances/0/2");
        CHECK(std::string(e.what()) == "/distances/0/2: expected a string");
    }
}

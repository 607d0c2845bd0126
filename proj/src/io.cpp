#include "urysohn/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace urysohn {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.is_object()) {
        throw SchemaError(where, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(where, "missing field '" + key + "'");
    }
    return *it;
}

std::string string_at(const json& j, const std::string& where) {
    if (!j.is_string()) {
        throw SchemaError(where, "expected a string");
    }
    return j.get<std::string>();
}

bool bool_at(const json& j, const std::string& where) {
    if (!j.is_boolean()) {
        throw SchemaError(where, "expected true or false");
    }
    return j.get<bool>();
}

const json& array_at(const json& j, const std::string& where) {
    if (!j.is_array()) {
        throw SchemaError(where, "expected an array");
    }
    return j;
}

Rational rational_at(const json& j, const std::string& where) {
    auto r = Rational::parse(string_at(j, where));
    if (!r) {
        throw SchemaError(where, "expected a rational \"p/q\"");
    }
    return *r;
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

DistanceMonoidSpec monoid_at(const json& j, const std::string& where) {
    std::string kind = string_at(field(j, where, "kind"), at(where, "kind"));
    DistanceMonoidSpec spec = [&] {
        if (kind == "finite") {
            std::vector<std::string> labels;
            const auto& elems = array_at(field(j, where, "elements"), at(where, "elements"));
            for (std::size_t i = 0; i < elems.size(); ++i) {
                labels.push_back(string_at(elems[i], at(at(where, "elements"), i)));
            }
            std::vector<std::vector<int>> table;
            const auto& rows = array_at(field(j, where, "table"), at(where, "table"));
            for (std::size_t i = 0; i < rows.size(); ++i) {
                auto rw = at(at(where, "table"), i);
                std::vector<int> row;
                for (std::size_t k = 0; k < array_at(rows[i], rw).size(); ++k) {
                    const auto& v = rows[i][k];
                    if (v.is_null()) {
                        row.push_back(-1);
                    } else if (v.is_number_integer()) {
                        row.push_back(v.get<int>());
                    } else {
                        throw SchemaError(at(rw, k), "expected an element index or null");
                    }
                }
                table.push_back(std::move(row));
            }
            try {
                return DistanceMonoidSpec::finite(std::move(labels), std::move(table));
            } catch (const std::invalid_argument& e) {
                throw SchemaError(at(where, "table"), e.what());
            }
        }
        MonoidKind mk;
        if (kind == "interval-truncated-add") {
            mk = MonoidKind::IntervalTruncatedAdd;
        } else if (kind == "interval-max") {
            mk = MonoidKind::IntervalMax;
        } else {
            throw SchemaError(at(where, "kind"), "unknown kind '" + kind + "'");
        }
        std::vector<IntervalComponent> comps;
        const auto& ivs = array_at(field(j, where, "intervals"), at(where, "intervals"));
        for (std::size_t i = 0; i < ivs.size(); ++i) {
            auto w = at(at(where, "intervals"), i);
            IntervalComponent c;
            c.lo = rational_at(field(ivs[i], w, "lo"), at(w, "lo"));
            c.lo_closed = bool_at(field(ivs[i], w, "lo_closed"), at(w, "lo_closed"));
            const auto& hi = field(ivs[i], w, "hi");
            if (!(hi.is_string() && hi.get<std::string>() == "inf")) {
                c.hi = rational_at(hi, at(w, "hi"));
            }
            c.hi_closed = ivs[i].contains("hi_closed") ? bool_at(ivs[i]["hi_closed"], at(w, "hi_closed")) : false;
            comps.push_back(std::move(c));
        }
        std::optional<Rational> lattice;
        if (j.contains("lattice") && !j["lattice"].is_null()) {
            lattice = rational_at(j["lattice"], at(where, "lattice"));
        }
        std::vector<Rational> excluded;
        if (j.contains("excluded")) {
            const auto& ex = array_at(j["excluded"], at(where, "excluded"));
            for (std::size_t i = 0; i < ex.size(); ++i) {
                excluded.push_back(rational_at(ex[i], at(at(where, "excluded"), i)));
            }
        }
        try {
            return DistanceMonoidSpec::interval(mk, IntervalUnionCarrier(std::move(comps), lattice, std::move(excluded)));
        } catch (const std::invalid_argument& e) {
            throw SchemaError(at(where, "intervals"), e.what());
        } catch (const Error& e) {
            throw SchemaError(at(where, "intervals"), e.what());
        }
    }();
    if (j.contains("name")) {
        spec.set_name(string_at(j["name"], at(where, "name")));
    }
    return spec;
}

} // namespace

DistanceMonoidSpec monoid_from_json(const json& j) { return monoid_at(j, ""); }

json monoid_to_json(const DistanceMonoidSpec& spec) {
    json j;
    if (!spec.name().empty()) {
        j["name"] = spec.name();
    }
    j["kind"] = to_string(spec.kind());
    if (spec.is_finite()) {
        j["elements"] = spec.labels();
        json rows = json::array();
        for (const auto& row : spec.table()) {
            json r = json::array();
            for (int v : row) {
                r.push_back(v < 0 ? json(nullptr) : json(v));
            }
            rows.push_back(std::move(r));
        }
        j["table"] = std::move(rows);
        return j;
    }
    const auto& c = spec.carrier();
    json ivs = json::array();
    for (const auto& comp : c.components()) {
        ivs.push_back({{"lo", comp.lo.str()},
                       {"lo_closed", comp.lo_closed},
                       {"hi", comp.hi ? comp.hi->str() : std::string("inf")},
                       {"hi_closed", comp.hi_closed}});
    }
    j["intervals"] = std::move(ivs);
    if (c.lattice()) {
        j["lattice"] = c.lattice()->str();
    }
    if (!c.excluded().empty()) {
        json ex = json::array();
        for (const auto& r : c.excluded()) {
            ex.push_back(r.str());
        }
        j["excluded"] = std::move(ex);
    }
    return j;
}

FiniteMetricSpace space_from_json(const json& j) {
    const auto& m = field(j, "", "monoid");
    DistanceMonoidSpec spec = [&] {
        if (m.is_string()) {
            try {
                return builtin(m.get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw SchemaError("/monoid", e.what());
            }
        }
        return monoid_at(m, "/monoid");
    }();
    std::vector<std::string> labels;
    const auto& pts = array_at(field(j, "", "points"), "/points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        labels.push_back(string_at(pts[i], at("/points", i)));
    }
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
        throw SchemaError("/points", "duplicate point labels");
    }
    FiniteMetricSpace space(spec, labels);
    std::map<std::pair<std::size_t, std::size_t>, ExtendedValue> given;
    const auto& ds = array_at(field(j, "", "distances"), "/distances");
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto w = at("/distances", i);
        if (!ds[i].is_array() || ds[i].size() != 3) {
            throw SchemaError(w, "expected [label, label, value]");
        }
        auto a = space.index_of(string_at(ds[i][0], at(w, 0)));
        auto b = space.index_of(string_at(ds[i][1], at(w, 1)));
        if (!a || !b) {
            throw SchemaError(a ? at(w, 1) : at(w, 0), "unknown point");
        }
        ExtendedValue v;
        auto text = string_at(ds[i][2], at(w, 2));
        try {
            v = parse_value(spec, text);
        } catch (const Error& e) {
            throw SchemaError(at(w, 2), e.what());
        }
        if (*a == *b) {
            if (!v.is_zero()) {
                throw SchemaError(at(w, 2), "distance from a point to itself must be 0");
            }
            continue;
        }
        auto key = std::minmax(*a, *b);
        if (auto it = given.find(key); it != given.end() && it->second != v) {
            throw SchemaError(w, "conflicts with an earlier distance for the same pair");
        }
        given[key] = v;
        space.set(*a, *b, v);
    }
    for (std::size_t a = 0; a < labels.size(); ++a) {
        for (std::size_t b = a + 1; b < labels.size(); ++b) {
            if (!given.count({a, b})) {
                throw SchemaError("/distances", "no distance for (" + labels[a] + ", " + labels[b] + ")");
            }
        }
    }
    return space;
}

json space_to_json(const FiniteMetricSpace& space) {
    json j;
    const auto& spec = space.spec();
    auto names = builtin_names();
    if (std::find(names.begin(), names.end(), spec.name()) != names.end()) {
        j["monoid"] = spec.name();
    } else {
        j["monoid"] = monoid_to_json(spec);
    }
    j["points"] = space.points();
    json ds = json::array();
    for (std::size_t a = 0; a < space.size(); ++a) {
        for (std::size_t b = a + 1; b < space.size(); ++b) {
            ds.push_back({space.points()[a], space.points()[b], format_value(spec, space.d(a, b))});
        }
    }
    j["distances"] = std::move(ds);
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
}

} // namespace urysohn

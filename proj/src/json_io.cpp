#include "mmskit/json_io.hpp"

#include <fstream>
#include <limits>

#include "mmskit/errors.hpp"

namespace mmskit::io {

Rational rational_from_json(const Json& j) {
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            return Rational::parse_value(std::to_string(v));
        }
        return Rational(static_cast<std::int64_t>(v));
    }
    if (j.is_number_integer()) {
        const auto v = j.get<std::int64_t>();
        if (v < 0) throw ParseError("negative value " + std::to_string(v));
        return Rational(v);
    }
    if (j.is_string()) return Rational::parse_value(j.get<std::string>());
    throw ParseError("expected integer or \"p/q\" string, got " + j.dump());
}

Json rational_to_json(const Rational& r) { return r.to_fraction_string(); }

namespace {

Json value_to_json(const Rational& r) {
    if (r.is_integer() && r.get().get_num().fits_slong_p()) {
        return static_cast<std::int64_t>(r.get().get_num().get_si());
    }
    return r.to_fraction_string();
}

int int_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw ParseError(std::string("missing or non-integer field '") + key + "'");
    }
    const auto v = j.at(key).get<std::int64_t>();
    if (v < 0 || v > std::numeric_limits<int>::max()) {
        throw ParseError(std::string("field '") + key + "' out of range");
    }
    return static_cast<int>(v);
}

}  // namespace

Instance instance_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    const int n = int_field(j, "n");
    const int m = int_field(j, "m");
    if (!j.contains("values") || !j.at("values").is_array()) {
        throw ParseError("missing 'values' array");
    }
    const auto& rows = j.at("values");
    if (static_cast<int>(rows.size()) != n) {
        throw ParseError("'values' has " + std::to_string(rows.size()) + " rows, n = " +
                         std::to_string(n));
    }
    std::vector<std::vector<Rational>> values;
    values.reserve(static_cast<std::size_t>(n));
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != m) {
            throw ParseError("each row of 'values' must have m = " + std::to_string(m) + " entries");
        }
        std::vector<Rational> r;
        r.reserve(static_cast<std::size_t>(m));
        for (const auto& v : row) r.push_back(rational_from_json(v));
        values.push_back(std::move(r));
    }
    return Instance(n, m, std::move(values));
}

Json instance_to_json(const Instance& inst) {
    Json rows = Json::array();
    for (const auto& row : inst.values()) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(value_to_json(v));
        rows.push_back(std::move(r));
    }
    Json out = Json::object();
    out["n"] = inst.n();
    out["m"] = inst.m();
    out["values"] = std::move(rows);
    return out;
}

Json bundle_to_json(const Bundle& b) {
    Json out = Json::array();
    for (int g : b) out.push_back(g);
    return out;
}

Bundle bundle_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("bundle must be an array of good ids");
    std::vector<int> goods;
    for (const auto& g : j) {
        if (!g.is_number_integer()) throw ParseError("good id must be an integer");
        goods.push_back(g.get<int>());
    }
    try {
        return Bundle(std::move(goods));
    } catch (const ContractViolation& e) {
        throw ParseError(e.what());
    }
}

Allocation allocation_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("bundles") || !j.at("bundles").is_array()) {
        throw ParseError("allocation must be an object with a 'bundles' array");
    }
    Allocation a;
    for (const auto& b : j.at("bundles")) a.bundles.push_back(bundle_from_json(b));
    if (j.contains("unassigned")) a.unassigned = bundle_from_json(j.at("unassigned"));
    return a;
}

Json allocation_to_json(const Allocation& alloc) {
    Json bundles = Json::array();
    for (const auto& b : alloc.bundles) bundles.push_back(bundle_to_json(b));
    Json out = Json::object();
    out["bundles"] = std::move(bundles);
    out["unassigned"] = bundle_to_json(alloc.unassigned);
    return out;
}

Json partition_to_json(const Partition& p) {
    Json out = Json::array();
    for (const auto& b : p.bundles) out.push_back(bundle_to_json(b));
    return out;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace mmskit::io

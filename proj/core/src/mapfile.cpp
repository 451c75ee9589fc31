#include "dyngreen/mapfile.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dyngreen {

namespace {

using nlohmann::json;

Rat parse_coeff(const json& v) {
    if (v.is_number_integer()) {
        if (v.is_number_unsigned()) return parse_rat(std::to_string(v.get<unsigned long long>()));
        return parse_rat(std::to_string(v.get<long long>()));
    }
    if (v.is_string()) return parse_rat(v.get<std::string>());
    throw DomainError("map file: coefficients must be integers or \"p/q\" strings");
}

BinaryForm parse_form(const json& obj, const char* key, long d) {
    if (!obj.contains(key) || !obj.at(key).is_array()) throw DomainError(std::string("map file: missing array ") + key);
    const json& arr = obj.at(key);
    if (static_cast<long>(arr.size()) != d + 1)
        throw DomainError(std::string("map file: ") + key + " has " + std::to_string(arr.size()) +
                          " coefficients, expected d+1 = " + std::to_string(d + 1));
    std::vector<Rat> c;
    c.reserve(arr.size());
    for (const auto& v : arr) c.push_back(parse_coeff(v));
    return BinaryForm(std::move(c));
}

}  // namespace

MapFile parse_map_file(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("map file: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("map file: expected a JSON object");
    if (!j.contains("d") || !j.at("d").is_number_integer()) throw DomainError("map file: missing integer d");
    const long d = j.at("d").get<long>();
    if (d < 2) throw DomainError("map file: d must be >= 2");
    BinaryForm f1 = parse_form(j, "F1", d);
    BinaryForm f2 = parse_form(j, "F2", d);
    std::string label;
    if (j.contains("label")) {
        if (!j.at("label").is_string()) throw DomainError("map file: label must be a string");
        label = j.at("label").get<std::string>();
    }
    if (resultant(f1, f2) == 0)
        throw DomainError("map file: Res(F1, F2) = 0, the forms share a linear factor");
    return MapFile{MapPair(std::move(f1), std::move(f2)), std::move(label)};
}

MapFile load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("map file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_map_file(ss.str());
}

std::string to_json(const MapFile& file) {
    json j;
    j["d"] = file.map.degree();
    auto arr = [](const BinaryForm& f) {
        json a = json::array();
        for (const auto& c : f.coeffs()) a.push_back(to_string(c));
        return a;
    };
    j["F1"] = arr(file.map.f1());
    j["F2"] = arr(file.map.f2());
    if (!file.label.empty()) j["label"] = file.label;
    return j.dump();
}

}  // namespace dyngreen

#include "matchkern/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <stdexcept>

namespace matchkern {

using nlohmann::json;

namespace {

json matching_json(const Matching& m) {
    json pairs = json::array();
    for (const auto& [a, b] : m.pairs()) pairs.push_back(json::array({a, b}));
    return pairs;
}

Matching matching_from(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("matching JSON must be an array of pairs");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("matching JSON pair must have two elements");
        pairs.emplace_back(entry[0].get<int>(), entry[1].get<int>());
    }
    return Matching::from_pairs(std::move(pairs));
}

}  // namespace

std::string matching_to_json(const Matching& m) { return matching_json(m).dump(); }

Matching matching_from_json(const std::string& text) {
    return matching_from(json::parse(text));
}

std::vector<Matching> matchings_from_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_array()) throw std::invalid_argument("expected a JSON array");
    // Accept either a single matching or an array of matchings.
    if (!j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_number())
        return {matching_from(j)};
    std::vector<Matching> out;
    for (const auto& entry : j) out.push_back(matching_from(entry));
    return out;
}

std::string matchings_to_json(const std::vector<Matching>& ms) {
    json out = json::array();
    for (const auto& m : ms) out.push_back(matching_json(m));
    return out.dump();
}

std::string partition_to_json(const Partition& p) {
    json out = json::array();
    for (int v : p.parts()) out.push_back(v);
    return out.dump();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string matrix_to_csv(const DenseMatrix& m) {
    std::string out = "index";
    for (int j = 0; j < m.cols; ++j) out += "," + std::to_string(j);
    out += "\n";
    for (int i = 0; i < m.rows; ++i) {
        out += std::to_string(i);
        for (int j = 0; j < m.cols; ++j) out += "," + format_double(m.at(i, j));
        out += "\n";
    }
    return out;
}

std::string matrix_to_json(const DenseMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
        rows.push_back(row);
    }
    json out;
    out["size"] = m.rows;
    out["matrix"] = rows;
    return out.dump();
}

}  // namespace matchkern

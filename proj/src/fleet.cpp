#include "bsauth/fleet.hpp"

#include <map>
#include <optional>
#include <sstream>

#include "bsauth/error.hpp"

namespace bsauth {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_degrees(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "line " + std::to_string(line) + ": invalid coordinate '" + s + "'");
    }
    return v;
}

}  // namespace

FleetImport parse_fleet_csv(std::istream& in) {
    FleetImport out;
    std::string line;
    std::size_t line_no = 0;

    std::optional<std::vector<std::string>> header;
    while (!header && std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) header = split(line);
    }
    if (!header) throw Error(ErrorCode::kInvalidArgument, "fleet CSV is empty");

    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header->size(); ++i) {
        const auto& name = (*header)[i];
        if (name == "cell_id" || name == "latitude" || name == "longitude") {
            col[name] = i;
        } else {
            out.warnings.push_back("ignoring column '" + name + "'");
        }
    }
    for (const char* required : {"cell_id", "latitude", "longitude"}) {
        if (!col.contains(required)) {
            throw Error(ErrorCode::kInvalidArgument,
                        std::string("fleet CSV header is missing column '") + required + "'");
        }
    }

    std::map<CellId, std::size_t> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        auto at = [&](const char* name) -> const std::string& {
            const auto idx = col.at(name);
            if (idx >= cells.size()) {
                throw Error(ErrorCode::kInvalidArgument,
                            "line " + std::to_string(line_no) + ": missing " + name);
            }
            return cells[idx];
        };
        FleetRecord rec;
        try {
            rec.cell_id = parse_cell_id(at("cell_id"));
        } catch (const Error& e) {
            throw Error(ErrorCode::kInvalidArgument,
                        "line " + std::to_string(line_no) + ": " + e.what());
        }
        rec.location = {parse_degrees(at("latitude"), line_no),
                        parse_degrees(at("longitude"), line_no)};
        if (!rec.location.valid()) {
            throw Error(ErrorCode::kCoordinateOutOfRange,
                        "line " + std::to_string(line_no) + ": coordinate outside WGS84 bounds");
        }
        if (auto it = seen.find(rec.cell_id); it != seen.end()) {
            throw Error(ErrorCode::kDuplicateCellId,
                        "line " + std::to_string(line_no) + ": duplicate cell_id " +
                            to_string(rec.cell_id) + " (first seen on line " +
                            std::to_string(it->second) + ")");
        }
        seen.emplace(rec.cell_id, line_no);
        out.records.push_back(rec);
    }
    return out;
}

}  // namespace bsauth

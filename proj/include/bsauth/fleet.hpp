#pragma once

#include <istream>
#include <string>
#include <vector>

#include "bsauth/certificate.hpp"
#include "bsauth/geo.hpp"

namespace bsauth {

/// One registered base-station cell as published in an FCC-style export.
struct FleetRecord {
    CellId cell_id;
    GeoPoint location;
};

struct FleetImport {
    std::vector<FleetRecord> records;
    std::vector<std::string> warnings;
};

/// Parses CSV with a mandatory header naming cell_id, latitude and longitude
/// (any order). Unknown columns are skipped with a warning. Duplicate cell
/// ids and out-of-range coordinates throw, naming the 1-based file line.
FleetImport parse_fleet_csv(std::istream& in);

}  // namespace bsauth

#pragma once

#include <cstdint>

namespace bsauth {

inline constexpr double kEarthRadiusMeters = 6'371'000.0;

/// WGS84 coordinate in decimal degrees.
struct GeoPoint {
    double latitude = 0.0;
    double longitude = 0.0;

    bool valid() const;
    /// Throws kCoordinateOutOfRange unless latitude in [-90, 90] and
    /// longitude in [-180, 180].
    void validate() const;
    /// Rounded to the micro-degree grid used by canonical encodings.
    GeoPoint quantized() const;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

std::int32_t to_micro_degrees(double degrees);
double from_micro_degrees(std::int32_t micro);

enum class DistanceMetric : std::uint8_t { kHaversine, kEquirectangular };

const char* to_string(DistanceMetric m);
DistanceMetric parse_distance_metric(const char* name);

/// Great-circle distance in meters on a sphere of radius kEarthRadiusMeters.
double haversine_distance(const GeoPoint& a, const GeoPoint& b);
/// Planar approximation; only accurate for sub-kilometer separations.
double equirectangular_distance(const GeoPoint& a, const GeoPoint& b);
double distance(const GeoPoint& a, const GeoPoint& b,
                DistanceMetric metric = DistanceMetric::kHaversine);

/// Point reached travelling `meters` from `origin` along `bearing_deg`
/// (clockwise from north) on the same sphere.
GeoPoint destination(const GeoPoint& origin, double bearing_deg, double meters);

}  // namespace bsauth

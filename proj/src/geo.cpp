#include "bsauth/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "bsauth/error.hpp"

namespace bsauth {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

bool GeoPoint::valid() const {
    return std::isfinite(latitude) && std::isfinite(longitude) && latitude >= -90.0 &&
           latitude <= 90.0 && longitude >= -180.0 && longitude <= 180.0;
}

void GeoPoint::validate() const {
    if (!valid()) {
        throw Error(ErrorCode::kCoordinateOutOfRange,
                    "coordinate (" + std::to_string(latitude) + ", " + std::to_string(longitude) +
                        ") outside WGS84 bounds");
    }
}

GeoPoint GeoPoint::quantized() const {
    return {from_micro_degrees(to_micro_degrees(latitude)),
            from_micro_degrees(to_micro_degrees(longitude))};
}

std::int32_t to_micro_degrees(double degrees) {
    return static_cast<std::int32_t>(std::llround(degrees * 1e6));
}

double from_micro_degrees(std::int32_t micro) { return static_cast<double>(micro) / 1e6; }

const char* to_string(DistanceMetric m) {
    return m == DistanceMetric::kHaversine ? "haversine" : "equirectangular";
}

DistanceMetric parse_distance_metric(const char* name) {
    const std::string_view n(name);
    if (n == "haversine") return DistanceMetric::kHaversine;
    if (n == "equirectangular" || n == "euclidean") return DistanceMetric::kEquirectangular;
    throw Error(ErrorCode::kInvalidArgument, "unknown distance metric '" + std::string(n) + "'");
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
    a.validate();
    b.validate();
    const double phi1 = a.latitude * kDegToRad;
    const double phi2 = b.latitude * kDegToRad;
    const double dphi = phi2 - phi1;
    const double dlambda = (b.longitude - a.longitude) * kDegToRad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    h = std::min(1.0, std::max(0.0, h));
    return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(h));
}

double equirectangular_distance(const GeoPoint& a, const GeoPoint& b) {
    a.validate();
    b.validate();
    const double mean_phi = (a.latitude + b.latitude) / 2.0 * kDegToRad;
    double dlambda = b.longitude - a.longitude;
    if (dlambda > 180.0) dlambda -= 360.0;
    if (dlambda < -180.0) dlambda += 360.0;
    const double x = dlambda * kDegToRad * std::cos(mean_phi);
    const double y = (b.latitude - a.latitude) * kDegToRad;
    return kEarthRadiusMeters * std::sqrt(x * x + y * y);
}

double distance(const GeoPoint& a, const GeoPoint& b, DistanceMetric metric) {
    return metric == DistanceMetric::kHaversine ? haversine_distance(a, b)
                                                : equirectangular_distance(a, b);
}

GeoPoint destination(const GeoPoint& origin, double bearing_deg, double meters) {
    origin.validate();
    const double delta = meters / kEarthRadiusMeters;
    const double theta = bearing_deg * kDegToRad;
    const double phi1 = origin.latitude * kDegToRad;
    const double lambda1 = origin.longitude * kDegToRad;
    const double phi2 = std::asin(std::sin(phi1) * std::cos(delta) +
                                  std::cos(phi1) * std::sin(delta) * std::cos(theta));
    const double lambda2 =
        lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                             std::cos(delta) - std::sin(phi1) * std::sin(phi2));
    double lon = lambda2 / kDegToRad;
    lon = std::fmod(lon + 540.0, 360.0) - 180.0;
    return {phi2 / kDegToRad, lon};
}

}  // namespace bsauth

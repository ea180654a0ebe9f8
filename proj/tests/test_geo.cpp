#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "bsauth/error.hpp"
#include "bsauth/geo.hpp"

using namespace bsauth;

namespace {

// Independent oracle: chord length between the two points on the sphere,
// converted to the central angle.
double chord_distance(const GeoPoint& a, const GeoPoint& b) {
    const double d2r = std::numbers::pi / 180.0;
    auto xyz = [&](const GeoPoint& p) {
        const double la = p.latitude * d2r;
        const double lo = p.longitude * d2r;
        return std::array<double, 3>{std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo),
                                     std::sin(la)};
    };
    const auto u = xyz(a);
    const auto v = xyz(b);
    const double c = std::sqrt((u[0] - v[0]) * (u[0] - v[0]) + (u[1] - v[1]) * (u[1] - v[1]) +
                               (u[2] - v[2]) * (u[2] - v[2]));
    return 2.0 * std::asin(std::min(1.0, c / 2.0)) * kEarthRadiusMeters;
}

}  // namespace

TEST_CASE("haversine agrees with the chord formula") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lat(-90, 90);
    std::uniform_real_distribution<double> lon(-180, 180);
    for (int i = 0; i < 2000; ++i) {
        const GeoPoint a{lat(rng), lon(rng)};
        const GeoPoint b{lat(rng), lon(rng)};
        CHECK(haversine_distance(a, b) == doctest::Approx(chord_distance(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("haversine edge cases") {
    const GeoPoint p{41.6611, -91.5302};
    CHECK(haversine_distance(p, p) == 0.0);
    CHECK(haversine_distance({0, 0}, {0, 180}) ==
          doctest::Approx(std::numbers::pi * kEarthRadiusMeters).epsilon(1e-12));
    CHECK(haversine_distance({90, 0}, {-90, 0}) ==
          doctest::Approx(std::numbers::pi * kEarthRadiusMeters).epsilon(1e-12));
    // Across the antimeridian the short way round is 0.2 degrees of longitude.
    const double across = haversine_distance({0, 179.9}, {0, -179.9});
    CHECK(across == doctest::Approx(0.2 * std::numbers::pi / 180.0 * kEarthRadiusMeters));
    // One degree of latitude.
    CHECK(haversine_distance({10, 20}, {11, 20}) == doctest::Approx(111194.93).epsilon(1e-6));
}

TEST_CASE("equirectangular is close for short ranges") {
    const GeoPoint a{41.6611, -91.5302};
    const GeoPoint b{41.6700, -91.5200};
    const double h = haversine_distance(a, b);
    CHECK(std::abs(equirectangular_distance(a, b) - h) < 0.01);
    CHECK(distance(a, b, DistanceMetric::kEquirectangular) == equirectangular_distance(a, b));
    CHECK(parse_distance_metric("euclidean") == DistanceMetric::kEquirectangular);
    CHECK(parse_distance_metric("haversine") == DistanceMetric::kHaversine);
}

TEST_CASE("destination travels the requested distance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lat(-80, 80);
    std::uniform_real_distribution<double> lon(-180, 180);
    std::uniform_real_distribution<double> bearing(0, 360);
    std::uniform_real_distribution<double> meters(0, 50000);
    for (int i = 0; i < 500; ++i) {
        const GeoPoint o{lat(rng), lon(rng)};
        const double m = meters(rng);
        const auto d = destination(o, bearing(rng), m);
        CHECK(d.valid());
        CHECK(haversine_distance(o, d) == doctest::Approx(m).epsilon(1e-6));
    }
}

TEST_CASE("coordinate validation and quantization") {
    CHECK_THROWS_AS((GeoPoint{91, 0}).validate(), Error);
    CHECK_THROWS_AS((GeoPoint{0, -180.5}).validate(), Error);
    CHECK_THROWS_AS((GeoPoint{std::nan(""), 0}).validate(), Error);
    CHECK_NOTHROW((GeoPoint{-90, 180}).validate());
    CHECK(to_micro_degrees(41.6611) == 41661100);
    CHECK(to_micro_degrees(-91.5302) == -91530200);
    CHECK(from_micro_degrees(-91530200) == doctest::Approx(-91.5302));
    const GeoPoint q = GeoPoint{1.23456789, 2.0000004}.quantized();
    CHECK(q == (GeoPoint{1.234568, 2.0}));
}

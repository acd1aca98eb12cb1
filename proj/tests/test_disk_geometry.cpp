#include <doctest.h>

#include <cmath>

#include "hdisk/disk_geometry.hpp"
#include "hdisk/errors.hpp"

using namespace hdisk;

TEST_SUITE("disk_geometry") {
    TEST_CASE("disk points reject the closed exterior") {
        CHECK_THROWS_AS(DiskPoint(1.0, 0.0), InvalidArgument);
        CHECK_THROWS_AS(DiskPoint(0.8, 0.8), InvalidArgument);
        CHECK_THROWS_AS(DiskPoint(std::nan(""), 0.0), InvalidArgument);
        CHECK(DiskPoint(0.5, 0.5).modulus() == doctest::Approx(std::sqrt(0.5)));
    }

    TEST_CASE("angles wrap into [-pi, pi)") {
        CHECK(wrap_angle(pi) == doctest::Approx(-pi));
        CHECK(wrap_angle(3 * pi + 0.25) == doctest::Approx(-pi + 0.25));
        CHECK(wrap_angle(-pi) == -pi);
        CHECK(BoundaryPoint(two_pi + 1.0).theta() == doctest::Approx(1.0));
    }

    TEST_CASE("arcs") {
        CHECK_THROWS_AS(Arc(0.0, 0.0), InvalidArgument);
        CHECK_THROWS_AS(Arc(0.0, 7.0), InvalidArgument);
        const Arc a(3.0, 0.5);  // wraps across pi
        CHECK(a.contains(3.2));
        CHECK(a.contains(-pi + 0.3));
        CHECK_FALSE(a.contains(0.0));
        CHECK(a.distance(2.9) == doctest::Approx(0.1));
    }

    TEST_CASE("Poisson kernel") {
        CHECK(poisson_kernel(DiskPoint(0.0, 0.0), 1.3) == doctest::Approx(1.0));
        CHECK(poisson_kernel(DiskPoint(0.5, 0.0), 0.0) == doctest::Approx(3.0));
        const DiskPoint z = DiskPoint::polar(0.7, 0.4);
        const int n = 4096;
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += poisson_kernel(z, -pi + two_pi * j / n);
        CHECK(mean / n == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("Stolz regions") {
        CHECK(stolz_contains(BoundaryPoint(0.0), DiskPoint(0.9, 0.0)));
        CHECK_FALSE(stolz_contains(BoundaryPoint(pi), DiskPoint(0.9, 0.0)));
        CHECK(stolz_contains(BoundaryPoint(2.0), DiskPoint(0.0, 0.0)));
        // the half-angle is the boundary of the accepted set
        const double r = 0.8, h = stolz_half_angle(r);
        CHECK(stolz_contains(BoundaryPoint(0.0), DiskPoint::polar(r, 0.999 * h)));
        CHECK_FALSE(stolz_contains(BoundaryPoint(0.0), DiskPoint::polar(r, 1.001 * h)));
    }

    TEST_CASE("boundary arc of a point") {
        const Arc a = boundary_arc(DiskPoint(0.9, 0.0));
        CHECK(a.center() == doctest::Approx(0.0).epsilon(1e-12));
        // endpoints satisfy |e^{i phi} - 0.9| = 0.2
        CHECK(std::abs(std::polar(1.0, a.end()) - 0.9) == doctest::Approx(0.2).epsilon(1e-10));
        // brute-force grid check of the chord condition
        for (int j = 0; j < 2000; ++j) {
            const double t = -pi + two_pi * j / 2000.0;
            const bool inside = std::abs(std::polar(1.0, t) - 0.9) <= 0.2;
            if (std::abs(std::abs(std::polar(1.0, t) - 0.9) - 0.2) > 1e-9) CHECK(a.contains(t) == inside);
        }
        const Arc b = boundary_arc(DiskPoint::polar(0.9, pi / 2));
        CHECK(b.center() == doctest::Approx(pi / 2));
        CHECK(b.length() == doctest::Approx(a.length()));
        CHECK(boundary_arc(DiskPoint(0.9999, 0.0)).length() < 1e-3);
        CHECK(boundary_arc(DiskPoint(0.2, 0.0)).is_full_circle());
        CHECK_THROWS_AS(boundary_arc(DiskPoint(0.0, 0.0)), InvalidArgument);
    }

    TEST_CASE("Blaschke products") {
        const ZeroSequence zs{{DiskPoint(0.5, 0.0), DiskPoint(-0.5, 0.0)}};
        CHECK(std::abs(blaschke_product(zs, DiskPoint(0.0, 0.0)) - 0.25) < 1e-15);
        CHECK(std::abs(blaschke_product(zs, DiskPoint(0.5, 0.0))) < 1e-15);
        const ZeroSequence many{{DiskPoint(0.3, 0.4), DiskPoint(-0.9, 0.1), DiskPoint(0.0, 0.0), DiskPoint(0.2, -0.95)}};
        for (int j = 0; j < 200; ++j) {
            const DiskPoint z = DiskPoint::polar(1.0 - 1e-9, -pi + two_pi * j / 200.0);
            CHECK(std::abs(blaschke_product(many, z)) <= 1.0 + 1e-12);
        }
        CHECK(zs.blaschke_sum() == doctest::Approx(1.0));
    }

    TEST_CASE("rho_sigma") {
        CHECK(rho_sigma(BoundaryPoint(0.7), ZeroSequence{{DiskPoint(0.0, 0.0)}}, 2.0) == doctest::Approx(1.0));
        const ZeroSequence z9{{DiskPoint(0.9, 0.0)}};
        CHECK(rho_sigma(BoundaryPoint(0.0), z9, 1.0) == doctest::Approx(1.0));
        CHECK(rho_sigma(BoundaryPoint(pi), z9, 1.0) == doctest::Approx(19.0));
        CHECK_THROWS_AS(rho_sigma(BoundaryPoint(0.0), ZeroSequence{}, 1.0), InvalidArgument);
        CHECK_THROWS_AS(rho_sigma(BoundaryPoint(0.0), z9, 0.0), InvalidArgument);
    }

    TEST_CASE("v function") {
        const ZeroSequence w5{{DiskPoint(0.5, 0.0)}};
        CHECK(v_function(w5, DiskPoint(0.0, 0.0), 2.0) == doctest::Approx(0.5));
        CHECK(v_function(w5, DiskPoint(0.0, 0.0), 1.0) == doctest::Approx(0.5));
        CHECK(v_function(ZeroSequence{{DiskPoint(0.9, 0.0)}}, DiskPoint(0.5, 0.0)) == doctest::Approx(0.3));
    }

    TEST_CASE("nontangential supremum on probes") {
        const BoundaryPoint y(0.3);
        CHECK(nontangential_sup([](const DiskPoint&) { return 1.0; }, [](double) { return 1.0; }, y, 10) ==
              doctest::Approx(1.0));
        CHECK(nontangential_sup([](const DiskPoint&) { return 0.0; }, [](double) { return 1.0; }, y, 10) == 0.0);
        // P(z, theta_y) (1 - |z|) stays bounded by 2 inside the cone
        const double s = nontangential_sup([&](const DiskPoint& z) { return poisson_kernel(z, y.theta()); },
                                           [](double t) { return 1.0 / t; }, y, 20);
        CHECK(s <= 2.0);
        CHECK(s > 0.1);
        for (const auto& z : stolz_probe_points(y, 6)) CHECK(stolz_contains(y, z));
    }
}

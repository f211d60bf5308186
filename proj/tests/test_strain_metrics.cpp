#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "macro/error.hpp"
#include "macro/strain_metrics.hpp"

using namespace macro;

namespace {

// Gift-wrapping hull, written independently of the library's monotone chain.
std::vector<Vec2> jarvis_hull(const std::vector<Vec2>& pts)
{
    std::size_t start = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].x < pts[start].x || (pts[i].x == pts[start].x && pts[i].y < pts[start].y)) start = i;
    std::vector<Vec2> hull;
    std::size_t p = start;
    do {
        hull.push_back(pts[p]);
        std::size_t q = (p + 1) % pts.size();
        for (std::size_t r = 0; r < pts.size(); ++r) {
            const double c = cross(pts[q] - pts[p], pts[r] - pts[p]);
            if (c < 0.0 || (c == 0.0 && norm(pts[r] - pts[p]) > norm(pts[q] - pts[p]))) q = r;
        }
        p = q;
    } while (p != start && hull.size() <= pts.size());
    return hull;
}

// Exhaustive oracle: for every pair of hull-edge directions, the enclosing
// parallelogram is the product of the two slab widths divided by |sin|.
double oracle_area(const std::vector<Vec2>& pts)
{
    const std::vector<Vec2> h = jarvis_hull(pts);
    double best = INFINITY;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Vec2 di = h[(i + 1) % h.size()] - h[i];
        for (std::size_t j = 0; j < h.size(); ++j) {
            const Vec2 dj = h[(j + 1) % h.size()] - h[j];
            const double s = std::fabs(cross(di, dj)) / (norm(di) * norm(dj));
            if (s < 1e-9) continue;
            const Vec2 ni{-di.y / norm(di), di.x / norm(di)};
            const Vec2 nj{-dj.y / norm(dj), dj.x / norm(dj)};
            double lo_i = INFINITY, hi_i = -INFINITY, lo_j = INFINITY, hi_j = -INFINITY;
            for (const Vec2& q : pts) {
                lo_i = std::min(lo_i, dot(ni, q));
                hi_i = std::max(hi_i, dot(ni, q));
                lo_j = std::min(lo_j, dot(nj, q));
                hi_j = std::max(hi_j, dot(nj, q));
            }
            best = std::min(best, (hi_i - lo_i) * (hi_j - lo_j) / s);
        }
    }
    return best;
}

std::vector<Vec2> disk_points(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec2> pts;
    while (static_cast<int>(pts.size()) < n) {
        const Vec2 p{u(rng), u(rng)};
        if (dot(p, p) <= 1.0) pts.push_back(p * 10.0);
    }
    return pts;
}

Vec2 apply(const double F[2][2], Vec2 p) { return {F[0][0] * p.x + F[0][1] * p.y, F[1][0] * p.x + F[1][1] * p.y}; }

} // namespace

TEST_CASE("hull of a square with interior and collinear points")
{
    const std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}, {0.2, 0.7}};
    const auto h = convex_hull(pts);
    CHECK(h.size() == 4);
}

TEST_CASE("unit square is its own minimal parallelogram")
{
    const std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const Parallelogram p = min_enclosing_parallelogram(pts);
    CHECK(p.area() == doctest::Approx(1.0));
    CHECK(p.side_a.x == doctest::Approx(1.0));
    CHECK(p.side_a.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.side_b.y == doctest::Approx(1.0));
}

TEST_CASE("a parallelogram encloses itself")
{
    const std::vector<Vec2> pts{{0, 0}, {2, 0}, {3, 1}, {1, 1}};
    const Parallelogram p = min_enclosing_parallelogram(pts);
    CHECK(p.area() == doctest::Approx(2.0));
    CHECK(norm(p.side_a) == doctest::Approx(2.0));
    CHECK(p.side_b.x == doctest::Approx(1.0));
    CHECK(p.side_b.y == doctest::Approx(1.0));
}

TEST_CASE("random point sets match the exhaustive oracle and are enclosed")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(3, 200);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = disk_points(rng, size(rng));
        const Parallelogram p = min_enclosing_parallelogram(pts);
        const double oracle = oracle_area(pts);
        CHECK(std::fabs(p.area() - oracle) <= 1e-9 * oracle);
        for (const Vec2& q : pts) CHECK(p.signed_inset(q) >= -1e-9);
    }
}

TEST_CASE("translation invariance")
{
    std::mt19937_64 rng(5);
    const auto pts = disk_points(rng, 50);
    auto moved = pts;
    for (Vec2& q : moved) q += Vec2{123.0, -45.0};
    const Parallelogram a = min_enclosing_parallelogram(pts);
    const Parallelogram b = min_enclosing_parallelogram(moved);
    CHECK(b.area() == doctest::Approx(a.area()).epsilon(1e-12));
    CHECK(b.origin.x - a.origin.x == doctest::Approx(123.0));
    CHECK(b.origin.y - a.origin.y == doctest::Approx(-45.0));
    const StrainSummary s = strain_from_parallelograms(a, b, 0.05);
    CHECK(std::fabs(s.eps_x) < 1e-12);
    CHECK(std::fabs(s.eps_y) < 1e-12);
    CHECK(std::fabs(s.shear_alpha) < 1e-12);
}

TEST_CASE("degenerate inputs")
{
    CHECK_THROWS_AS(min_enclosing_parallelogram(std::vector<Vec2>{{0, 0}, {1, 1}}), DegenerateInputError);
    CHECK_THROWS_AS(min_enclosing_parallelogram(std::vector<Vec2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}),
                    DegenerateInputError);
    const std::vector<Vec2> line{{0, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_AS(affine_fit_strain(line, line, 0.05), DegenerateInputError);
    CHECK_THROWS_AS(affine_fit_strain(std::vector<Vec2>{{0, 0}, {1, 0}, {0, 1}}, std::vector<Vec2>{{0, 0}}, 0.05),
                    DegenerateInputError);
    const Parallelogram flat{{0, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_AS(strain_from_parallelograms(flat, flat, 0.05), DegenerateInputError);
}

TEST_CASE("strain from parallelograms: identity, isotropic, uniaxial")
{
    const Parallelogram p0{{0, 0}, {10, 0}, {0, 5}};
    const StrainSummary id = strain_from_parallelograms(p0, p0, 0.05);
    CHECK(id.eps_x == 0.0);
    CHECK(id.eps_y == 0.0);
    CHECK(id.shear_alpha == 0.0);

    const double e = -0.05;
    const Parallelogram iso{{0, 0}, p0.side_a * (1 + e), p0.side_b * (1 + e)};
    const StrainSummary s = strain_from_parallelograms(p0, iso, e);
    CHECK(s.ratio_x == doctest::Approx(1.0));
    CHECK(s.ratio_y == doctest::Approx(1.0));
    CHECK(std::fabs(s.ratio_shear) < 1e-12);

    const Parallelogram uni{{0, 0}, p0.side_a * 1.05, p0.side_b};
    const StrainSummary u = strain_from_parallelograms(p0, uni, 0.05);
    CHECK(u.ratio_x == doctest::Approx(1.0));
    CHECK(std::fabs(u.ratio_y) < 1e-12);
    CHECK(std::fabs(u.ratio_shear) < 1e-12);
}

TEST_CASE("affine fields: both methods recover the map")
{
    std::mt19937_64 rng(9);
    const auto pts = disk_points(rng, 80);
    const double F[2][2] = {{1.03, 0.01}, {-0.02, 0.96}};
    std::vector<Vec2> moved;
    for (const Vec2& p : pts) moved.push_back(apply(F, p) + Vec2{3.0, 1.0});

    const StrainSummary fit = affine_fit_strain(pts, moved, 0.05);
    CHECK(fit.eps_x == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(fit.eps_y == doctest::Approx(-0.04).epsilon(1e-12));
    CHECK(fit.shear_alpha == doctest::Approx(-0.01).epsilon(1e-10));

    const Parallelogram p0 = min_enclosing_parallelogram(pts);
    const Parallelogram p1 = min_enclosing_parallelogram(moved);
    const StrainSummary par = strain_from_parallelograms(p0, p1, 0.05);
    CHECK(std::fabs(par.eps_x - fit.eps_x) < 1e-9);
    CHECK(std::fabs(par.eps_y - fit.eps_y) < 1e-9);
    CHECK(std::fabs(par.shear_alpha - fit.shear_alpha) < 1e-9);

    // Doubling the input strain and the deformation keeps the ratios.
    const double G[2][2] = {{1.06, 0.02}, {-0.04, 0.92}};
    std::vector<Vec2> moved2;
    for (const Vec2& p : pts) moved2.push_back(apply(G, p));
    const StrainSummary fit2 = affine_fit_strain(pts, moved2, 0.10);
    CHECK(std::fabs(fit2.ratio_x - fit.ratio_x) < 1e-9);
    CHECK(std::fabs(fit2.ratio_y - fit.ratio_y) < 1e-9);
    CHECK(std::fabs(fit2.ratio_shear - fit.ratio_shear) < 1e-9);
}

TEST_CASE("canonical side is the one nearest +X with positive orientation")
{
    const Parallelogram p{{0, 0}, {0, 3}, {-2, 0.1}};
    const Parallelogram c = canonicalize(p);
    CHECK(c.side_a.x > 0.0);
    CHECK(std::fabs(c.side_a.y) < std::fabs(c.side_a.x));
    CHECK(cross(c.side_a, c.side_b) > 0.0);
    CHECK(c.area() == doctest::Approx(p.area()));
}

TEST_CASE("small rotation keeps the side correspondence")
{
    const Parallelogram p0{{0, 0}, {10, 0}, {10 * std::cos(1.0), 10 * std::sin(1.0)}};
    const double t = 0.02;
    const Parallelogram p1{{0, 0}, rotate(p0.side_a, t), rotate(p0.side_b, t)};
    const StrainSummary s = strain_from_parallelograms(p0, p1, 0.05);
    CHECK(std::fabs(s.eps_x - (std::cos(t) - 1.0)) < 1e-12);
    CHECK(std::fabs(s.shear_alpha) < 1e-12);
}

#include "macro/strain_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "macro/error.hpp"

namespace macro {

namespace {

constexpr double kTieTol = 1e-12;

Vec2 unit(Vec2 v) { return v * (1.0 / norm(v)); }

// Distance of an undirected direction from the +X axis, degrees.
double gap_from_x(Vec2 v) { return angle_gap_deg(undirected_angle_deg(v), 0.0); }

// Point satisfying dot(n1, p) = c1 and dot(n2, p) = c2.
Vec2 intersect(Vec2 n1, double c1, Vec2 n2, double c2)
{
    const double det = cross(n1, n2);
    return {(c1 * n2.y - c2 * n1.y) / det, (n1.x * c2 - n2.x * c1) / det};
}

Parallelogram oriented(Vec2 center, Vec2 a, Vec2 b)
{
    if (a.x < 0.0 || (a.x == 0.0 && a.y < 0.0)) a = -a;
    if (cross(a, b) < 0.0) b = -b;
    return {center - (a + b) * 0.5, a, b};
}

void require_nondegenerate(std::span<const Vec2> points)
{
    if (points.size() < 3) throw DegenerateInputError("need at least 3 points");
}

} // namespace

std::array<Vec2, 4> Parallelogram::corners() const
{
    return {origin, origin + side_a, origin + side_a + side_b, origin + side_b};
}

double Parallelogram::signed_inset(Vec2 p) const
{
    const Vec2 r = p - origin;
    const double ab = cross(side_a, side_b);
    const double la = norm(side_a);
    const double lb = norm(side_b);
    const double along_a = cross(side_a, r);
    const double along_b = cross(r, side_b);
    return std::min({along_a / la, (ab - along_a) / la, along_b / lb, (ab - along_b) / lb});
}

StrainSummary StrainSummary::from_strains(double eps_x, double eps_y, double shear_alpha, double eps_a)
{
    return {eps_x, eps_y, shear_alpha, eps_x / eps_a, eps_y / eps_a, shear_alpha / eps_a};
}

StrainSummary operator+(const StrainSummary& a, const StrainSummary& b)
{
    return {a.eps_x + b.eps_x,     a.eps_y + b.eps_y,     a.shear_alpha + b.shear_alpha,
            a.ratio_x + b.ratio_x, a.ratio_y + b.ratio_y, a.ratio_shear + b.ratio_shear};
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points)
{
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2& p : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

Parallelogram canonicalize(const Parallelogram& p)
{
    const Vec2 center = p.origin + (p.side_a + p.side_b) * 0.5;
    const double ga = gap_from_x(p.side_a);
    const double gb = gap_from_x(p.side_b);
    bool keep = ga < gb;
    if (std::fabs(ga - gb) <= kTieTol) keep = undirected_angle_deg(p.side_a) <= undirected_angle_deg(p.side_b);
    return keep ? oriented(center, p.side_a, p.side_b) : oriented(center, p.side_b, p.side_a);
}

Parallelogram min_enclosing_parallelogram(std::span<const Vec2> points)
{
    require_nondegenerate(points);
    const std::vector<Vec2> hull = convex_hull(points);
    if (hull.size() < 3) throw DegenerateInputError("points are collinear");

    const std::size_t h = hull.size();
    std::vector<Vec2> normal(h);
    std::vector<double> lo(h);
    std::vector<double> hi(h);
    for (std::size_t k = 0; k < h; ++k) {
        const Vec2 d = unit(hull[(k + 1) % h] - hull[k]);
        normal[k] = {-d.y, d.x};
        lo[k] = std::numeric_limits<double>::infinity();
        hi[k] = -std::numeric_limits<double>::infinity();
        for (const Vec2& q : hull) {
            const double s = dot(normal[k], q);
            lo[k] = std::min(lo[k], s);
            hi[k] = std::max(hi[k], s);
        }
    }

    double diameter2 = 0.0;
    for (const Vec2& q : hull) diameter2 = std::max(diameter2, dot(q - hull[0], q - hull[0]));

    bool found = false;
    Parallelogram best;
    double best_area = 0.0;
    double best_perimeter = 0.0;
    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = i + 1; j < h; ++j) {
            const double s = std::fabs(cross(normal[i], normal[j]));
            if (s < 1e-12) continue;
            const Vec2 o = intersect(normal[i], lo[i], normal[j], lo[j]);
            const Vec2 a = intersect(normal[i], lo[i], normal[j], hi[j]) - o;
            const Vec2 b = intersect(normal[i], hi[i], normal[j], lo[j]) - o;
            const Parallelogram cand = canonicalize({o, a, b});
            const double area = (hi[i] - lo[i]) * (hi[j] - lo[j]) / s;
            const double perimeter = cand.perimeter();

            bool better = !found;
            if (found) {
                const double tol = kTieTol * best_area;
                if (area < best_area - tol) {
                    better = true;
                } else if (area <= best_area + tol) {
                    const double ptol = kTieTol * best_perimeter;
                    if (perimeter < best_perimeter - ptol) {
                        better = true;
                    } else if (perimeter <= best_perimeter + ptol) {
                        better = gap_from_x(cand.side_a) < gap_from_x(best.side_a) - kTieTol;
                    }
                }
            }
            if (better) {
                found = true;
                best = cand;
                best_area = area;
                best_perimeter = perimeter;
            }
        }
    }
    if (!found || best_area <= 1e-14 * diameter2) throw DegenerateInputError("points are collinear");
    return best;
}

StrainSummary strain_from_parallelograms(const Parallelogram& undeformed, const Parallelogram& deformed,
                                         double eps_a)
{
    const Parallelogram p0 = canonicalize(undeformed);

    // Label the deformed sides by proximity to the undeformed side_a so that
    // near-ties in the +X rule cannot swap the correspondence.
    Vec2 a1 = deformed.side_a;
    Vec2 b1 = deformed.side_b;
    if (angle_gap_deg(undirected_angle_deg(b1), undirected_angle_deg(p0.side_a)) <
        angle_gap_deg(undirected_angle_deg(a1), undirected_angle_deg(p0.side_a)))
        std::swap(a1, b1);
    if (dot(a1, p0.side_a) < 0.0) a1 = -a1;
    if (cross(a1, b1) < 0.0) b1 = -b1;

    const double det = cross(p0.side_a, p0.side_b);
    if (std::fabs(det) <= 1e-14 * norm(p0.side_a) * norm(p0.side_b))
        throw DegenerateInputError("undeformed parallelogram is singular");

    // F = [a1 b1] * inverse([a0 b0])
    const Vec2 a0 = p0.side_a;
    const Vec2 b0 = p0.side_b;
    const double f11 = (a1.x * b0.y - b1.x * a0.y) / det;
    const double f12 = (b1.x * a0.x - a1.x * b0.x) / det;
    const double f21 = (a1.y * b0.y - b1.y * a0.y) / det;
    const double f22 = (b1.y * a0.x - a1.y * b0.x) / det;
    return StrainSummary::from_strains(f11 - 1.0, f22 - 1.0, f12 + f21, eps_a);
}

StrainSummary affine_fit_strain(std::span<const Vec2> points0, std::span<const Vec2> points1, double eps_a)
{
    if (points0.size() != points1.size()) throw DegenerateInputError("point lists differ in length");
    require_nondegenerate(points0);

    const double n = static_cast<double>(points0.size());
    Vec2 c0{};
    Vec2 c1{};
    for (std::size_t k = 0; k < points0.size(); ++k) {
        c0 += points0[k];
        c1 += points1[k];
    }
    c0 = c0 * (1.0 / n);
    c1 = c1 * (1.0 / n);

    // Normal equations of the centred problem: F * G = H.
    double gxx = 0, gxy = 0, gyy = 0, hxx = 0, hxy = 0, hyx = 0, hyy = 0;
    for (std::size_t k = 0; k < points0.size(); ++k) {
        const Vec2 p = points0[k] - c0;
        const Vec2 q = points1[k] - c1;
        gxx += p.x * p.x;
        gxy += p.x * p.y;
        gyy += p.y * p.y;
        hxx += q.x * p.x;
        hxy += q.x * p.y;
        hyx += q.y * p.x;
        hyy += q.y * p.y;
    }
    const double det = gxx * gyy - gxy * gxy;
    const double scale = (gxx + gyy) * (gxx + gyy);
    if (!(scale > 0.0) || det <= 1e-12 * scale) throw DegenerateInputError("affine fit is rank deficient");

    const double f11 = (hxx * gyy - hxy * gxy) / det;
    const double f12 = (hxy * gxx - hxx * gxy) / det;
    const double f21 = (hyx * gyy - hyy * gxy) / det;
    const double f22 = (hyy * gxx - hyx * gxy) / det;
    return StrainSummary::from_strains(f11 - 1.0, f22 - 1.0, f12 + f21, eps_a);
}

} // namespace macro

// Copyright 2026 The uniferg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uniferg/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <fmt/format.h>

#include "uniferg/errors.hpp"
#include "uniferg/parallel.hpp"

namespace uniferg {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

Box bounding_box(const std::vector<Point>& pts)
{
    if (pts.empty())
        throw PreconditionError("point set is empty");
    double x0 = pts[0].x, x1 = x0, y0 = pts[0].y, y1 = y0;
    for (auto p : pts) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    return Box({{x0, x1}, {y0, y1}});
}

Polygon rectangle(double x0, double x1, double y0, double y1)
{
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

Polygon domain_polygon(const Box& b)
{
    return rectangle(b.interval(0).first, b.interval(0).second, b.interval(1).first, b.interval(1).second);
}

double diagonal(const Box& b) { return std::hypot(b.side(0), b.side(1)); }

VoronoiCell finish_cell(const PointSet2D& ps, std::size_t i, Polygon poly)
{
    VoronoiCell c;
    c.site_index = i;
    c.site = ps[i];
    c.vertices = simplify_polygon(std::move(poly));
    const auto& v = c.vertices;
    c.inner_radius = v.empty() ? 0 : INFINITY;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const Point p = v[k], q = v[(k + 1) % v.size()];
        const double len = distance(p, q);
        if (len > 0)
            c.inner_radius = std::min(c.inner_radius, cross(q - p, c.site - p) / len);
        c.outer_radius = std::max(c.outer_radius, distance(c.site, p));
    }
    c.area = polygon_area(v);
    return c;
}

Polygon clip_by_sites(const PointSet2D& ps, std::size_t i, const std::vector<std::size_t>& others)
{
    Polygon poly = domain_polygon(ps.domain());
    const Point x = ps[i];
    for (auto j : others) {
        if (j == i)
            continue;
        const Point z = ps[j];
        poly = clip_half_plane(poly, 0.5 * (x + z), z - x);
        if (poly.empty())
            break;
    }
    return poly;
}

double min_pair_distance(const std::vector<Point>& pts)
{
    std::vector<Point> s(pts);
    std::sort(s.begin(), s.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    double best = INFINITY;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size() && s[j].x - s[i].x < best; ++j)
            best = std::min(best, distance(s[i], s[j]));
    return best;
}

}  // namespace

PointSet2D::PointSet2D(std::vector<Point> points, Box domain) : points_(std::move(points)), domain_(std::move(domain))
{
    if (domain_.dimension() != 2)
        throw PreconditionError("point set domain must be 2-dimensional");
    if (domain_.side(0) < 0 || domain_.side(1) < 0)
        throw PreconditionError("point set domain has a negative side");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto p = points_[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || edge_distance(p) < 0)
            throw PreconditionError(fmt::format("point {} ({}, {}) lies outside the domain", i, p.x, p.y));
    }
    std::vector<Point> s(points_);
    std::sort(s.begin(), s.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw PreconditionError("point set contains duplicate points");
}

PointSet2D::PointSet2D(std::vector<Point> points) : PointSet2D(points, bounding_box(points)) {}

std::optional<std::size_t> PointSet2D::find(Point p) const
{
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i] == p)
            return i;
    return std::nullopt;
}

double PointSet2D::edge_distance(Point p) const
{
    const auto [x0, x1] = domain_.interval(0);
    const auto [y0, y1] = domain_.interval(1);
    return std::min({p.x - x0, x1 - p.x, p.y - y0, y1 - p.y});
}

PointSet2D read_point_set(std::istream& in, std::optional<Box> domain)
{
    std::vector<Point> pts;
    std::string line;
    std::size_t lineno = 0;
    auto parse = [&](std::string_view s, double& out) {
        while (!s.empty() && s.front() == ' ')
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
            s.remove_suffix(1);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size();
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r" || line[0] == '#')
            continue;
        const auto comma = line.find(',');
        Point p;
        if (comma == std::string::npos || !parse(std::string_view(line).substr(0, comma), p.x) ||
            !parse(std::string_view(line).substr(comma + 1), p.y)) {
            if (pts.empty() && line.rfind("x,y", 0) == 0)
                continue;
            throw PreconditionError(fmt::format("point file line {}: expected \"x,y\"", lineno));
        }
        pts.push_back(p);
    }
    return domain ? PointSet2D(std::move(pts), *domain) : PointSet2D(std::move(pts));
}

void write_point_set(std::ostream& out, const PointSet2D& ps)
{
    out << "x,y\n";
    for (auto p : ps.points())
        out << fmt::format("{:.17g},{:.17g}\n", p.x, p.y);
}

GridIndex::GridIndex(const PointSet2D& ps, double cell_size) : ps_(&ps), h_(cell_size)
{
    if (!(cell_size > 0))
        throw PreconditionError("grid cell size must be positive");
    x0_ = ps.domain().interval(0).first;
    y0_ = ps.domain().interval(1).first;
    nx_ = std::max(1L, static_cast<long>(std::ceil(ps.domain().side(0) / h_)));
    ny_ = std::max(1L, static_cast<long>(std::ceil(ps.domain().side(1) / h_)));
    buckets_.resize(static_cast<std::size_t>(nx_ * ny_));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const long ix = std::clamp(static_cast<long>((ps[i].x - x0_) / h_), 0L, nx_ - 1);
        const long iy = std::clamp(static_cast<long>((ps[i].y - y0_) / h_), 0L, ny_ - 1);
        buckets_[static_cast<std::size_t>(iy * nx_ + ix)].push_back(i);
    }
}

std::vector<std::size_t> GridIndex::within(Point p, double r) const
{
    auto range = [&](double lo, double hi, long n) {
        const long a = std::clamp(static_cast<long>(std::floor(lo / h_)), 0L, n - 1);
        const long b = std::clamp(static_cast<long>(std::floor(hi / h_)), 0L, n - 1);
        return std::pair{a, b};
    };
    const auto [ax, bx] = range(p.x - r - x0_, p.x + r - x0_, nx_);
    const auto [ay, by] = range(p.y - r - y0_, p.y + r - y0_, ny_);
    std::vector<std::size_t> out;
    for (long iy = ay; iy <= by; ++iy)
        for (long ix = ax; ix <= bx; ++ix)
            for (auto j : buckets_[static_cast<std::size_t>(iy * nx_ + ix)])
                if (distance((*ps_)[j], p) <= r)
                    out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
}

double polygon_area(const Polygon& poly)
{
    double a = 0;
    for (std::size_t k = 0; k < poly.size(); ++k)
        a += cross(poly[k], poly[(k + 1) % poly.size()]);
    return 0.5 * a;
}

Polygon clip_half_plane(const Polygon& poly, Point m, Point normal)
{
    const double eps = 1e-12 * std::hypot(normal.x, normal.y) * (1 + std::abs(m.x) + std::abs(m.y));
    Polygon out;
    out.reserve(poly.size() + 1);
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const Point a = poly[k], b = poly[(k + 1) % poly.size()];
        const double fa = dot(a - m, normal), fb = dot(b - m, normal);
        const bool ina = fa <= eps, inb = fb <= eps;
        if (ina)
            out.push_back(a);
        if (ina != inb && std::abs(fa) > eps && std::abs(fb) > eps) {
            const double t = fa / (fa - fb);
            out.push_back(a + t * (b - a));
        }
    }
    return out.size() >= 3 ? out : Polygon{};
}

Polygon simplify_polygon(Polygon poly, double tol)
{
    bool changed = true;
    while (changed && poly.size() >= 3) {
        changed = false;
        for (std::size_t k = 0; k < poly.size() && poly.size() >= 3; ++k) {
            const std::size_t n = poly.size();
            const Point a = poly[(k + n - 1) % n], b = poly[k], c = poly[(k + 1) % n];
            const double ac = distance(a, c);
            const bool dup = distance(a, b) <= tol;
            const bool collinear = ac > 0 && std::abs(cross(c - a, b - a)) / ac <= tol && dot(b - a, c - b) >= 0;
            if (dup || collinear) {
                poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(k));
                changed = true;
                --k;
            }
        }
    }
    return poly.size() >= 3 ? poly : Polygon{};
}

Polygon intersect_convex(const Polygon& a, const Polygon& b)
{
    Polygon out = a;
    for (std::size_t k = 0; k < b.size() && !out.empty(); ++k) {
        const Point p = b[k], q = b[(k + 1) % b.size()];
        const Point d = q - p;
        out = clip_half_plane(out, p, Point{d.y, -d.x});
    }
    return out;
}

bool contains(const Polygon& convex, Point p, double tol)
{
    if (convex.size() < 3)
        return false;
    for (std::size_t k = 0; k < convex.size(); ++k) {
        const Point a = convex[k], b = convex[(k + 1) % convex.size()];
        const double len = distance(a, b);
        if (len > 0 && cross(b - a, p - a) / len < -tol)
            return false;
    }
    return true;
}

bool same_vertices(const Polygon& a, const Polygon& b, double tol)
{
    if (a.size() != b.size())
        return false;
    auto covered = [tol](const Polygon& x, const Polygon& y) {
        return std::all_of(x.begin(), x.end(), [&](Point p) {
            return std::any_of(y.begin(), y.end(), [&](Point q) { return distance(p, q) <= tol; });
        });
    };
    return covered(a, b) && covered(b, a);
}

DeloneParams delone_params(const PointSet2D& ps, double margin)
{
    if (ps.size() < 2)
        throw PreconditionError("Delone parameters need at least 2 points");
    if (margin < 0)
        throw PreconditionError("margin must be nonnegative");
    const auto& d = ps.domain();
    const double x0 = d.interval(0).first + margin, x1 = d.interval(0).second - margin;
    const double y0 = d.interval(1).first + margin, y1 = d.interval(1).second - margin;
    if (x0 > x1 || y0 > y1)
        throw PreconditionError(fmt::format("margin {} empties the domain", margin));
    DeloneParams out;
    out.r0 = 0.5 * min_pair_distance(ps.points());
    const VoronoiBuilder builder(ps);
    const Polygon shrunk = rectangle(x0, x1, y0, y1);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto cell = builder.cell(i);
        for (auto v : intersect_convex(cell.vertices, shrunk))
            out.r1 = std::max(out.r1, distance(ps[i], v));
    }
    return out;
}

VoronoiCell voronoi_cell(const PointSet2D& ps, std::size_t i, std::optional<double> cutoff)
{
    if (i >= ps.size())
        throw PreconditionError(fmt::format("site index {} out of range", i));
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < ps.size(); ++j)
        if (!cutoff || distance(ps[i], ps[j]) <= *cutoff)
            others.push_back(j);
    return finish_cell(ps, i, clip_by_sites(ps, i, others));
}

VoronoiCell voronoi_cell(Point x, const PointSet2D& ps, std::optional<double> cutoff)
{
    const auto i = ps.find(x);
    if (!i)
        throw PreconditionError(fmt::format("({}, {}) is not a point of the set", x.x, x.y));
    return voronoi_cell(ps, *i, cutoff);
}

namespace {

double typical_spacing(const PointSet2D& ps)
{
    const double area = ps.domain().side(0) * ps.domain().side(1);
    const double s = std::sqrt(area / static_cast<double>(std::max<std::size_t>(ps.size(), 1)));
    return s > 0 ? s : std::max({ps.domain().side(0), ps.domain().side(1), 1.0});
}

}  // namespace

VoronoiBuilder::VoronoiBuilder(const PointSet2D& ps)
    : ps_(&ps), spacing_(typical_spacing(ps)), index_(ps, spacing_)
{}

VoronoiCell VoronoiBuilder::cell(std::size_t i) const
{
    const Point x = (*ps_)[i];
    const double diag = diagonal(ps_->domain());
    double rho = 2 * spacing_;
    for (;;) {
        auto cell = finish_cell(*ps_, i, clip_by_sites(*ps_, i, index_.within(x, rho)));
        if (2 * cell.outer_radius <= rho || rho >= diag)
            return cell;
        rho = std::min(std::max(2 * cell.outer_radius, 2 * rho), diag);
    }
}

VoronoiCell VoronoiBuilder::cell(std::size_t i, double cutoff) const
{
    return finish_cell(*ps_, i, clip_by_sites(*ps_, i, index_.within((*ps_)[i], cutoff)));
}

VoronoiTiling voronoi_tiling(const PointSet2D& ps, unsigned threads)
{
    if (ps.size() < 3)
        throw PreconditionError("a Voronoi tiling needs at least 3 points");
    VoronoiTiling t;
    t.params = delone_params(ps);
    t.cells.resize(ps.size());
    const VoronoiBuilder builder(ps);
    parallel_for(ps.size(), threads, [&](std::size_t i) { t.cells[i] = builder.cell(i); });
    t.interior.resize(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i)
        t.interior[i] = ps.edge_distance(ps[i]) > 2 * t.params.r1;
    return t;
}

LocalityResult locality_check(const PointSet2D& ps, const LocalityOptions& opts)
{
    LocalityResult r;
    r.params = delone_params(ps);
    r.cutoff = opts.cutoff.value_or(2 * r.params.r1);
    r.trials = opts.trials;
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (ps.edge_distance(ps[i]) > 2 * r.params.r1)
            interior.push_back(i);
    if (interior.empty())
        throw PreconditionError("no site lies farther than 2 r1 from the domain edge");
    const VoronoiBuilder builder(ps);
    std::mt19937_64 rng(opts.seed);
    for (std::size_t t = 0; t < opts.trials; ++t) {
        const auto i = interior[rng() % interior.size()];
        if (!same_vertices(builder.cell(i, r.cutoff).vertices, voronoi_cell(ps, i).vertices))
            ++r.mismatches;
    }
    return r;
}

PointSet2D perturbed_lattice(std::size_t side, double rho, std::uint64_t seed)
{
    if (side == 0)
        throw PreconditionError("lattice side must be positive");
    if (!(rho >= 0 && rho < 0.5))
        throw PreconditionError("perturbation radius must lie in [0, 1/2)");
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1p-53; };
    std::vector<Point> pts;
    pts.reserve(side * side);
    for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = 0; j < side; ++j) {
            const double theta = 2 * std::numbers::pi * unit();
            const double r = rho * std::sqrt(unit());
            pts.push_back({static_cast<double>(i) + r * std::cos(theta), static_cast<double>(j) + r * std::sin(theta)});
        }
    const double hi = static_cast<double>(side) - 0.5;
    return PointSet2D(std::move(pts), Box({{-0.5, hi}, {-0.5, hi}}));
}

}  // namespace uniferg

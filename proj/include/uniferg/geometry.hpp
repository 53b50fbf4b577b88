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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "uniferg/box.hpp"

namespace uniferg {

struct Point {
    double x = 0;
    double y = 0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point, Point) = default;
};

double dot(Point a, Point b);
double cross(Point a, Point b);
double distance(Point a, Point b);

/// Finite planar point set inside a 2-d domain box. Points are pairwise
/// distinct and lie in the domain; the constructor checks both.
class PointSet2D {
public:
    PointSet2D(std::vector<Point> points, Box domain);
    /// Domain defaults to the bounding box of the points.
    explicit PointSet2D(std::vector<Point> points);

    const std::vector<Point>& points() const noexcept { return points_; }
    const Box& domain() const noexcept { return domain_; }
    std::size_t size() const noexcept { return points_.size(); }
    const Point& operator[](std::size_t i) const { return points_.at(i); }
    /// Index of an exact member, or nullopt.
    std::optional<std::size_t> find(Point p) const;
    /// Distance from p to the boundary of the domain (negative outside).
    double edge_distance(Point p) const;

private:
    std::vector<Point> points_;
    Box domain_;
};

/// CSV with header "x,y". Without an explicit domain the bounding box is used.
PointSet2D read_point_set(std::istream& in, std::optional<Box> domain = std::nullopt);
void write_point_set(std::ostream& out, const PointSet2D& ps);

/// Uniform bucket grid over the domain for radius queries.
class GridIndex {
public:
    GridIndex(const PointSet2D& ps, double cell_size);
    /// Indices of points within distance r of p (inclusive), ascending.
    std::vector<std::size_t> within(Point p, double r) const;

private:
    const PointSet2D* ps_;
    double x0_, y0_, h_;
    long nx_, ny_;
    std::vector<std::vector<std::size_t>> buckets_;
};

using Polygon = std::vector<Point>;

/// Signed area (positive for counterclockwise order).
double polygon_area(const Polygon& poly);
/// Keeps the part of `poly` with dot(y - m, normal) <= 0. The result is
/// convex and counterclockwise if the input was.
Polygon clip_half_plane(const Polygon& poly, Point m, Point normal);
/// Merges vertices closer than tol and drops collinear ones.
Polygon simplify_polygon(Polygon poly, double tol = 1e-9);
/// Intersection of two convex counterclockwise polygons.
Polygon intersect_convex(const Polygon& a, const Polygon& b);
bool contains(const Polygon& convex, Point p, double tol = 1e-9);
/// Same vertex set up to cyclic order: every vertex of each has a match in
/// the other within tol.
bool same_vertices(const Polygon& a, const Polygon& b, double tol = 1e-9);

struct DeloneParams {
    double r0 = 0;  ///< packing radius: half the minimum pairwise distance
    double r1 = 0;  ///< covering radius over the margin-shrunk domain
};

/// r1 is the largest distance from a site to a vertex of its cell clipped to
/// the shrunk domain, which is exactly the maximum distance to the nearest
/// point over that region. Throws PreconditionError for fewer than 2 points.
DeloneParams delone_params(const PointSet2D& ps, double margin = 0);

struct VoronoiCell {
    std::size_t site_index = 0;  ///< decoration: the unique point in the cell
    Point site;
    Polygon vertices;  ///< counterclockwise, collinear vertices merged
    double inner_radius = 0;  ///< distance from site to the nearest edge line
    double outer_radius = 0;  ///< distance from site to the farthest vertex
    double area = 0;
};

/// Cell of ps[i] clipped to the domain. With a cutoff only points within that
/// distance of the site contribute bisectors; without one every point does.
VoronoiCell voronoi_cell(const PointSet2D& ps, std::size_t i, std::optional<double> cutoff = std::nullopt);
/// Same, for a site given by its coordinates. Throws PreconditionError if x is
/// not a member.
VoronoiCell voronoi_cell(Point x, const PointSet2D& ps, std::optional<double> cutoff = std::nullopt);

/// Exact cells through the grid index: neighbours are added in growing rings
/// until the ring radius reaches twice the cell's outer radius, after which no
/// further point can cut the cell.
class VoronoiBuilder {
public:
    explicit VoronoiBuilder(const PointSet2D& ps);
    VoronoiCell cell(std::size_t i) const;
    VoronoiCell cell(std::size_t i, double cutoff) const;

private:
    const PointSet2D* ps_;
    double spacing_;
    GridIndex index_;
};

struct VoronoiTiling {
    DeloneParams params;
    std::vector<VoronoiCell> cells;  ///< one per site, in site order
    std::vector<bool> interior;      ///< site farther than 2 r1 from the domain edge
};

/// Throws PreconditionError for fewer than 3 points.
VoronoiTiling voronoi_tiling(const PointSet2D& ps, unsigned threads = 1);

struct LocalityOptions {
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::optional<double> cutoff;  ///< override of 2 r1, for negative controls
};

struct LocalityResult {
    DeloneParams params;
    double cutoff = 0;
    std::size_t trials = 0;
    std::size_t mismatches = 0;
    bool holds() const noexcept { return mismatches == 0; }
};

/// Compares cutoff cells with exact cells at random interior sites. Throws
/// PreconditionError if the set has no interior site.
LocalityResult locality_check(const PointSet2D& ps, const LocalityOptions& opts = {});

/// side x side copies of the unit lattice {0..side-1}^2, each point moved
/// uniformly within a disc of radius rho. Domain [-1/2, side - 1/2]^2.
PointSet2D perturbed_lattice(std::size_t side, double rho, std::uint64_t seed);

}  // namespace uniferg

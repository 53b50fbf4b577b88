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

#include "uniferg/box.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "uniferg/errors.hpp"

namespace uniferg {

Box::Box(std::vector<Interval> intervals) : intervals_(std::move(intervals))
{
    if (intervals_.empty())
        throw PreconditionError("box needs at least one axis");
    for (std::size_t j = 0; j < intervals_.size(); ++j)
        if (!(intervals_[j].first < intervals_[j].second))
            throw PreconditionError(fmt::format("box axis {} has a_j >= b_j", j));
}

Box Box::cube(std::size_t d, double side) { return Box(std::vector<Interval>(d, {0.0, side})); }

double Box::width() const
{
    double w = side(0);
    for (std::size_t j = 1; j < dimension(); ++j)
        w = std::min(w, side(j));
    return w;
}

double Box::volume() const
{
    double v = 1.0;
    for (std::size_t j = 0; j < dimension(); ++j)
        v *= side(j);
    return v;
}

double Box::surface() const
{
    double s = 0.0;
    for (std::size_t j = 0; j < dimension(); ++j) {
        double face = 1.0;
        for (std::size_t i = 0; i < dimension(); ++i)
            if (i != j)
                face *= side(i);
        s += face;
    }
    return 2.0 * s;
}

bool Box::is_r_box(double r, double tol) const
{
    for (std::size_t j = 0; j < dimension(); ++j)
        if (side(j) < r * (1 - tol) || side(j) > 2 * r * (1 + tol))
            return false;
    return true;
}

namespace {

// Cartesian product of per-axis segment lists, last axis fastest.
std::vector<Box> product(const std::vector<std::vector<Box::Interval>>& axes)
{
    std::vector<Box> out;
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        std::vector<Box::Interval> iv(axes.size());
        for (std::size_t j = 0; j < axes.size(); ++j)
            iv[j] = axes[j][idx[j]];
        out.emplace_back(std::move(iv));
        std::size_t j = axes.size();
        while (j > 0) {
            --j;
            if (++idx[j] < axes[j].size())
                break;
            idx[j] = 0;
            if (j == 0)
                return out;
        }
    }
}

std::vector<Box::Interval> segments(Box::Interval iv, std::size_t m)
{
    std::vector<Box::Interval> out;
    const double len = iv.second - iv.first;
    for (std::size_t k = 0; k < m; ++k) {
        const double lo = k == 0 ? iv.first : iv.first + len * static_cast<double>(k) / static_cast<double>(m);
        const double hi = k + 1 == m ? iv.second : iv.first + len * static_cast<double>(k + 1) / static_cast<double>(m);
        out.emplace_back(lo, hi);
    }
    return out;
}

}  // namespace

std::vector<Box> partition_box_into_r_boxes(const Box& B, double r)
{
    if (!(r > 0))
        throw PreconditionError("r must be positive");
    std::vector<std::vector<Box::Interval>> axes;
    for (std::size_t j = 0; j < B.dimension(); ++j) {
        if (B.side(j) < r)
            throw PreconditionError(fmt::format("side {} of length {} is shorter than r = {}", j, B.side(j), r));
        const auto m = static_cast<std::size_t>(std::floor(B.side(j) / r));
        axes.push_back(segments(B.interval(j), std::max<std::size_t>(m, 1)));
    }
    return product(axes);
}

SplitBox split_box_3d(const Box& B)
{
    std::vector<std::vector<Box::Interval>> axes;
    std::size_t interior = 0;
    for (std::size_t j = 0; j < B.dimension(); ++j) {
        axes.push_back(segments(B.interval(j), 3));
        interior = interior * 3 + 1;
    }
    return {product(axes), interior};
}

double boundary_distance(const Box& inner, const Box& outer, std::size_t j)
{
    return std::min(inner.interval(j).first - outer.interval(j).first,
                    outer.interval(j).second - inner.interval(j).second);
}

double overlap_volume(const Box& a, const Box& b)
{
    if (a.dimension() != b.dimension())
        throw PreconditionError("boxes of different dimension");
    double v = 1.0;
    for (std::size_t j = 0; j < a.dimension(); ++j) {
        const double lo = std::max(a.interval(j).first, b.interval(j).first);
        const double hi = std::min(a.interval(j).second, b.interval(j).second);
        if (hi <= lo)
            return 0.0;
        v *= hi - lo;
    }
    return v;
}

}  // namespace uniferg

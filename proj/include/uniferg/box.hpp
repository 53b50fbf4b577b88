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

#include <cstddef>
#include <utility>
#include <vector>

namespace uniferg {

/// Axis-parallel box [a_1,b_1] x ... x [a_d,b_d]. Derived quantities are
/// computed on demand from the intervals.
class Box {
public:
    using Interval = std::pair<double, double>;

    explicit Box(std::vector<Interval> intervals);
    /// The cube [0, side]^d.
    static Box cube(std::size_t d, double side);

    std::size_t dimension() const noexcept { return intervals_.size(); }
    const Interval& interval(std::size_t j) const { return intervals_.at(j); }
    double side(std::size_t j) const { return intervals_.at(j).second - intervals_.at(j).first; }
    /// omega(B): the shortest side.
    double width() const;
    double volume() const;
    /// sigma(B) = 2 * sum_j prod_{i != j} l_i.
    double surface() const;
    /// r <= l_j <= 2r on every axis.
    bool is_r_box(double r, double tol = 1e-12) const;

    friend bool operator==(const Box&, const Box&) = default;

private:
    std::vector<Interval> intervals_;
};

/// Each axis cut into floor(l_j / r) equal segments. Boxes are listed with the
/// last axis varying fastest. Throws PreconditionError if some l_j < r.
std::vector<Box> partition_box_into_r_boxes(const Box& B, double r);

struct SplitBox {
    std::vector<Box> boxes;  ///< 3^d boxes, last axis varying fastest
    std::size_t interior = 0;
};

/// Thirds along every axis; `interior` indexes the middle box, the only one
/// that does not touch the boundary of B.
SplitBox split_box_3d(const Box& B);

/// Signed distance from the box `inner` to the boundary of `outer` along axis j
/// (minimum of the two gaps).
double boundary_distance(const Box& inner, const Box& outer, std::size_t j);

/// Area (d-volume) of the intersection of two boxes of equal dimension.
double overlap_volume(const Box& a, const Box& b);

}  // namespace uniferg

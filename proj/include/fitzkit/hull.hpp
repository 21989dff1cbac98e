#pragma once

#include <vector>

#include "fitzkit/region.hpp"

namespace fitzkit {

/// Vertex list of conv(points) for d ≤ 3, exact.
/// d=1 gives {min,max}; d=2 gives the strictly convex polygon in
/// counter-clockwise order starting from the lexicographically smallest
/// point; d=3 keeps the points that are not convex combinations of the others.
/// Throws UnsupportedError for d > 3 and InputError for an empty set.
VPolytope convex_hull(const std::vector<QVec>& points);

/// Twice the signed area of (a,b,c); positive for a left turn.
Rational cross(const QVec& a, const QVec& b, const QVec& c);

}  // namespace fitzkit

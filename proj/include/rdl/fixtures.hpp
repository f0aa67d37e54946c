#ifndef RDL_FIXTURES_HPP_
#define RDL_FIXTURES_HPP_

#include <cstddef>
#include <cstdint>

#include "rdl/measure.hpp"

namespace rdl::fixtures {

// x = [1] with both labels, mass 1/2 each.
Problem mirror(Loss loss);
// x = [1], y = +1, mass 1.
Problem single_point(Loss loss);
// Two separable clouds in 2D: label +1 at x1 > 0, -1 at x1 < 0.
Problem margins(Loss loss, std::size_t per_cloud = 10);
// The clouds plus five points on the line x1 = 0 whose labels satisfy
// y(t) = y(-t). per_cloud = 1 gives the 7-point instance
// {(0.7, 0.3, +1), (-0.7, -0.2, -1)} + the line.
Problem difficult(Loss loss, std::size_t per_cloud = 1);
// a = -1 and b = 1 - eps, both labelled +1, with masses (1-eps)/(2-eps) and
// 1/(2-eps); h(x) = x.
Problem zo(double epsilon, Loss loss);
// n in [2, 8], d in [1, 3], uniform features, random labels, some mirrored
// pairs, random positive masses summing to 1.
Problem random_small(std::uint64_t seed, Loss loss);
// Random instance with the given size, d features and mirrored fraction.
Problem random_instance(std::uint64_t seed, Loss loss, std::size_t n, std::size_t d, double mirror_fraction);
// 200-point population in d = 3: 80 grid x values (x3 = 0) carrying both
// labels with a nonlinear conditional probability, plus 40 separable points
// at x3 = +-0.5. Total mass 1.
Problem mixed(Loss loss);

}  // namespace rdl::fixtures

#endif  // RDL_FIXTURES_HPP_

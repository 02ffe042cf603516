#pragma once

#include <cstdint>
#include <string>

#include "curvlab/chart.hpp"

namespace curvlab::charts {

/// Round S^n in polar coordinates (t1..t_{n-1}, phi), optionally rescaled by
/// a conformal factor exp(2*factor): g = exp(2*factor) * g_round.
/// `factor_expr` may be empty (round metric) and may use any coordinates.
Chart sphere_polar(int n, const std::string& factor_expr = "");

/// Flat torus [0, period)^n with an explicit symmetric matrix of metric
/// entry expressions in coordinates x1..xn (entries must be periodic).
Chart torus(int n, double period, const std::vector<std::string>& entries);

/// Conformally flat torus metric exp(2*w) * delta.
Chart torus_conformal(int n, double period, const std::string& w_expr);

/// Identity + trigonometric perturbation of the given total amplitude,
/// seeded and reproducible. Not conformally flat for generic seeds.
Chart torus_random_trig(int n, std::uint64_t seed, double amplitude = 0.1);

/// Euclidean metric on the unit box [0,1]^n in Cartesian coordinates.
Chart flat_box(int n);

/// S^2(a) x S^2(b) in polar coordinates (t1, p1, t2, p2).
Chart product_s2xs2(double a, double b);

}  // namespace curvlab::charts

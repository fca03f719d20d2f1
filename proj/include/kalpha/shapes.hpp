#pragma once

#include "kalpha/surface_chart.hpp"

namespace kalpha::shapes {

/// (R cos s cos t, R cos s sin t, R sin s); this parametrization's normal points inward.
SurfaceChart sphere(double radius, double s_margin = 0.1);

/// The plane z = 0 over [-1, 1]^2.
SurfaceChart plane();

/// (a cos t, a sin t, s) with analytic derivatives.
SurfaceChart cylinder(double radius, double length);

/// Graph z = a s^2 + b s t + c t^2 over [-1, 1]^2.
SurfaceChart quadric_graph(double a, double b, double c);

/// (cosh s cos t, cosh s sin t, s), a minimal surface.
SurfaceChart catenoid(double s_min = -1.0, double s_max = 1.0);

/// (sech u cos t, sech u sin t, u - tanh u) with 0 < u_min; K = -1.
SurfaceChart pseudosphere(double u_min = 0.3, double u_max = 2.0);

}  // namespace kalpha::shapes

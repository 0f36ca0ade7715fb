#pragma once

#include <functional>
#include <initializer_list>

namespace cskde {

using RealFn = std::function<double(double)>;

//! Adaptive Gauss-Kronrod (61-point) integral of f over [a, b].
double integrate(const RealFn& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 20);

//! As integrate(), split at the given interior break points (kinks, jumps).
double integrate(const RealFn& f,
                 double a,
                 double b,
                 std::initializer_list<double> breaks,
                 double rel_tol = 1e-12,
                 unsigned max_depth = 20);

} // namespace cskde

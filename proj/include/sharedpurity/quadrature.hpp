#pragma once

#include <functional>
#include <string>

namespace sharedpurity {

// Adaptive Gauss-Kronrod (G7/K15) integration of a smooth-by-parts integrand
// on [a, b] to the given absolute tolerance. The error estimate per interval
// is |K15 - G7|; intervals failing their share of the budget are bisected.
// Throws std::runtime_error naming `label` and the failing subinterval when
// the tolerance cannot be reached within max_depth bisections.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, const std::string& label = "integrand",
                 int max_depth = 60);

}  // namespace sharedpurity

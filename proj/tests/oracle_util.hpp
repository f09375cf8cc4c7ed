// SPDX-License-Identifier: Apache-2.0
// Independent reference computations shared by the test binaries.
#pragma once

#include <cmath>
#include <functional>

namespace testref {

/// Composite Simpson rule with 2m panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000) {
    const double h = (b - a) / (2.0 * m);
    double s = f(a) + f(b);
    for (int i = 1; i < 2 * m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Periodic trapezoid rule over [0, 2pi); spectrally accurate for smooth periodic f.
inline double periodic(const std::function<double(double)>& f, int m = 4096) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += f(2.0 * M_PI * i / m);
    return s * 2.0 * M_PI / m;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testref

#pragma once

// Matrix families used throughout the tests.

#include <cmath>
#include <numbers>

#include "lyapoly/family.hpp"

namespace lyapoly::fixtures {

// Two planar generators whose unit-time exponentials are [[1,1],[-1,1]] and
// [[1,1],[-1,0]].
inline Matrix planar_a1() {
    const double a = 0.5 * std::log(2.0);
    const double b = std::numbers::pi / 4.0;
    return Matrix{{a, b}, {-b, a}};
}

inline Matrix planar_a2() {
    const double c = (std::numbers::pi / 3.0) / std::sin(std::numbers::pi / 3.0);
    return Matrix{{0.5 * c, c}, {-c, -0.5 * c}};
}

inline MatrixFamily planar() { return MatrixFamily({planar_a1(), planar_a2()}); }

// Triangular generators with exponentials [[7,0],[2,3]] and [[2,4],[0,8]].
inline MatrixFamily triangular() {
    const double l2 = std::log(2.0), l3 = std::log(3.0), l7 = std::log(7.0), l8 = std::log(8.0);
    Matrix a1{{l7, 0.0}, {2.0 * (l7 - l3) / 4.0, l3}};
    Matrix a2{{l2, 4.0 * (l8 - l2) / 6.0}, {0.0, l8}};
    return MatrixFamily({a1, a2});
}

inline MatrixFamily metzler3_sparse() {
    Matrix a1{{-2, 0, 0}, {10, -2, 0}, {0, 0, -11}};
    Matrix a2{{-11, 0, 10}, {0, -11, 0}, {0, 10, -2}};
    return MatrixFamily({a1, a2});
}

inline MatrixFamily metzler3_dense() {
    Matrix a1{{-1, 0.1, 0.1}, {0.1, -1, 0.1}, {1.0 / 6, 1.0 / 6, -1.0 / 3}};
    Matrix a2{{-0.5, 0.1, 9.0 / 8}, {1.0 / 6, -1.0 / 3, 7.0 / 8}, {0.1, 0.1, -1}};
    return MatrixFamily({a1, a2});
}

inline MatrixFamily metzler8() {
    Matrix a1{{-15, 1, 1, 0, 3, 2, 0, 0},  {2, -9, 3, 2, 3, 1, 2, 1},  {1, 3, -13, 2, 1, 1, 0, 3},
              {2, 0, 1, -7, 1, 0, 0, 1},   {1, 0, 1, 1, -8, 0, 1, 0},  {1, 3, 1, 2, 3, -11, 2, 2},
              {1, 3, 1, 3, 1, 1, -10, 1},  {2, 1, 3, 2, 3, 2, 3, -11}};
    Matrix a2{{-10, 2, 2, 0, 1, 3, 2, 0},  {0, -16, 2, 1, 2, 3, 1, 2}, {2, 2, -14, 3, 1, 2, 3, 1},
              {0, 3, 3, -13, 3, 2, 0, 0},  {3, 2, 1, 2, -9, 0, 1, 3},  {1, 3, 0, 0, 1, -7, 0, 0},
              {0, 2, 3, 2, 2, 3, -17, 2},  {2, 2, 2, 2, 2, 3, 2, -17}};
    return MatrixFamily({a1, a2});
}

inline MatrixFamily nilpotent_pair() {
    return MatrixFamily({Matrix{{0, 1}, {0, 0}}, Matrix{{0, 0}, {1, 0}}});
}

// Closed-form spectral radius of e^{tA1} e^{tA2} for the nilpotent pair.
inline double nilpotent_pair_rho(double t) {
    return (t * t + t * std::sqrt(t * t + 4.0) + 2.0) / 2.0;
}

}  // namespace lyapoly::fixtures

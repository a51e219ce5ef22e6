#pragma once

#include <array>

namespace weakkam::quad {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> gl8_nodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> gl8_weights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <typename F>
double gauss_legendre8(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < 8; ++i) s += gl8_weights[i] * f(mid + half * gl8_nodes[i]);
  return half * s;
}

}  // namespace weakkam::quad

// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_QUADRATURE_HPP
#define CAVITY_QUADRATURE_HPP

#include <array>

namespace cavity::detail
{

// Four-point Gauss-Legendre rule on [0, 1].
struct Gauss4
{
  static constexpr std::array<double, 4> x = {
    0.0694318442029737123880267555535953, 0.330009478207571867598667120448377,
    0.669990521792428132401332879551623, 0.930568155797026287611973244446405};
  static constexpr std::array<double, 4> w = {
    0.173927422568726928686531974610999, 0.326072577431273071313468025389001,
    0.326072577431273071313468025389001, 0.173927422568726928686531974610999};
};

// Six-point rule exact for polynomials of degree 4 on a triangle. Barycentric points;
// weights sum to one (multiply by the area).
struct Triangle6
{
  static constexpr std::array<std::array<double, 3>, 6> lambda = {{
    {0.445948490915965, 0.445948490915965, 0.108103018168070},
    {0.445948490915965, 0.108103018168070, 0.445948490915965},
    {0.108103018168070, 0.445948490915965, 0.445948490915965},
    {0.091576213509771, 0.091576213509771, 0.816847572980459},
    {0.091576213509771, 0.816847572980459, 0.091576213509771},
    {0.816847572980459, 0.091576213509771, 0.091576213509771},
  }};
  static constexpr std::array<double, 6> w = {0.223381589678011, 0.223381589678011,
                                              0.223381589678011, 0.109951743655322,
                                              0.109951743655322, 0.109951743655322};
};

}  // namespace cavity::detail

#endif  // CAVITY_QUADRATURE_HPP

#pragma once

#include "ndescent/curve/torsion.hpp"

namespace fixtures {

using namespace ndescent;

/// Q(zeta) with zeta^2 + zeta + 1 = 0.
inline TowerPtr eisenstein() {
  static const TowerPtr k = tower_extend(Tower::rationals(), Poly::from_rationals(Tower::rationals(), {1, 1, 1}), "zeta");
  return k;
}

inline FieldElement zeta() { return FieldElement::generator(eisenstein()); }

inline FieldElement num(const TowerPtr& k, long v) { return FieldElement::integer(k, v); }

/// y^2 = x^3 - 432 over Q(zeta).
inline Curve reference_curve() { return Curve(eisenstein(), FieldElement(), num(eisenstein(), -432)); }

/// y^2 = x^3 - 432 over Q.
inline Curve reference_curve_over_Q() {
  return Curve(Tower::rationals(), FieldElement(), FieldElement::integer(Tower::rationals(), -432));
}

/// y^2 = x^3 - 864 x - 5616 over Q(zeta), with full rational 3-torsion and the point (-8, -28) of infinite order.
inline Curve auxiliary_curve() { return Curve(eisenstein(), num(eisenstein(), -864), num(eisenstein(), -5616)); }

inline Point auxiliary_point() { return Point::affine(num(eisenstein(), -8), num(eisenstein(), -28)); }

}  // namespace fixtures

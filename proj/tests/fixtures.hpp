#pragma once

#include "nlreg/kernel.hpp"

#include <cmath>

namespace fx {

inline nlreg::KernelSpec fractional(double s, int dim = 1) {
  nlreg::KernelSpec k;
  k.family = nlreg::Family::fractional;
  k.s = s;
  k.dim = dim;
  if (2.0 * s < 1.0) k.gamma_hint = 2.0 * s;
  k.validate();
  return k;
}

/// j(h) = h^{-1.5} for h > 0, 2|h|^{-1.5} for h < 0
inline nlreg::KernelSpec asym_example() {
  nlreg::KernelSpec k;
  k.family = nlreg::Family::asymmetric_pair;
  k.lambda = 2.0;
  k.plus = {1.0, 0.5};
  k.minus = {2.0, 0.5};
  k.validate();
  return k;
}

inline nlreg::KernelSpec oscillating_example() {
  nlreg::KernelSpec k;
  k.family = nlreg::Family::custom;
  k.custom.kind = nlreg::CustomKind::oscillating_power;
  k.lambda = 2.0;
  k.validate();
  return k;
}

inline nlreg::KernelSpec one_minus_sin(int dim = 1) {
  nlreg::KernelSpec k;
  k.family = nlreg::Family::radial;
  k.dim = dim;
  k.ell.kind = nlreg::ProfileKind::one_minus_sin_log;
  k.ell.cutoff = 1.0;
  k.validate();
  return k;
}

/// two antipodal arcs of length pi/4, l = 1 on (0,1]
inline nlreg::KernelSpec cone_example() {
  nlreg::KernelSpec k;
  k.family = nlreg::Family::cone;
  k.dim = 2;
  k.ell.kind = nlreg::ProfileKind::constant;
  k.ell.cutoff = 1.0;
  k.arcs = {{0.3, 0.3 + M_PI / 4}, {0.3 + M_PI, 0.3 + M_PI + M_PI / 4}};
  k.validate();
  return k;
}

inline nlreg::KernelSpec indicator(int dim = 1) {
  nlreg::KernelSpec k;
  k.family = nlreg::Family::custom;
  k.dim = dim;
  k.custom.kind = nlreg::CustomKind::indicator_ball;
  k.validate();
  return k;
}

inline nlreg::TwoPointKernel ti(const nlreg::KernelSpec& k) {
  nlreg::TwoPointKernel K;
  K.base = k;
  K.validate();
  return K;
}

}  // namespace fx

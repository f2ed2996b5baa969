#pragma once

#include <string>

namespace scrambler {

// Block-decimation recursion for the complete power-of-two percolation
// network; all maps act on the bond occupation probability q = 1 - p.

double q_bond(double q);
double q_ribbon(double qb);
double rg_step(double q);  // R(q) = q_ribbon(q_bond(q)) folded over two ribbons

struct RgFixedPoint {
  double q_star = 0;
  double p_star = 0;
  bool stable = false;  // |R'(q*)| < 1
  std::string to_json() const;
};

// Nontrivial fixed point of R(q) = q in (0, 1), solved by bisection to 1e-12.
RgFixedPoint rg_fixed_point();

}  // namespace scrambler

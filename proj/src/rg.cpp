#include "scrambler/rg.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace scrambler {

namespace {

void check_domain(double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("q outside [0, 1]");
}

}  // namespace

double q_bond(double q) {
  check_domain(q);
  const double r = 1.0 - q;
  return q * q * q * q + 4.0 * q * q * q * r + 4.0 * q * q * r * r;
}

double q_ribbon(double qb) {
  check_domain(qb);
  const double r = 1.0 - qb;
  return qb * qb * qb * qb + 4.0 * qb * qb * qb * r + 2.0 * qb * qb * r * r;
}

double rg_step(double q) {
  const double ribbon = q_ribbon(q_bond(q));
  return ribbon * ribbon + 2.0 * ribbon * (1.0 - ribbon);
}

RgFixedPoint rg_fixed_point() {
  constexpr double kEps = 1e-9;
  double lo = kEps;
  double hi = 1.0 - kEps;
  auto f = [](double q) { return rg_step(q) - q; };
  double flo = f(lo);
  if (flo * f(hi) > 0.0) {
    throw std::runtime_error("no sign change of R(q) - q inside (0, 1)");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  RgFixedPoint fp;
  fp.q_star = 0.5 * (lo + hi);
  fp.p_star = 1.0 - fp.q_star;
  const double h = 1e-6;
  const double slope = (rg_step(fp.q_star + h) - rg_step(fp.q_star - h)) / (2.0 * h);
  fp.stable = std::abs(slope) < 1.0;
  return fp;
}

std::string RgFixedPoint::to_json() const {
  nlohmann::json j;
  j["q_star"] = q_star;
  j["p_star"] = p_star;
  j["stability"] = stable ? "stable" : "unstable";
  return j.dump();
}

}  // namespace scrambler

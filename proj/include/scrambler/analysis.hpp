#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scrambler {

struct CurvePoint {
  double p;
  double value;
  double stderr_;
};

struct ObservableCurve {
  std::string model;
  std::string observable;
  uint32_t n_qubits = 0;
  uint32_t k = 1;
  std::vector<CurvePoint> points;  // p strictly increasing
};

// Monotone piecewise-cubic interpolant (Fritsch-Carlson); no overshoot, so
// curve differences keep a clean sign structure for root finding.
class Pchip {
 public:
  Pchip(std::span<const double> x, std::span<const double> y);

  double operator()(double xq) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, d_;
};

struct CrossingResult {
  double p_c = 0;
  double p_c_err = 0;
  uint64_t n_replicates = 0;
};

// Average pairwise intersection of consecutive-size curves, bootstrapped by
// re-drawing every point from a Gaussian with its standard error.
CrossingResult crossing_point(std::span<const ObservableCurve> curves,
                              uint64_t n_boot = 5000, uint64_t seed = 0);

enum class Ansatz {
  Standard,       // y = f((p - p_c) N^{1/nu})
  Dynamic,        // y / N^z = f((p - p_c) N^{1/nu})
  LogNormalized,  // (y / log2 N) / N^z = f((p - p_c) N^{1/nu})
};

struct ScalingFit {
  double p_c = 0, p_c_err = 0;
  double nu = 0, nu_err = 0;
  double z = 0, z_err = 0;
  bool z_fitted = false;
  double cost = 0;
  Ansatz ansatz = Ansatz::Standard;
  std::vector<uint32_t> sizes_used;
  bool hit_bounds = false;

  std::string to_json(const std::string& observable, const std::string& model,
                      uint32_t k) const;
};

struct CollapseOptions {
  std::optional<double> fixed_z;  // pin z (Dynamic/LogNormalized only)
  uint64_t n_boot = 500;
  uint64_t seed = 0;
  std::optional<std::pair<double, double>> p_window;  // restrict fitted points
};

// Minimizes the master-curve collapse cost over (p_c, nu[, z]): each point is
// compared against a local weighted-linear fit through the other sizes'
// transformed points; coarse grid then Nelder-Mead refinement.
ScalingFit collapse_fit(std::span<const ObservableCurve> curves, Ansatz ansatz,
                        const CollapseOptions& options = {});

// Cost of the collapse objective at explicit parameters (diagnostics/tests).
double collapse_cost(std::span<const ObservableCurve> curves, Ansatz ansatz,
                     double p_c, double nu, double z,
                     std::optional<std::pair<double, double>> p_window = {});

struct PowerLawPoint {
  double n;
  double value;
  double stderr_;
};

struct PowerLawFit {
  double exponent = 0;
  double exponent_err = 0;
  double amplitude = 0;
};

// Weighted least squares of log(value) against log(N).
PowerLawFit power_law_fit(std::span<const PowerLawPoint> points);

struct CriticalPointComparison {
  double difference = 0;
  double combined_err = 0;
  bool significant = false;  // |difference| > 2 sigma
};

CriticalPointComparison compare_critical_points(double pc_a, double err_a,
                                                double pc_b, double err_b);

// Drops sizes too small for the requested nonlocality: N > 2^k, or the
// stricter N >= 2^{k+2} variant.
std::vector<ObservableCurve> filter_small_sizes(std::span<const ObservableCurve> curves,
                                                uint32_t k, bool strict = false);

}  // namespace scrambler

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "scrambler/circuit.hpp"

namespace scrambler {

// Bond-percolation network of a monitored circuit: one vertex per two-qubit
// gate plus virtual per-qubit source/sink vertices; one bond per qubit
// worldline segment. Input segments (before layer 1) are never cut.
struct PercolationNetwork {
  uint32_t n_gate_vertices = 0;  // cluster sizes count only these
  uint32_t n_vertices = 0;
  std::vector<std::pair<uint32_t, uint32_t>> bonds;
  std::vector<uint32_t> cuttable;   // bond indices, cut with probability p
  std::vector<uint32_t> always_on;  // bond indices, pre-inserted
  std::vector<uint32_t> source_vertices;
  std::vector<uint32_t> sink_vertices;
};

PercolationNetwork build_network(const CircuitSchedule& schedule);

// Per-p accumulators of the per-realization canonical observables.
struct CanonicalStats {
  double sum_c1 = 0, sum_c1_sq = 0;
  double sum_c2 = 0, sum_c2_sq = 0;
  double sum_c4 = 0, sum_c4_sq = 0;
  double sum_c2c4 = 0, sum_c1c2 = 0;
  double sum_span = 0, sum_span_sq = 0;
};

struct SweepResult {
  uint64_t n_realizations = 0;
  uint64_t n_cuttable = 0;
  // Microcanonical means over realizations, indexed by inserted-bond count m.
  std::vector<double> mean_c1, mean_c2, mean_c4, span_prob;
  // Canonical statistics on the requested grid (empty when no grid given).
  std::vector<double> p_grid;
  std::vector<CanonicalStats> canonical;
};

// Newman-Ziff sweep: cuttable bonds are inserted in a fresh random order per
// realization and cluster statistics recorded at every occupation number.
// When `p_grid` is given, each realization's microcanonical curve is also
// convolved against the binomial weights at q = 1 - p, giving canonical means
// with realization-scatter errors. Realizations are split across `n_threads`
// and merged in a fixed order, so results do not depend on the thread count.
SweepResult newman_ziff_sweep(const PercolationNetwork& network,
                              uint64_t n_realizations, uint64_t seed,
                              std::span<const double> p_grid = {},
                              uint32_t n_threads = 1);

// Pools two sweeps of the same bond count and p grid (for ensembles where the
// network itself is resampled per realization).
void merge_sweeps(SweepResult& into, const SweepResult& part);

struct CanonicalCurve {
  std::vector<double> p;
  std::vector<double> value;
  std::vector<double> stderr_;
};

enum class SweepObservable { CmaxMean, CmaxSecond, CmaxFourth, Spanning };

// Canonical curve from the sweep's per-realization statistics.
CanonicalCurve canonical_curve(const SweepResult& sweep, SweepObservable obs);

// Binomial convolution of the microcanonical means onto an arbitrary grid
// (value only; use a grid-matched sweep for realization-scatter errors).
CanonicalCurve convolve_canonical(const SweepResult& sweep,
                                  std::span<const double> p_grid,
                                  SweepObservable obs);

// b(p) = (3 - <C^4>/<C^2>^2) / 2 with delta-method errors; `cov` carries
// Cov(<C^2>, <C^4>) per point and may be empty when unknown.
CanonicalCurve binder_cumulant(const CanonicalCurve& c2, const CanonicalCurve& c4,
                               std::span<const double> cov = {});

CanonicalCurve binder_curve(const SweepResult& sweep);

// chi(p) = <C^2> - <C>^2 with delta-method errors.
CanonicalCurve susceptibility_curve(const SweepResult& sweep);

CanonicalCurve spanning_curve(const SweepResult& sweep);

struct PeakEstimate {
  double p_peak = 0;
  double value_peak = 0;
  bool at_boundary = false;
};

// Local quadratic fit around the grid maximum.
PeakEstimate curve_peak(const CanonicalCurve& curve);

// Independent fixed-p estimate: every cuttable bond kept with probability
// q = 1 - p, one union-find pass per realization.
struct DirectEstimate {
  double c1 = 0, c1_err = 0;
  double c2 = 0, c2_err = 0;
  double c4 = 0, c4_err = 0;
  double span = 0, span_err = 0;
};

DirectEstimate direct_percolation_estimate(const PercolationNetwork& network, double p,
                                           uint64_t n_realizations, uint64_t seed);

// Normalized binomial weights around the peak, truncated at 1e-16 relative.
struct BinomialWindow {
  uint64_t m_lo = 0;
  std::vector<double> weight;  // normalized to sum 1
};

BinomialWindow binomial_window(uint64_t n_bonds, double q);

}  // namespace scrambler

#include "scrambler/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace scrambler {

PercolationNetwork build_network(const CircuitSchedule& schedule) {
  const uint32_t n = schedule.params.n_qubits;
  const uint32_t t_layers = static_cast<uint32_t>(schedule.layers.size());
  PercolationNetwork net;
  net.n_gate_vertices = n / 2 * t_layers;
  net.n_vertices = net.n_gate_vertices + 2 * n;

  // gate vertex ids layer-major; sources then sinks after the gates
  const uint32_t source0 = net.n_gate_vertices;
  const uint32_t sink0 = net.n_gate_vertices + n;
  for (uint32_t q = 0; q < n; ++q) {
    net.source_vertices.push_back(source0 + q);
    net.sink_vertices.push_back(sink0 + q);
  }

  std::vector<uint32_t> prev(n);  // vertex currently holding qubit q's worldline
  for (uint32_t q = 0; q < n; ++q) prev[q] = source0 + q;
  std::vector<bool> prev_cuttable(n, false);  // input segments are never cut

  uint32_t gate_id = 0;
  for (const auto& layer : schedule.layers) {
    if (layer.pairs.size() != n / 2) {
      throw std::invalid_argument("layer is not a perfect matching");
    }
    std::vector<bool> seen(n, false);
    for (const auto& [i, j] : layer.pairs) {
      if (i >= n || j >= n || i == j || seen[i] || seen[j]) {
        throw std::invalid_argument("layer is not a perfect matching");
      }
      seen[i] = seen[j] = true;
      for (uint32_t q : {i, j}) {
        const uint32_t bond = static_cast<uint32_t>(net.bonds.size());
        net.bonds.emplace_back(prev[q], gate_id);
        if (prev_cuttable[q]) {
          net.cuttable.push_back(bond);
        } else {
          net.always_on.push_back(bond);
        }
        prev[q] = gate_id;
        prev_cuttable[q] = true;
      }
      ++gate_id;
    }
  }
  // output segments after the final layer
  for (uint32_t q = 0; q < n; ++q) {
    const uint32_t bond = static_cast<uint32_t>(net.bonds.size());
    net.bonds.emplace_back(prev[q], sink0 + q);
    net.cuttable.push_back(bond);
  }
  return net;
}

namespace {

// Union-find with gate-vertex counts and source/sink flags as payload.
class ClusterTracker {
 public:
  ClusterTracker(const PercolationNetwork& net)
      : parent_(net.n_vertices),
        total_(net.n_vertices, 1),
        gates_(net.n_vertices, 0),
        flags_(net.n_vertices, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
    for (uint32_t v = 0; v < net.n_gate_vertices; ++v) gates_[v] = 1;
    for (uint32_t v : net.source_vertices) flags_[v] |= 1;
    for (uint32_t v : net.sink_vertices) flags_[v] |= 2;
    cmax_ = net.n_gate_vertices > 0 ? 1 : 0;
  }

  uint32_t find(uint32_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // Returns true if the merged cluster touches both boundaries.
  bool add_bond(uint32_t a, uint32_t b) {
    uint32_t ra = find(a);
    uint32_t rb = find(b);
    if (ra == rb) return flags_[ra] == 3;
    if (total_[ra] < total_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    total_[ra] += total_[rb];
    gates_[ra] += gates_[rb];
    flags_[ra] |= flags_[rb];
    if (gates_[ra] > cmax_) cmax_ = gates_[ra];
    return flags_[ra] == 3;
  }

  uint64_t cmax() const { return cmax_; }

 private:
  std::vector<uint32_t> parent_;
  std::vector<uint32_t> total_;
  std::vector<uint64_t> gates_;
  std::vector<uint8_t> flags_;
  uint64_t cmax_ = 0;
};

struct RealizationCurve {
  std::vector<uint64_t> cmax_at_m;  // size M+1
  uint64_t span_from_m;             // first m with spanning, M+1 if never
};

RealizationCurve run_realization(const PercolationNetwork& net,
                                 std::vector<uint32_t>& order, Rng& rng) {
  ClusterTracker uf(net);
  const uint64_t m_total = net.cuttable.size();
  RealizationCurve out;
  out.cmax_at_m.resize(m_total + 1);
  out.span_from_m = m_total + 1;

  bool spanned = false;
  for (uint32_t bond : net.always_on) {
    spanned = uf.add_bond(net.bonds[bond].first, net.bonds[bond].second) || spanned;
  }
  if (spanned) out.span_from_m = 0;
  out.cmax_at_m[0] = uf.cmax();

  for (uint32_t i = static_cast<uint32_t>(m_total) - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  for (uint64_t m = 1; m <= m_total; ++m) {
    const auto& [u, v] = net.bonds[order[m - 1]];
    const bool now = uf.add_bond(u, v);
    if (now && !spanned) {
      spanned = true;
      out.span_from_m = m;
    }
    out.cmax_at_m[m] = uf.cmax();
  }
  return out;
}

struct PartialSums {
  std::vector<double> c1, c2, c4, span;
  std::vector<CanonicalStats> canonical;
  uint64_t count = 0;
};

void accumulate_realization(const RealizationCurve& curve,
                            std::span<const BinomialWindow> windows,
                            PartialSums& sums) {
  const size_t m_total = curve.cmax_at_m.size() - 1;
  for (size_t m = 0; m <= m_total; ++m) {
    const double c = static_cast<double>(curve.cmax_at_m[m]);
    const double c2 = c * c;
    sums.c1[m] += c;
    sums.c2[m] += c2;
    sums.c4[m] += c2 * c2;
    if (m >= curve.span_from_m) sums.span[m] += 1.0;
  }
  for (size_t ip = 0; ip < windows.size(); ++ip) {
    const auto& win = windows[ip];
    double c1 = 0, c2 = 0, c4 = 0, span = 0;
    for (size_t i = 0; i < win.weight.size(); ++i) {
      const uint64_t m = win.m_lo + i;
      const double c = static_cast<double>(curve.cmax_at_m[m]);
      const double w = win.weight[i];
      c1 += w * c;
      c2 += w * c * c;
      c4 += w * c * c * c * c;
      if (m >= curve.span_from_m) span += w;
    }
    auto& st = sums.canonical[ip];
    st.sum_c1 += c1;
    st.sum_c1_sq += c1 * c1;
    st.sum_c2 += c2;
    st.sum_c2_sq += c2 * c2;
    st.sum_c4 += c4;
    st.sum_c4_sq += c4 * c4;
    st.sum_c2c4 += c2 * c4;
    st.sum_c1c2 += c1 * c2;
    st.sum_span += span;
    st.sum_span_sq += span * span;
  }
  ++sums.count;
}

}  // namespace

BinomialWindow binomial_window(uint64_t n_bonds, double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("q outside [0, 1]");
  BinomialWindow win;
  if (q == 0.0 || n_bonds == 0) {
    win.m_lo = 0;
    win.weight = {1.0};
    return win;
  }
  if (q == 1.0) {
    win.m_lo = n_bonds;
    win.weight = {1.0};
    return win;
  }
  const double m_peak_f = std::floor(q * static_cast<double>(n_bonds));
  const uint64_t m_peak = static_cast<uint64_t>(m_peak_f);
  constexpr double kCutoff = 1e-16;
  const double ratio_up = q / (1.0 - q);
  const double ratio_down = (1.0 - q) / q;

  std::vector<double> up;  // m_peak excluded
  double w = 1.0;
  for (uint64_t m = m_peak + 1; m <= n_bonds; ++m) {
    w *= ratio_up * static_cast<double>(n_bonds - m + 1) / static_cast<double>(m);
    if (w < kCutoff) break;
    up.push_back(w);
  }
  std::vector<double> down;
  w = 1.0;
  for (uint64_t m = m_peak; m-- > 0;) {
    w *= ratio_down * static_cast<double>(m + 1) / static_cast<double>(n_bonds - m);
    if (w < kCutoff) break;
    down.push_back(w);
  }
  win.m_lo = m_peak - down.size();
  win.weight.reserve(down.size() + 1 + up.size());
  for (auto it = down.rbegin(); it != down.rend(); ++it) win.weight.push_back(*it);
  win.weight.push_back(1.0);
  win.weight.insert(win.weight.end(), up.begin(), up.end());
  const double total = std::accumulate(win.weight.begin(), win.weight.end(), 0.0);
  for (double& x : win.weight) x /= total;
  return win;
}

SweepResult newman_ziff_sweep(const PercolationNetwork& network,
                              uint64_t n_realizations, uint64_t seed,
                              std::span<const double> p_grid, uint32_t n_threads) {
  if (n_realizations < 1) throw std::invalid_argument("need at least one realization");
  if (network.cuttable.empty()) throw std::invalid_argument("network has no cuttable bonds");
  const uint64_t m_total = network.cuttable.size();

  std::vector<BinomialWindow> windows(p_grid.size());
  for (size_t i = 0; i < p_grid.size(); ++i) {
    windows[i] = binomial_window(m_total, 1.0 - p_grid[i]);
  }

  PartialSums total;
  total.c1.assign(m_total + 1, 0.0);
  total.c2.assign(m_total + 1, 0.0);
  total.c4.assign(m_total + 1, 0.0);
  total.span.assign(m_total + 1, 0.0);
  total.canonical.assign(p_grid.size(), CanonicalStats{});

  // Realizations are merged in index order so the result is independent of
  // the thread count.
  if (n_threads <= 1) {
    std::vector<uint32_t> order(network.cuttable.begin(), network.cuttable.end());
    for (uint64_t r = 0; r < n_realizations; ++r) {
      Rng rng(derive_seed({seed, r}));
      std::copy(network.cuttable.begin(), network.cuttable.end(), order.begin());
      const RealizationCurve curve = run_realization(network, order, rng);
      accumulate_realization(curve, windows, total);
    }
  } else {
    std::mutex mu;
    std::condition_variable cv;
    uint64_t next_to_run = 0;
    uint64_t next_to_merge = 0;
    auto worker = [&] {
      std::vector<uint32_t> order(network.cuttable.begin(), network.cuttable.end());
      while (true) {
        uint64_t r;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next_to_run >= n_realizations) return;
          r = next_to_run++;
        }
        Rng rng(derive_seed({seed, r}));
        std::copy(network.cuttable.begin(), network.cuttable.end(), order.begin());
        const RealizationCurve curve = run_realization(network, order, rng);
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return next_to_merge == r; });
        accumulate_realization(curve, windows, total);
        ++next_to_merge;
        cv.notify_all();
      }
    };
    std::vector<std::thread> pool;
    for (uint32_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  result.n_realizations = n_realizations;
  result.n_cuttable = m_total;
  const double inv = 1.0 / static_cast<double>(n_realizations);
  result.mean_c1.resize(m_total + 1);
  result.mean_c2.resize(m_total + 1);
  result.mean_c4.resize(m_total + 1);
  result.span_prob.resize(m_total + 1);
  for (uint64_t m = 0; m <= m_total; ++m) {
    result.mean_c1[m] = total.c1[m] * inv;
    result.mean_c2[m] = total.c2[m] * inv;
    result.mean_c4[m] = total.c4[m] * inv;
    result.span_prob[m] = total.span[m] * inv;
  }
  result.p_grid.assign(p_grid.begin(), p_grid.end());
  result.canonical = std::move(total.canonical);
  return result;
}

void merge_sweeps(SweepResult& into, const SweepResult& part) {
  if (into.n_cuttable != part.n_cuttable || into.p_grid != part.p_grid) {
    throw std::invalid_argument("sweeps are not mergeable");
  }
  const double wa = static_cast<double>(into.n_realizations);
  const double wb = static_cast<double>(part.n_realizations);
  const double inv = 1.0 / (wa + wb);
  for (size_t m = 0; m < into.mean_c1.size(); ++m) {
    into.mean_c1[m] = (into.mean_c1[m] * wa + part.mean_c1[m] * wb) * inv;
    into.mean_c2[m] = (into.mean_c2[m] * wa + part.mean_c2[m] * wb) * inv;
    into.mean_c4[m] = (into.mean_c4[m] * wa + part.mean_c4[m] * wb) * inv;
    into.span_prob[m] = (into.span_prob[m] * wa + part.span_prob[m] * wb) * inv;
  }
  for (size_t i = 0; i < into.canonical.size(); ++i) {
    auto& a = into.canonical[i];
    const auto& b = part.canonical[i];
    a.sum_c1 += b.sum_c1;
    a.sum_c1_sq += b.sum_c1_sq;
    a.sum_c2 += b.sum_c2;
    a.sum_c2_sq += b.sum_c2_sq;
    a.sum_c4 += b.sum_c4;
    a.sum_c4_sq += b.sum_c4_sq;
    a.sum_c2c4 += b.sum_c2c4;
    a.sum_c1c2 += b.sum_c1c2;
    a.sum_span += b.sum_span;
    a.sum_span_sq += b.sum_span_sq;
  }
  into.n_realizations += part.n_realizations;
}

namespace {

struct MeanErr {
  double mean, err;
};

MeanErr mean_of(double sum, double sum_sq, uint64_t n) {
  const double mean = sum / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  double var = (sum_sq / static_cast<double>(n) - mean * mean) /
               static_cast<double>(n - 1);
  if (var < 0) var = 0;
  return {mean, std::sqrt(var)};
}

double cov_of(double sum_x, double sum_y, double sum_xy, uint64_t n) {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  return (sum_xy / nn - (sum_x / nn) * (sum_y / nn)) / (nn - 1.0);
}

}  // namespace

CanonicalCurve canonical_curve(const SweepResult& sweep, SweepObservable obs) {
  if (sweep.p_grid.empty()) {
    throw std::invalid_argument("sweep was run without a p grid");
  }
  CanonicalCurve curve;
  curve.p = sweep.p_grid;
  for (size_t i = 0; i < sweep.p_grid.size(); ++i) {
    const auto& st = sweep.canonical[i];
    MeanErr me{};
    switch (obs) {
      case SweepObservable::CmaxMean:
        me = mean_of(st.sum_c1, st.sum_c1_sq, sweep.n_realizations);
        break;
      case SweepObservable::CmaxSecond:
        me = mean_of(st.sum_c2, st.sum_c2_sq, sweep.n_realizations);
        break;
      case SweepObservable::CmaxFourth:
        me = mean_of(st.sum_c4, st.sum_c4_sq, sweep.n_realizations);
        break;
      case SweepObservable::Spanning:
        me = mean_of(st.sum_span, st.sum_span_sq, sweep.n_realizations);
        break;
    }
    curve.value.push_back(me.mean);
    curve.stderr_.push_back(me.err);
  }
  return curve;
}

CanonicalCurve convolve_canonical(const SweepResult& sweep,
                                  std::span<const double> p_grid,
                                  SweepObservable obs) {
  if (p_grid.empty()) throw std::invalid_argument("empty p grid");
  const std::vector<double>* micro = nullptr;
  switch (obs) {
    case SweepObservable::CmaxMean: micro = &sweep.mean_c1; break;
    case SweepObservable::CmaxSecond: micro = &sweep.mean_c2; break;
    case SweepObservable::CmaxFourth: micro = &sweep.mean_c4; break;
    case SweepObservable::Spanning: micro = &sweep.span_prob; break;
  }
  CanonicalCurve curve;
  for (double p : p_grid) {
    const BinomialWindow win = binomial_window(sweep.n_cuttable, 1.0 - p);
    double acc = 0.0;
    for (size_t i = 0; i < win.weight.size(); ++i) {
      acc += win.weight[i] * (*micro)[win.m_lo + i];
    }
    curve.p.push_back(p);
    curve.value.push_back(acc);
    curve.stderr_.push_back(0.0);
  }
  return curve;
}

CanonicalCurve binder_cumulant(const CanonicalCurve& c2, const CanonicalCurve& c4,
                               std::span<const double> cov) {
  if (c2.p != c4.p) throw std::invalid_argument("curves on different grids");
  CanonicalCurve out;
  out.p = c2.p;
  for (size_t i = 0; i < c2.p.size(); ++i) {
    const double x = c2.value[i];
    const double y = c4.value[i];
    if (x == 0.0) throw std::invalid_argument("vanishing <C^2>");
    const double ratio = y / (x * x);
    out.value.push_back(0.5 * (3.0 - ratio));
    const double dy = 1.0 / (x * x);
    const double dx = -2.0 * y / (x * x * x);
    const double cxy = cov.empty() ? 0.0 : cov[i];
    double var = dy * dy * c4.stderr_[i] * c4.stderr_[i] +
                 dx * dx * c2.stderr_[i] * c2.stderr_[i] + 2.0 * dx * dy * cxy;
    if (var < 0) var = 0;
    out.stderr_.push_back(0.5 * std::sqrt(var));
  }
  return out;
}

CanonicalCurve binder_curve(const SweepResult& sweep) {
  const CanonicalCurve c2 = canonical_curve(sweep, SweepObservable::CmaxSecond);
  const CanonicalCurve c4 = canonical_curve(sweep, SweepObservable::CmaxFourth);
  std::vector<double> cov(sweep.p_grid.size());
  const uint64_t n = sweep.n_realizations;
  for (size_t i = 0; i < sweep.p_grid.size(); ++i) {
    const auto& st = sweep.canonical[i];
    cov[i] = cov_of(st.sum_c2, st.sum_c4, st.sum_c2c4, n);
  }
  return binder_cumulant(c2, c4, cov);
}

CanonicalCurve susceptibility_curve(const SweepResult& sweep) {
  CanonicalCurve out;
  out.p = sweep.p_grid;
  const uint64_t n = sweep.n_realizations;
  for (size_t i = 0; i < sweep.p_grid.size(); ++i) {
    const auto& st = sweep.canonical[i];
    const MeanErr m1 = mean_of(st.sum_c1, st.sum_c1_sq, n);
    const MeanErr m2 = mean_of(st.sum_c2, st.sum_c2_sq, n);
    const double chi = m2.mean - m1.mean * m1.mean;
    const double c12 = cov_of(st.sum_c1, st.sum_c2, st.sum_c1c2, n);
    const double d1 = -2.0 * m1.mean;
    double var = m2.err * m2.err + d1 * d1 * m1.err * m1.err + 2.0 * d1 * c12;
    if (var < 0) var = 0;
    out.value.push_back(chi);
    out.stderr_.push_back(std::sqrt(var));
  }
  return out;
}

CanonicalCurve spanning_curve(const SweepResult& sweep) {
  return canonical_curve(sweep, SweepObservable::Spanning);
}

PeakEstimate curve_peak(const CanonicalCurve& curve) {
  if (curve.p.size() < 3) throw std::invalid_argument("need at least 3 points");
  size_t imax = 0;
  for (size_t i = 1; i < curve.p.size(); ++i) {
    if (curve.value[i] > curve.value[imax]) imax = i;
  }
  PeakEstimate est;
  if (imax == 0 || imax + 1 == curve.p.size()) {
    est.at_boundary = true;
    est.p_peak = curve.p[imax];
    est.value_peak = curve.value[imax];
    return est;
  }
  // vertex of the parabola through the three points around the maximum
  const double x0 = curve.p[imax - 1], x1 = curve.p[imax], x2 = curve.p[imax + 1];
  const double y0 = curve.value[imax - 1], y1 = curve.value[imax],
               y2 = curve.value[imax + 1];
  const double d1 = (y1 - y0) / (x1 - x0);
  const double d2 = (y2 - y1) / (x2 - x1);
  const double a2 = (d2 - d1) / (x2 - x0);
  if (a2 >= 0.0) {  // flat or non-concave: fall back to the grid point
    est.p_peak = x1;
    est.value_peak = y1;
    return est;
  }
  est.p_peak = 0.5 * (x0 + x1) - d1 / (2.0 * a2);
  est.value_peak =
      y0 + d1 * (est.p_peak - x0) + a2 * (est.p_peak - x0) * (est.p_peak - x1);
  return est;
}

DirectEstimate direct_percolation_estimate(const PercolationNetwork& network, double p,
                                           uint64_t n_realizations, uint64_t seed) {
  double s1 = 0, s1q = 0, s2 = 0, s2q = 0, s4 = 0, s4q = 0, sp = 0, spq = 0;
  for (uint64_t r = 0; r < n_realizations; ++r) {
    Rng rng(derive_seed({seed, 0x646972656374ULL, r}));
    ClusterTracker uf(network);
    bool spanned = false;
    for (uint32_t bond : network.always_on) {
      spanned = uf.add_bond(network.bonds[bond].first, network.bonds[bond].second) ||
                spanned;
    }
    for (uint32_t bond : network.cuttable) {
      if (rng.uniform() >= p) {  // kept with probability q = 1 - p
        spanned = uf.add_bond(network.bonds[bond].first, network.bonds[bond].second) ||
                  spanned;
      }
    }
    const double c = static_cast<double>(uf.cmax());
    s1 += c;
    s1q += c * c;
    s2 += c * c;
    s2q += c * c * c * c;
    s4 += c * c * c * c;
    s4q += c * c * c * c * c * c * c * c;
    sp += spanned ? 1.0 : 0.0;
    spq += spanned ? 1.0 : 0.0;
  }
  DirectEstimate est;
  auto fill = [&](double sum, double sum_sq, double& mean, double& err) {
    const MeanErr me = mean_of(sum, sum_sq, n_realizations);
    mean = me.mean;
    err = me.err;
  };
  fill(s1, s1q, est.c1, est.c1_err);
  fill(s2, s2q, est.c2, est.c2_err);
  fill(s4, s4q, est.c4, est.c4_err);
  fill(sp, spq, est.span, est.span_err);
  return est;
}

}  // namespace scrambler

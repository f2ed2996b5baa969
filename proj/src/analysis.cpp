#include "scrambler/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "scrambler/rng.hpp"

namespace scrambler {

Pchip::Pchip(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("pchip needs >= 2 points");
  for (size_t i = 1; i < n; ++i) {
    if (x_[i] <= x_[i - 1]) throw std::invalid_argument("pchip x not increasing");
  }
  d_.resize(n);
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) {
      d = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) {
      d = 3.0 * d0;
    }
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double Pchip::operator()(double xq) const {
  const size_t n = x_.size();
  if (xq <= x_.front()) xq = x_.front();
  if (xq >= x_.back()) xq = x_.back();
  size_t lo = std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin();
  if (lo > 0) --lo;
  if (lo >= n - 1) lo = n - 2;
  const double h = x_[lo + 1] - x_[lo];
  const double t = (xq - x_[lo]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[lo] + h10 * h * d_[lo] + h01 * y_[lo + 1] + h11 * h * d_[lo + 1];
}

namespace {

std::vector<double> curve_ps(const ObservableCurve& c) {
  std::vector<double> out;
  out.reserve(c.points.size());
  for (const auto& pt : c.points) out.push_back(pt.p);
  return out;
}

// All roots of f(p) = g(p) on the overlap of two interpolants, by sign scan
// plus bisection.
std::vector<double> intersection_roots(const Pchip& f, const Pchip& g) {
  const double lo = std::max(f.x_min(), g.x_min());
  const double hi = std::min(f.x_max(), g.x_max());
  if (!(lo < hi)) throw std::invalid_argument("curves do not overlap in p");
  constexpr int kScan = 256;
  std::vector<double> roots;
  auto diff = [&](double p) { return f(p) - g(p); };
  double prev_p = lo;
  double prev_d = diff(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double p = lo + (hi - lo) * i / kScan;
    const double d = diff(p);
    if (prev_d == 0.0) {
      roots.push_back(prev_p);
    } else if (prev_d * d < 0.0) {
      double a = prev_p, b = p, fa = prev_d;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = diff(mid);
        if (fa * fm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_p = p;
    prev_d = d;
  }
  return roots;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

CrossingResult crossing_point(std::span<const ObservableCurve> curves,
                              uint64_t n_boot, uint64_t seed) {
  if (curves.size() < 2) throw std::invalid_argument("need at least two curves");
  std::vector<const ObservableCurve*> sorted;
  for (const auto& c : curves) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](auto* a, auto* b) { return a->n_qubits < b->n_qubits; });
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->n_qubits == sorted[i - 1]->n_qubits) {
      throw std::invalid_argument("curves must have distinct sizes");
    }
  }

  // Degenerate input: identical curves have no isolated crossing.
  {
    double max_diff = 0.0, scale = 0.0;
    for (size_t i = 1; i < sorted.size(); ++i) {
      const auto& a = sorted[i - 1]->points;
      const auto& b = sorted[i]->points;
      if (a.size() == b.size()) {
        bool same_grid = true;
        for (size_t j = 0; j < a.size(); ++j) {
          if (a[j].p != b[j].p) same_grid = false;
        }
        if (same_grid) {
          for (size_t j = 0; j < a.size(); ++j) {
            max_diff = std::max(max_diff, std::abs(a[j].value - b[j].value));
            scale = std::max({scale, std::abs(a[j].value), std::abs(b[j].value)});
          }
        } else {
          max_diff = std::numeric_limits<double>::infinity();
        }
      } else {
        max_diff = std::numeric_limits<double>::infinity();
      }
    }
    if (max_diff <= 1e-14 * std::max(scale, 1.0)) {
      throw std::invalid_argument("curves are identical; no unique crossing");
    }
  }

  auto replicate_estimate = [&](Rng* rng) -> std::optional<double> {
    std::vector<Pchip> interps;
    interps.reserve(sorted.size());
    for (const auto* c : sorted) {
      std::vector<double> ys;
      ys.reserve(c->points.size());
      for (const auto& pt : c->points) {
        ys.push_back(pt.value + (rng ? pt.stderr_ * rng->gaussian() : 0.0));
      }
      interps.emplace_back(curve_ps(*c), ys);
    }
    std::vector<double> crossings;
    for (size_t i = 1; i < interps.size(); ++i) {
      auto roots = intersection_roots(interps[i - 1], interps[i]);
      if (!roots.empty()) crossings.push_back(median(std::move(roots)));
    }
    if (crossings.empty()) return std::nullopt;
    double acc = 0;
    for (double c : crossings) acc += c;
    return acc / static_cast<double>(crossings.size());
  };

  const auto base = replicate_estimate(nullptr);
  if (!base.has_value()) {
    throw std::invalid_argument("no sign change: curves do not cross");
  }
  if (n_boot == 0) return {*base, 0.0, 0};

  Rng rng(derive_seed({seed, 0x63726f7373ULL}));
  double sum = 0, sum_sq = 0;
  uint64_t used = 0;
  for (uint64_t b = 0; b < n_boot; ++b) {
    const auto est = replicate_estimate(&rng);
    if (!est.has_value()) continue;
    sum += *est;
    sum_sq += *est * *est;
    ++used;
  }
  if (used < std::max<uint64_t>(2, n_boot / 5)) {
    throw std::runtime_error("bootstrap crossings mostly failed");
  }
  const double mean = sum / static_cast<double>(used);
  double var = sum_sq / static_cast<double>(used) - mean * mean;
  if (var < 0) var = 0;
  return {mean, std::sqrt(var), used};
}

namespace {

struct ScaledPoint {
  double x;
  double y;
  double sigma;
  uint32_t size;
};

struct CollapseProblem {
  std::vector<double> p;
  std::vector<double> value;
  std::vector<double> sigma;
  std::vector<uint32_t> size;
  double p_lo, p_hi;
};

CollapseProblem make_problem(std::span<const ObservableCurve> curves, Ansatz ansatz,
                             std::optional<std::pair<double, double>> window) {
  CollapseProblem prob;
  prob.p_lo = std::numeric_limits<double>::infinity();
  prob.p_hi = -std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    const double norm =
        ansatz == Ansatz::LogNormalized ? std::log2(static_cast<double>(c.n_qubits)) : 1.0;
    for (const auto& pt : c.points) {
      if (window && (pt.p < window->first || pt.p > window->second)) continue;
      prob.p.push_back(pt.p);
      prob.value.push_back(pt.value / norm);
      prob.sigma.push_back(std::max(pt.stderr_ / norm, 1e-12));
      prob.size.push_back(c.n_qubits);
      prob.p_lo = std::min(prob.p_lo, pt.p);
      prob.p_hi = std::max(prob.p_hi, pt.p);
    }
  }
  return prob;
}

// Master-curve quality: each transformed point against a weighted local
// linear fit through the nearest points of the other sizes.
double problem_cost(const CollapseProblem& prob, double p_c, double nu, double z) {
  const size_t n = prob.p.size();
  std::vector<ScaledPoint> pts(n);
  for (size_t i = 0; i < n; ++i) {
    const double nsz = static_cast<double>(prob.size[i]);
    const double scale = std::pow(nsz, 1.0 / nu);
    const double zden = std::pow(nsz, z);
    pts[i] = {(prob.p[i] - p_c) * scale, prob.value[i] / zden, prob.sigma[i] / zden,
              prob.size[i]};
  }
  double cost = 0.0;
  size_t used = 0;
  std::vector<std::pair<double, size_t>> others;
  others.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    others.clear();
    for (size_t j = 0; j < n; ++j) {
      if (pts[j].size != pts[i].size) {
        others.emplace_back(std::abs(pts[j].x - pts[i].x), j);
      }
    }
    if (others.size() < 4) continue;
    const size_t k_use = std::min<size_t>(8, others.size());
    std::partial_sort(others.begin(), others.begin() + k_use, others.end());
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (size_t t = 0; t < k_use; ++t) {
      const auto& q = pts[others[t].second];
      const double w = 1.0 / (q.sigma * q.sigma);
      sw += w;
      swx += w * q.x;
      swy += w * q.y;
      swxx += w * q.x * q.x;
      swxy += w * q.x * q.y;
    }
    const double det = sw * swxx - swx * swx;
    double yhat, var_hat;
    if (std::abs(det) < 1e-30 * sw * swxx || swxx == 0.0) {
      yhat = swy / sw;  // degenerate in x: weighted mean
      var_hat = 1.0 / sw;
    } else {
      const double a = (swxx * swy - swx * swxy) / det;
      const double b = (sw * swxy - swx * swy) / det;
      yhat = a + b * pts[i].x;
      var_hat = (swxx - 2.0 * pts[i].x * swx + pts[i].x * pts[i].x * sw) / det;
    }
    const double denom = pts[i].sigma * pts[i].sigma + var_hat;
    const double r = pts[i].y - yhat;
    cost += r * r / denom;
    ++used;
  }
  if (used == 0) return std::numeric_limits<double>::infinity();
  return cost / static_cast<double>(used);
}

struct Bounds {
  double lo, hi;
};

// Nelder-Mead with +inf outside the box.
std::vector<double> nelder_mead(const std::vector<double>& start,
                                const std::vector<double>& step,
                                std::span<const Bounds> bounds,
                                const std::function<double(std::span<const double>)>& f,
                                int max_iter, double* out_cost) {
  const size_t dim = start.size();
  auto clamped_cost = [&](std::span<const double> v) {
    for (size_t d = 0; d < dim; ++d) {
      if (v[d] < bounds[d].lo || v[d] > bounds[d].hi) {
        return std::numeric_limits<double>::infinity();
      }
    }
    return f(v);
  };
  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (size_t d = 0; d < dim; ++d) simplex[d + 1][d] += step[d];
  std::vector<double> cost(dim + 1);
  for (size_t v = 0; v <= dim; ++v) cost[v] = clamped_cost(simplex[v]);

  for (int it = 0; it < max_iter; ++it) {
    std::vector<size_t> order(dim + 1);
    for (size_t i = 0; i <= dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return cost[a] < cost[b]; });
    const size_t best = order[0], worst = order[dim], second = order[dim - 1];
    if (std::isfinite(cost[worst]) &&
        cost[worst] - cost[best] < 1e-10 * (std::abs(cost[best]) + 1e-12)) {
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
    }
    for (size_t d = 0; d < dim; ++d) centroid[d] /= static_cast<double>(dim);

    auto combine = [&](double t) {
      std::vector<double> out(dim);
      for (size_t d = 0; d < dim; ++d) {
        out[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
      }
      return out;
    };
    auto reflect = combine(-1.0);
    const double c_reflect = clamped_cost(reflect);
    if (c_reflect < cost[best]) {
      auto expand = combine(-2.0);
      const double c_expand = clamped_cost(expand);
      if (c_expand < c_reflect) {
        simplex[worst] = expand;
        cost[worst] = c_expand;
      } else {
        simplex[worst] = reflect;
        cost[worst] = c_reflect;
      }
    } else if (c_reflect < cost[second]) {
      simplex[worst] = reflect;
      cost[worst] = c_reflect;
    } else {
      auto contract = combine(0.5);
      const double c_contract = clamped_cost(contract);
      if (c_contract < cost[worst]) {
        simplex[worst] = contract;
        cost[worst] = c_contract;
      } else {
        for (size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (size_t d = 0; d < dim; ++d) {
            simplex[i][d] = 0.5 * (simplex[i][d] + simplex[best][d]);
          }
          cost[i] = clamped_cost(simplex[i]);
        }
      }
    }
  }
  size_t best = 0;
  for (size_t i = 1; i <= dim; ++i) {
    if (cost[i] < cost[best]) best = i;
  }
  if (out_cost) *out_cost = cost[best];
  return simplex[best];
}

struct FitCore {
  double p_c, nu, z, cost;
  bool hit_bounds;
};

FitCore fit_once(const CollapseProblem& prob, bool fit_z, double z_fixed,
                 const Bounds& pb, const Bounds& nb, const Bounds& zb, bool coarse) {
  const int np = coarse ? 13 : 25;
  const int nn = coarse ? 9 : 17;
  const int nz = fit_z ? (coarse ? 7 : 11) : 1;
  double best_cost = std::numeric_limits<double>::infinity();
  double bp = 0.5 * (pb.lo + pb.hi), bn = 0.5 * (nb.lo + nb.hi), bz = z_fixed;
  for (int ip = 0; ip < np; ++ip) {
    const double p_c = pb.lo + (pb.hi - pb.lo) * (ip + 0.5) / np;
    for (int in = 0; in < nn; ++in) {
      const double nu = nb.lo + (nb.hi - nb.lo) * (in + 0.5) / nn;
      for (int iz = 0; iz < nz; ++iz) {
        const double z = fit_z ? zb.lo + (zb.hi - zb.lo) * (iz + 0.5) / nz : z_fixed;
        const double c = problem_cost(prob, p_c, nu, z);
        if (c < best_cost) {
          best_cost = c;
          bp = p_c;
          bn = nu;
          bz = z;
        }
      }
    }
  }
  std::vector<double> start = {bp, bn};
  std::vector<double> step = {(pb.hi - pb.lo) / np, (nb.hi - nb.lo) / nn};
  std::vector<Bounds> bounds = {pb, nb};
  if (fit_z) {
    start.push_back(bz);
    step.push_back((zb.hi - zb.lo) / nz);
    bounds.push_back(zb);
  }
  auto eval = [&](std::span<const double> v) {
    return problem_cost(prob, v[0], v[1], fit_z ? v[2] : z_fixed);
  };
  double cost = 0;
  auto best = nelder_mead(start, step, bounds, eval, coarse ? 200 : 400, &cost);
  FitCore out;
  out.p_c = best[0];
  out.nu = best[1];
  out.z = fit_z ? best[2] : z_fixed;
  out.cost = cost;
  auto near_edge = [](double v, const Bounds& b) {
    return v - b.lo < 1e-6 * (b.hi - b.lo) || b.hi - v < 1e-6 * (b.hi - b.lo);
  };
  out.hit_bounds = near_edge(out.p_c, pb) || near_edge(out.nu, nb) ||
                   (fit_z && near_edge(out.z, zb));
  return out;
}

}  // namespace

double collapse_cost(std::span<const ObservableCurve> curves, Ansatz ansatz,
                     double p_c, double nu, double z,
                     std::optional<std::pair<double, double>> p_window) {
  const CollapseProblem prob = make_problem(curves, ansatz, p_window);
  return problem_cost(prob, p_c, nu, z);
}

ScalingFit collapse_fit(std::span<const ObservableCurve> curves, Ansatz ansatz,
                        const CollapseOptions& options) {
  std::vector<uint32_t> sizes;
  for (const auto& c : curves) sizes.push_back(c.n_qubits);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.size() < 2 || curves.size() < 2) {
    throw std::invalid_argument("collapse needs curves from multiple sizes");
  }

  const bool fit_z = ansatz != Ansatz::Standard && !options.fixed_z.has_value();
  const double z_fixed = ansatz == Ansatz::Standard
                             ? 0.0
                             : options.fixed_z.value_or(0.0);

  const CollapseProblem prob = make_problem(curves, ansatz, options.p_window);
  if (prob.p.size() < 8) throw std::invalid_argument("too few points to collapse");
  const Bounds pb{prob.p_lo, prob.p_hi};
  const Bounds nb{0.4, 4.0};
  const Bounds zb{-1.0, 2.0};

  const FitCore base = fit_once(prob, fit_z, z_fixed, pb, nb, zb, false);

  ScalingFit fit;
  fit.p_c = base.p_c;
  fit.nu = base.nu;
  fit.z = base.z;
  fit.z_fitted = fit_z;
  fit.cost = base.cost;
  fit.ansatz = ansatz;
  fit.sizes_used = sizes;
  fit.hit_bounds = base.hit_bounds;

  if (options.n_boot > 0) {
    Rng rng(derive_seed({options.seed, 0x636f6c6c61707365ULL}));
    double sp = 0, spp = 0, sn = 0, snn = 0, sz = 0, szz = 0;
    uint64_t used = 0;
    CollapseProblem rep = prob;
    for (uint64_t b = 0; b < options.n_boot; ++b) {
      for (size_t i = 0; i < prob.value.size(); ++i) {
        rep.value[i] = prob.value[i] + prob.sigma[i] * rng.gaussian();
      }
      const FitCore r = fit_once(rep, fit_z, z_fixed, pb, nb, zb, true);
      if (!std::isfinite(r.cost)) continue;
      sp += r.p_c;
      spp += r.p_c * r.p_c;
      sn += r.nu;
      snn += r.nu * r.nu;
      sz += r.z;
      szz += r.z * r.z;
      ++used;
    }
    if (used >= 2) {
      auto spread = [&](double s, double ss) {
        const double mean = s / static_cast<double>(used);
        double var = ss / static_cast<double>(used) - mean * mean;
        return var > 0 ? std::sqrt(var) : 0.0;
      };
      fit.p_c_err = spread(sp, spp);
      fit.nu_err = spread(sn, snn);
      fit.z_err = fit_z ? spread(sz, szz) : 0.0;
    }
  }
  return fit;
}

PowerLawFit power_law_fit(std::span<const PowerLawPoint> points) {
  if (points.size() < 3) throw std::invalid_argument("need at least 3 sizes");
  bool weighted = true;
  for (const auto& pt : points) {
    if (pt.value <= 0.0 || pt.n <= 0.0) {
      throw std::invalid_argument("power law needs positive values");
    }
    if (pt.stderr_ <= 0.0) weighted = false;
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : points) {
    const double x = std::log(pt.n);
    const double y = std::log(pt.value);
    const double sigma = weighted ? pt.stderr_ / pt.value : 1.0;
    const double w = 1.0 / (sigma * sigma);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  const double det = sw * sxx - sx * sx;
  if (std::abs(det) < 1e-30) throw std::invalid_argument("degenerate sizes");
  PowerLawFit fit;
  fit.exponent = (sw * sxy - sx * sy) / det;
  const double intercept = (sxx * sy - sx * sxy) / det;
  fit.amplitude = std::exp(intercept);
  double chi2 = 0;
  for (const auto& pt : points) {
    const double x = std::log(pt.n);
    const double y = std::log(pt.value);
    const double sigma = weighted ? pt.stderr_ / pt.value : 1.0;
    const double r = (y - intercept - fit.exponent * x) / sigma;
    chi2 += r * r;
  }
  const double dof = static_cast<double>(points.size()) - 2.0;
  double var_slope = sw / det;
  if (!weighted) {
    var_slope *= chi2 / std::max(dof, 1.0);
  } else if (dof > 0 && chi2 / dof > 1.0) {
    var_slope *= chi2 / dof;  // inflate when the model under-fits
  }
  fit.exponent_err = std::sqrt(std::max(var_slope, 0.0));
  return fit;
}

CriticalPointComparison compare_critical_points(double pc_a, double err_a,
                                                double pc_b, double err_b) {
  CriticalPointComparison cmp;
  cmp.difference = pc_a - pc_b;
  cmp.combined_err = std::sqrt(err_a * err_a + err_b * err_b);
  cmp.significant = std::abs(cmp.difference) > 2.0 * cmp.combined_err;
  return cmp;
}

std::vector<ObservableCurve> filter_small_sizes(std::span<const ObservableCurve> curves,
                                                uint32_t k, bool strict) {
  std::vector<ObservableCurve> out;
  for (const auto& c : curves) {
    const uint64_t n = c.n_qubits;
    const bool keep = strict ? n >= (uint64_t{1} << (k + 2)) : n > (uint64_t{1} << k);
    if (keep) out.push_back(c);
  }
  return out;
}

std::string ScalingFit::to_json(const std::string& observable, const std::string& model,
                                uint32_t k) const {
  nlohmann::json j;
  j["observable"] = observable;
  j["model"] = model;
  j["k"] = k;
  switch (ansatz) {
    case Ansatz::Standard: j["ansatz"] = "standard"; break;
    case Ansatz::Dynamic: j["ansatz"] = "dynamic"; break;
    case Ansatz::LogNormalized: j["ansatz"] = "log_normalized"; break;
  }
  j["p_c"] = p_c;
  j["p_c_err"] = p_c_err;
  j["nu"] = nu;
  j["nu_err"] = nu_err;
  j["z"] = z;
  j["z_err"] = z_err;
  j["cost"] = cost;
  j["sizes_used"] = sizes_used;
  return j.dump();
}

}  // namespace scrambler

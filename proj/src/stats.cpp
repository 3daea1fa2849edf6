#include "kinex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "kinex/errors.hpp"

namespace kinex {

namespace {

void check_edges(std::span<const double> edges) {
  if (edges.size() < 2) throw DomainError("histogram: need at least two edges");
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (!(edges[k] > edges[k - 1])) throw DomainError("histogram: edges must be strictly increasing");
  }
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double DensityEstimate::center(std::size_t k) const {
  return scale == BinScale::Logarithmic ? std::sqrt(edges[k] * edges[k + 1]) : 0.5 * (edges[k] + edges[k + 1]);
}

double DensityEstimate::integral() const {
  double total = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) total += density[k] * width(k);
  return total;
}

std::vector<double> linear_edges(double lo, double hi, std::size_t bins) {
  if (!(hi > lo) || bins == 0) throw DomainError("linear_edges: need hi > lo and at least one bin");
  std::vector<double> edges(bins + 1);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k <= bins; ++k) edges[k] = lo + w * static_cast<double>(k);
  edges.back() = hi;
  return edges;
}

std::vector<double> log_edges(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(hi > lo) || !(ratio > 1.0)) {
    throw DomainError("log_edges: need 0 < lo < hi and ratio > 1");
  }
  std::vector<double> edges{lo};
  for (std::size_t k = 1; edges.back() < hi; ++k) edges.push_back(lo * std::pow(ratio, static_cast<double>(k)));
  return edges;
}

DensityEstimate histogram(std::span<const double> samples, std::span<const double> edges, BinScale scale) {
  check_edges(edges);
  if (scale == BinScale::Logarithmic && !(edges.front() > 0.0)) {
    throw DomainError("histogram: logarithmic bins need a positive lower edge");
  }
  const std::size_t bins = edges.size() - 1;
  std::vector<std::size_t> counts(bins, 0);
  std::size_t outside = 0;
  for (double x : samples) {
    if (!(x >= edges.front() && x <= edges.back())) {
      ++outside;
      continue;
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t k = static_cast<std::size_t>(it - edges.begin()) - 1;
    if (k >= bins) k = bins - 1;
    ++counts[k];
  }
  const std::size_t inside = samples.size() - outside;
  if (inside == 0) throw EstimationError("histogram: no samples inside the bin range");

  DensityEstimate d{std::vector<double>(edges.begin(), edges.end()), std::vector<double>(bins), inside, outside,
                    scale};
  for (std::size_t k = 0; k < bins; ++k) {
    d.density[k] = static_cast<double>(counts[k]) / (static_cast<double>(inside) * d.width(k));
  }
  return d;
}

DensityEstimate average_densities(std::span<const DensityEstimate> estimates) {
  if (estimates.empty()) throw DomainError("average_densities: nothing to average");
  DensityEstimate out = estimates.front();
  for (std::size_t r = 1; r < estimates.size(); ++r) {
    const DensityEstimate& e = estimates[r];
    if (e.edges != out.edges) throw DomainError("average_densities: bin edges differ");
    for (std::size_t k = 0; k < out.density.size(); ++k) out.density[k] += e.density[k];
    out.n_samples += e.n_samples;
    out.n_out_of_range += e.n_out_of_range;
  }
  const double n = static_cast<double>(estimates.size());
  for (double& v : out.density) v /= n;
  return out;
}

TailFit estimate_tail_exponent(std::span<const double> samples, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw DomainError("estimate_tail_exponent: tail_fraction must lie in (0,1]");
  }
  if (samples.size() < 100) throw EstimationError("estimate_tail_exponent: need at least 100 samples");
  const auto k = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(samples.size())));
  if (k < 10) throw EstimationError("estimate_tail_exponent: fewer than 10 tail samples");

  std::vector<double> top(samples.begin(), samples.end());
  std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k - 1), top.end(), std::greater<>());
  top.resize(k);
  const double xmin = *std::min_element(top.begin(), top.end());
  if (!(xmin > 0.0)) throw EstimationError("estimate_tail_exponent: nonpositive samples in the tail");

  std::sort(top.begin(), top.end());
  double log_sum = 0.0;
  for (double x : top) log_sum += std::log(x / xmin);
  if (!(log_sum > 0.0)) throw EstimationError("estimate_tail_exponent: tail has no log spread");

  const double alpha = static_cast<double>(k) / log_sum;
  return TailFit{alpha + 1.0, xmin, k, alpha / std::sqrt(static_cast<double>(k))};
}

double beta_pdf(double x, double a, double b) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("beta_pdf: x must lie in (0,1)");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_pdf: a and b must be positive");
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta);
}

double beta_cdf(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_cdf: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double exponential_cdf(double x, double mean) { return x <= 0.0 ? 0.0 : -std::expm1(-x / mean); }

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& reference_cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: need at least one sample");
  const std::vector<double> xs = sorted_copy(samples);
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = reference_cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: both samples must be nonempty");
  const std::vector<double> xa = sorted_copy(a);
  const std::vector<double> xb = sorted_copy(b);
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    const double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

GammaFit gamma_moment_fit(std::span<const double> samples) {
  if (samples.size() < 2) throw EstimationError("gamma_moment_fit: need at least two samples");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) {
    if (!(x > 0.0)) throw EstimationError("gamma_moment_fit: samples must be positive");
    ss += (x - mean) * (x - mean);
  }
  const double var = ss / (n - 1.0);
  if (!(var > 0.0)) throw EstimationError("gamma_moment_fit: zero variance");
  return GammaFit{mean * mean / var, var / mean};
}

std::vector<double> smooth(std::span<const double> values, std::size_t window) {
  if (window == 0 || window % 2 == 0) throw DomainError("smooth: window must be a positive odd count");
  const std::size_t half = window / 2;
  const std::size_t n = values.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(n - 1, k + half);
    double sum = 0.0;
    for (std::size_t m = lo; m <= hi; ++m) sum += values[m];
    out[k] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::size_t count_modes(const DensityEstimate& d, std::size_t smoothing_window, double prominence, double floor) {
  if (d.bins() < smoothing_window || d.bins() < 2) {
    throw DomainError("count_modes: need at least " + std::to_string(std::max<std::size_t>(smoothing_window, 2)) +
                      " bins");
  }
  const std::vector<double> s = smooth(d.density, smoothing_window);
  const std::size_t n = s.size();
  const double cutoff = floor * *std::max_element(s.begin(), s.end());

  std::size_t modes = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const bool above_left = k == 0 || s[k] > s[k - 1];
    const bool above_right = k + 1 == n || s[k] > s[k + 1];
    if (!above_left || !above_right || s[k] < cutoff) continue;

    // Each side is scanned until terrain higher than the peak; a side that
    // reaches the end of the range first does not bound the peak.
    std::optional<double> key_valley;
    auto bound_by = [&](std::optional<double> valley) {
      if (valley) key_valley = key_valley ? std::max(*key_valley, *valley) : *valley;
    };
    {
      double lowest = s[k];
      std::optional<double> valley;
      for (std::size_t m = k; m-- > 0;) {
        if (s[m] > s[k]) {
          valley = lowest;
          break;
        }
        lowest = std::min(lowest, s[m]);
      }
      bound_by(valley);
    }
    {
      double lowest = s[k];
      std::optional<double> valley;
      for (std::size_t m = k + 1; m < n; ++m) {
        if (s[m] > s[k]) {
          valley = lowest;
          break;
        }
        lowest = std::min(lowest, s[m]);
      }
      bound_by(valley);
    }
    if (!key_valley || s[k] > prominence * *key_valley) ++modes;
  }
  return modes;
}

bool stationarity_check(std::span<const double> window_a, std::span<const double> window_b, double tol) {
  return ks_two_sample(window_a, window_b) < tol;
}

}  // namespace kinex

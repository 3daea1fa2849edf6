#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kinex {

enum class BinScale { Linear, Logarithmic };

struct DensityEstimate {
  std::vector<double> edges;    // ascending, size bins + 1
  std::vector<double> density;  // per bin, integrates to 1 over the covered range
  std::size_t n_samples = 0;    // samples inside the range
  std::size_t n_out_of_range = 0;
  BinScale scale = BinScale::Linear;

  std::size_t bins() const { return density.size(); }
  double width(std::size_t k) const { return edges[k + 1] - edges[k]; }
  // Arithmetic midpoint for linear bins, geometric midpoint for log bins.
  double center(std::size_t k) const;
  double integral() const;

  bool operator==(const DensityEstimate&) const = default;
};

std::vector<double> linear_edges(double lo, double hi, std::size_t bins);
// Constant-ratio edges lo, lo*r, lo*r^2, ... up to the first edge >= hi.
std::vector<double> log_edges(double lo, double hi, double ratio);

// Bins are half-open [e_k, e_k+1) except the last, which also takes its upper
// edge. Samples outside [e_0, e_K] are counted in n_out_of_range and do not
// enter the normalization. Throws EstimationError if no sample is in range.
DensityEstimate histogram(std::span<const double> samples, std::span<const double> edges,
                          BinScale scale = BinScale::Linear);

// Mean of densities sharing identical edges; the sample counts are summed.
DensityEstimate average_densities(std::span<const DensityEstimate> estimates);

struct TailFit {
  double density_exponent = 0.0;  // minus the log-log slope of P(m)
  double xmin = 0.0;
  std::size_t n_tail = 0;
  double standard_error = 0.0;

  double cdf_index() const { return density_exponent - 1.0; }
  bool operator==(const TailFit&) const = default;
};

inline constexpr double kDefaultTailFraction = 0.05;

// Hill estimator on the top tail_fraction of the sample. With the k largest
// values x_(1) >= ... >= x_(k) and xmin = x_(k):
//   alpha = k / sum_i ln(x_(i) / xmin),  density exponent = alpha + 1,
//   stderr = alpha / sqrt(k).
TailFit estimate_tail_exponent(std::span<const double> samples,
                               double tail_fraction = kDefaultTailFraction);

// Euler beta density, normalized through log-gamma.
double beta_pdf(double x, double a, double b);
// Regularized incomplete beta function.
double beta_cdf(double x, double a, double b);

double exponential_cdf(double x, double mean = 1.0);

// Sup distance between the empirical CDF of `samples` and `reference_cdf`.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& reference_cdf);

// Sup distance between two empirical CDFs.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct GammaFit {
  double shape = 0.0;
  double scale = 0.0;
  bool operator==(const GammaFit&) const = default;
};

// Method of moments: shape = mean^2 / var, scale = var / mean.
GammaFit gamma_moment_fit(std::span<const double> samples);

inline constexpr std::size_t kDefaultSmoothingWindow = 5;
inline constexpr double kDefaultModeProminence = 1.2;
inline constexpr double kDefaultModeFloor = 0.01;

// Centered moving average; the window is truncated at the ends.
std::vector<double> smooth(std::span<const double> values, std::size_t window);

// Number of modes of the smoothed density. A strict local maximum counts when
// its height exceeds `prominence` times its key valley: on each side, the
// lowest point before the terrain rises above the peak again; the higher of
// the two sides is the key valley. Sides that reach the end of the range
// without meeting higher terrain are ignored, so the global maximum always
// counts. Maxima lower than `floor` times the global maximum are sampling
// noise in the sparse tail and never count.
std::size_t count_modes(const DensityEstimate& d, std::size_t smoothing_window = kDefaultSmoothingWindow,
                        double prominence = kDefaultModeProminence, double floor = kDefaultModeFloor);

// True iff the two-sample KS distance between the windows is below tol.
bool stationarity_check(std::span<const double> window_a, std::span<const double> window_b, double tol);

}  // namespace kinex

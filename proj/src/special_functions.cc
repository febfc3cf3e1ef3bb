#include "pce/special_functions.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace pce {

double BetaQuantile(double a, double b, double q) {
  if (!(a > 0) || !(b > 0)) throw std::domain_error("beta parameters must be positive");
  if (!(q > 0 && q < 1)) throw std::domain_error("quantile level must lie in (0, 1)");
  // Stop only when both the bracket and the CDF residual are small. Near 0
  // or 1 with a small shape parameter the CDF is steep enough that a 1e-15
  // bracket still misses q; where it is flat a small residual still leaves
  // x loose.
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double cdf = boost::math::ibeta(a, b, mid);
    if (hi - lo <= 1e-3 * kSpecialFunctionTolerance &&
        std::abs(cdf - q) <= 0.1 * kSpecialFunctionTolerance) {
      return mid;
    }
    if (cdf < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(boost::math::ibeta(a, b, lo) - q) < std::abs(boost::math::ibeta(a, b, hi) - q)
             ? lo
             : hi;
}

std::vector<double> DirichletSample(const std::vector<double>& counts, std::mt19937_64& rng) {
  if (counts.empty()) throw std::domain_error("empty Dirichlet parameter");
  std::vector<double> draw(counts.size());
  double total = 0.0;
  for (size_t k = 0; k < counts.size(); ++k) {
    if (!(counts[k] > 0)) throw std::domain_error("Dirichlet counts must be positive");
    std::gamma_distribution<double> gamma(counts[k], 1.0);
    draw[k] = gamma(rng);
    total += draw[k];
  }
  if (total <= 0) {
    // Every gamma draw underflowed (tiny counts); fall back to the mean.
    double sum = 0;
    for (double c : counts) sum += c;
    for (size_t k = 0; k < counts.size(); ++k) draw[k] = counts[k] / sum;
    return draw;
  }
  for (double& x : draw) x /= total;
  return draw;
}

double DirichletLinearQuantile(const std::vector<double>& counts,
                               const std::vector<double>& weights, double q, std::uint64_t seed,
                               int samples) {
  if (counts.size() != weights.size() || counts.empty()) {
    throw std::invalid_argument("counts and weights must have the same nonzero length");
  }
  if (!(q >= 0 && q <= 1)) throw std::domain_error("quantile level must lie in [0, 1]");
  const auto [wmin, wmax] = std::minmax_element(weights.begin(), weights.end());
  if (q == 0) return *wmin;
  if (q == 1) return *wmax;
  if (*wmin == *wmax) return *wmin;
  if (counts.size() == 2) {
    // w1 + (w0 - w1) * alpha_0 with alpha_0 ~ Beta(c0, c1).
    const double w0 = weights[0];
    const double w1 = weights[1];
    const double level = w0 > w1 ? q : 1 - q;
    return w1 + (w0 - w1) * BetaQuantile(counts[0], counts[1], level);
  }
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<double> values(static_cast<size_t>(samples));
  for (double& v : values) {
    const std::vector<double> alpha = DirichletSample(counts, rng);
    v = 0;
    for (size_t k = 0; k < alpha.size(); ++k) v += weights[k] * alpha[k];
  }
  // Smallest value whose empirical CDF reaches q.
  const long ceil_rank = static_cast<long>(std::ceil(q * static_cast<double>(samples)));
  const size_t rank = static_cast<size_t>(std::clamp(ceil_rank - 1, 0L, samples - 1L));
  std::nth_element(values.begin(), values.begin() + static_cast<long>(rank), values.end());
  return values[rank];
}

}  // namespace pce

#ifndef PCE_SPECIAL_FUNCTIONS_H_
#define PCE_SPECIAL_FUNCTIONS_H_

#include <cstdint>
#include <random>
#include <vector>

namespace pce {

inline constexpr double kSpecialFunctionTolerance = 1e-12;
inline constexpr int kDefaultQuantileSamples = 20000;

// q-quantile of Beta(a, b), by bisection on the regularized incomplete beta
// function. Requires a, b > 0 and 0 < q < 1; throws std::domain_error.
double BetaQuantile(double a, double b, double q);

// One draw from Dirichlet(counts). Throws std::domain_error on a
// nonpositive count.
std::vector<double> DirichletSample(const std::vector<double>& counts, std::mt19937_64& rng);

// q-quantile of sum_k weights[k] * alpha_k for alpha ~ Dirichlet(counts).
// Two components are handled through BetaQuantile; larger supports use
// `samples` Monte Carlo draws seeded by `seed`. q = 0 and q = 1 return the
// support endpoints.
double DirichletLinearQuantile(const std::vector<double>& counts,
                               const std::vector<double>& weights, double q, std::uint64_t seed,
                               int samples = kDefaultQuantileSamples);

}  // namespace pce

#endif  // PCE_SPECIAL_FUNCTIONS_H_

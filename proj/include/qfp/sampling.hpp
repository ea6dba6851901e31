#ifndef QFP_SAMPLING_HPP
#define QFP_SAMPLING_HPP

// Stochastic draws for the detection model, all fed from CounterRng so every
// sample is a pure function of (seed, consumption order).

#include <cstdint>

#include "qfp/bitstring.hpp"

namespace qfp {

// Poisson variate with the given mean.  Sequential inversion below mean 30,
// transformed rejection (Hormann's PTRS) at and above it; both consume
// uniforms from `rng`.  Negative or non-finite means throw std::domain_error.
std::int64_t poisson_sample(double lambda, CounterRng& rng);

// True with probability p; p outside [0, 1] throws std::domain_error.
bool bernoulli_sample(double p, CounterRng& rng);

}  // namespace qfp

#endif  // QFP_SAMPLING_HPP

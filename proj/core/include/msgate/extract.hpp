#pragma once

#include <vector>

#include "msgate/basis.hpp"

namespace msgate {

// Angular frequency of the slow population oscillation in a sampled
// rho_gg,gg(t) starting from full population: finds the first deep minimum
// (first contiguous run below min + quarter range), refines the minimum time
// by a local quadratic fit wide enough to average out the fast off-resonant
// ripple, and returns pi / t_min. Throws NoOscillation when the dynamic range
// is below 0.1.
double extract_oscillation_frequency(const std::vector<double>& times,
                                     const std::vector<double>& rho_gggg);

}  // namespace msgate

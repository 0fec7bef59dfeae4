#pragma once

#include <cstdint>
#include <ostream>

namespace stagdd {

// Randomized unitary-algebra suite for the ZZ/DD identities (commutation,
// accumulation, inversion, staggered cancellation) plus the DD sequence
// identity-composition checks. Prints one line per check; returns true iff
// every check passes at 1e-10.
bool run_verification(std::ostream& os, int draws = 1000, std::uint64_t seed = 12345);

}  // namespace stagdd

#pragma once

#include <random>

#include "cohcert/prob_vec.hpp"
#include "cohcert/quantum.hpp"

namespace cohcert {

/// Haar-random unitary of size n (QR of a Ginibre matrix, phases fixed).
Matrix random_unitary(int n, std::mt19937_64& rng);

/// Random density matrix of rank <= rank: U diag(p) U^dagger with p a random
/// point on the simplex of the first `rank` coordinates.
DensityMatrix random_state(int dim, int rank, std::mt19937_64& rng);

/// Uniform (flat Dirichlet) random probability vector of length n.
ProbVec random_prob_vec(int n, std::mt19937_64& rng);

}  // namespace cohcert

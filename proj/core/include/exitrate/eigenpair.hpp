#pragma once

#include <array>
#include <string>

#include "exitrate/generator.hpp"
#include "exitrate/grid.hpp"
#include "exitrate/types.hpp"

namespace exitrate {

struct EigenOptions {
  /// Max-norm residual target; raised to 4 eps ||G||_inf when that is larger.
  double tol = 1e-10;
  int max_iterations = 10000;
};

/// Principal eigenpair of a sub-Markov generator: G psi = -lambda psi,
/// phi^T G = -lambda phi^T, both positive.
struct EigenPair {
  double lambda = 0.0;
  /// Right eigenvector, max = 1.
  Field psi;
  /// Left eigenvector, sum = 1.
  Field phi;
  /// ||G psi + lambda psi||_inf and ||G^T phi + lambda phi||_inf.
  double residual = 0.0;
  double left_residual = 0.0;
  /// Collatz-Wielandt interval evaluated at psi.
  std::array<double, 2> cw{0.0, 0.0};
  int iterations = 0;
};

/// Shifted inverse iteration with sparse LU. The first shift is
/// s = 1 + max|diag G|; afterwards the shift tracks the Collatz-Wielandt
/// lower bound, which keeps the shifted matrix a nonsingular M-matrix and
/// every iterate positive.
EigenPair principal_eigenpair(const GeneratorMatrix& g, const EigenOptions& options = {});

/// [min_i, max_i] of -(G psi)_i / psi_i. Requires psi > 0.
std::array<double, 2> cw_bounds(const GeneratorMatrix& g, const Field& psi);

/// Strong connectivity of the off-diagonal sparsity pattern.
bool is_irreducible(const GeneratorMatrix& g);

/// CSV with columns node coordinates, psi, phi.
std::string eigenpair_csv(const Grid& grid, const EigenPair& pair);

}  // namespace exitrate

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "exitrate/grid.hpp"
#include "exitrate/problem.hpp"
#include "exitrate/types.hpp"

namespace exitrate {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Drift discretization. kHybrid uses central differences wherever
/// |m_k| h <= a_kk (which keeps every off-diagonal rate nonnegative) and
/// falls back to upwinding elsewhere; kUpwind always upwinds.
enum class DriftScheme { kHybrid, kUpwind };

/// Sub-Markov generator on interior nodes. `killing` holds the rate dropped
/// from each row (boundary flux plus any potential), so that
/// row_sum(i) + killing(i) == 0 for every row.
struct GeneratorMatrix {
  SparseRowMatrix entries;
  Eigen::VectorXd killing;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
  Eigen::VectorXd row_sums() const;
  Field apply(const Field& f) const { return entries * f; }
};

struct AssemblyOptions {
  DriftScheme scheme = DriftScheme::kHybrid;
};

/// Per-node coefficients for the general assembler: diagonal of a and drift.
struct NodeCoefficients {
  Vec2 diffusion{0.0, 0.0};
  Vec2 drift{0.0, 0.0};
};

/// Assembles the killed generator from arbitrary per-node coefficients.
GeneratorMatrix assemble_from_coefficients(
    const Grid& grid, const std::function<NodeCoefficients(std::size_t)>& coefficients,
    const AssemblyOptions& options = {});

GeneratorMatrix assemble_generator(const Grid& grid, const ValidatedProblem& problem,
                                   const PolicySpec& policy, const AssemblyOptions& options = {});
GeneratorMatrix assemble_generator(const Grid& grid, const ValidatedProblem& problem,
                                   std::size_t action, const AssemblyOptions& options = {});

/// G - diag(potential): extra killing at the given per-node rates.
GeneratorMatrix with_potential(const GeneratorMatrix& g, const Field& potential);

/// Wraps a dense matrix; killing is taken as minus the row sums.
GeneratorMatrix generator_from_dense(const Eigen::MatrixXd& dense);

/// Lists the rate of each (row, neighbour) entry of `g` for each action;
/// used by the variational module to tilt single rows.
struct RowEntry {
  std::size_t col;
  double rate;
};
std::vector<RowEntry> off_diagonal_row(const GeneratorMatrix& g, std::size_t row);

/// "row col value" lines, zero-based indices.
std::string to_triplets(const GeneratorMatrix& g);

}  // namespace exitrate

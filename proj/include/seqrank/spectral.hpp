#pragma once

#include <cstdint>
#include <vector>

#include "seqrank/model.hpp"

namespace seqrank {

struct SolveOptions {
    double tolerance = 1e-10;
    int max_iterations = 10000;
    std::uint64_t seed = 0; // reserved for randomized starts; current solvers are deterministic

    void validate() const {
        if (tolerance <= 0.0) throw UsageError("solve options: tolerance must be > 0");
        if (max_iterations < 1) throw UsageError("solve options: max_iterations must be >= 1");
    }
};

// Stationary distribution q of a row-stochastic operator, by power iteration
// from the uniform start vector. On return q >= 0, sum(q) = 1 and
// ||q^T S - q^T||_1 <= tolerance.
Vector stationary_distribution(const MethodOperator& op, const SolveOptions& opts = {});

// Unit-norm eigenvector of the second-smallest eigenvalue of a similarity
// Laplacian, orthogonal to the all-ones vector. Sign is canonical: the
// largest-magnitude entry (lowest index on ties) is positive.
Vector fiedler_vector(const MethodOperator& op, const SolveOptions& opts = {});

// Unit-norm eigenvector of the algebraically largest eigenvalue of a
// conjugate-symmetric phase operator. Phase is canonical: the
// largest-modulus entry (lowest index on ties) is real positive.
std::vector<Complex> top_eigenvector_hermitian(const MethodOperator& op,
                                               const SolveOptions& opts = {});

struct SingularTriple {
    double sigma = 0.0;
    Vector left;
    Vector right;
};

// k largest singular triples of a square matrix, values descending, vectors
// unit norm with canonical sign on the left vector.
std::vector<SingularTriple> top_singular_pairs(const Matrix& m, int k,
                                               const SolveOptions& opts = {});

// Minimum-norm x minimizing ||Bx - w||^2 for an edge-vertex incidence system,
// centered so mean(x) = 0. Requires the underlying graph to be connected.
Vector solve_incidence_least_squares(const MethodOperator& op, const SolveOptions& opts = {});

// Connected components of a graph on n vertices given by undirected edges.
// Components are sorted by their smallest vertex; vertices sorted within.
std::vector<std::vector<int>> connected_components(int n,
                                                   const std::vector<std::pair<int, int>>& edges);

} // namespace seqrank

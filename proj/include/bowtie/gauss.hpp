#pragma once

#include <vector>

namespace bowtie {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1,1]; cached per n.
const GaussRule& gauss_legendre(int n);

/// Barycentric weights for interpolation through the given nodes.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

/// Evaluate all Lagrange basis functions at t (barycentric form).
void lagrange_basis(const std::vector<double>& nodes,
                    const std::vector<double>& bary, double t,
                    double* out);

}  // namespace bowtie

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "qfm/encoding.hpp"
#include "qfm/matrix.hpp"
#include "qfm/simulator.hpp"

namespace qfm {

/// Symmetric kernel matrix over one sample set. The counter records how many
/// kernel evaluations were spent building it: (n^2 - n) / 2, the diagonal is
/// set to 1 without evaluation and the lower triangle is mirrored.
struct GramMatrix {
  Matrix entries;
  std::uint64_t evaluation_count = 0;
};

/// Rectangular kernel matrix between two sample sets; rows index the first.
struct CrossKernel {
  Matrix entries;
  std::uint64_t evaluation_count = 0;
};

using KernelFn = std::function<double(std::span<const double>, std::span<const double>)>;

/// Quantum kernel value: squared fidelity |<psi(x)|psi(y)>|^2 of the
/// data-encoded states. Symmetric, kernel(x, x) = 1.
double kernel(const FeatureMapCircuit& fm, std::span<const double> x,
              std::span<const double> y);

/// One prepared state per sample row; lets Gram and cross matrices reuse
/// state preparations across pairs.
std::vector<StateVector> prepare_states(const FeatureMapCircuit& fm, const Matrix& samples);

GramMatrix gram_from_states(std::span<const StateVector> states);
CrossKernel cross_from_states(std::span<const StateVector> a, std::span<const StateVector> b);

GramMatrix gram_matrix(const FeatureMapCircuit& fm, const Matrix& samples);
CrossKernel cross_kernel(const FeatureMapCircuit& fm, const Matrix& a, const Matrix& b);

/// Same contracts, for an arbitrary kernel function (classical baselines,
/// stubbed kernels in dry runs).
GramMatrix gram_matrix_fn(const KernelFn& k, const Matrix& samples);
CrossKernel cross_kernel_fn(const KernelFn& k, const Matrix& a, const Matrix& b);

KernelFn rbf_kernel(double gamma);

/// Row-major full-matrix CSV, for debugging.
void write_gram_csv(std::ostream& out, const GramMatrix& gram);

}  // namespace qfm

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qfm/kernel.hpp"
#include "qfm/matrix.hpp"
#include "qfm/rng.hpp"

namespace qfm {

/// Disjoint index subsets covering 0..n-1 with sizes differing by at most 1.
struct ApproxPartition {
  unsigned subset_count = 1;
  std::vector<std::vector<std::size_t>> subsets;
};

/// Kernel-target alignment: the Frobenius inner product of the kernel matrix
/// with the label oracle O_ij = y_i y_j, normalized by both norms. Always in
/// [-1, 1].
double kta(const Matrix& kernel_matrix, std::span<const int> labels);
double kta(const GramMatrix& gram, std::span<const int> labels);

struct KtaApproxResult {
  double value = 0.0;
  std::uint64_t evaluation_count = 0;
};

/// Subset-averaged approximation: KTA computed per subset on its own Gram
/// matrix, then averaged without weighting. Costs sum_s (|s|^2 - |s|) / 2
/// kernel evaluations.
KtaApproxResult kta_approx(const FeatureMapCircuit& fm, const Matrix& samples,
                           std::span<const int> labels, const ApproxPartition& partition);

/// Same contract with an arbitrary kernel function.
KtaApproxResult kta_approx_fn(const KernelFn& k, const Matrix& samples,
                              std::span<const int> labels, const ApproxPartition& partition);

/// Seeded shuffle, then contiguous chunks; the first n mod a subsets take the
/// extra element. Requires 1 <= a <= n.
ApproxPartition make_partition(std::size_t n, unsigned subset_count, Rng& rng);

}  // namespace qfm

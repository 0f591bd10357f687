#include "qfm/alignment.hpp"

#include <cmath>
#include <numeric>

#include "qfm/error.hpp"

namespace qfm {

namespace {

Matrix subset_rows(const Matrix& samples, const std::vector<std::size_t>& indices) {
  Matrix out(indices.size(), samples.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto src = samples.row(indices[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

template <typename GramBuilder>
KtaApproxResult approx_impl(GramBuilder&& build, const Matrix& samples,
                            std::span<const int> labels, const ApproxPartition& partition) {
  if (partition.subsets.empty()) {
    throw Error(ErrorCode::Partition, "partition has no subsets");
  }
  std::size_t covered = 0;
  for (const auto& s : partition.subsets) covered += s.size();
  if (covered != samples.rows() || samples.rows() != labels.size()) {
    throw Error(ErrorCode::Partition, "partition does not cover the sample set");
  }

  KtaApproxResult result;
  double sum = 0.0;
  for (const auto& subset : partition.subsets) {
    std::vector<int> y(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) y[i] = labels[subset[i]];
    const GramMatrix gram = build(subset_rows(samples, subset));
    result.evaluation_count += gram.evaluation_count;
    sum += kta(gram.entries, y);
  }
  result.value = sum / static_cast<double>(partition.subsets.size());
  return result;
}

}  // namespace

double kta(const Matrix& kernel_matrix, std::span<const int> labels) {
  const std::size_t n = labels.size();
  if (kernel_matrix.rows() != n || kernel_matrix.cols() != n || n == 0) {
    throw Error(ErrorCode::Dimension, "kernel matrix shape does not match labels");
  }
  double ko = 0.0;
  double kk = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = kernel_matrix(i, j);
      ko += k * labels[i] * labels[j];
      kk += k * k;
    }
  }
  const double oo = static_cast<double>(n) * static_cast<double>(n);  // <O,O>_F
  return ko / std::sqrt(kk * oo);
}

double kta(const GramMatrix& gram, std::span<const int> labels) {
  return kta(gram.entries, labels);
}

KtaApproxResult kta_approx(const FeatureMapCircuit& fm, const Matrix& samples,
                           std::span<const int> labels, const ApproxPartition& partition) {
  return approx_impl([&](const Matrix& rows) { return gram_matrix(fm, rows); }, samples,
                     labels, partition);
}

KtaApproxResult kta_approx_fn(const KernelFn& k, const Matrix& samples,
                              std::span<const int> labels, const ApproxPartition& partition) {
  return approx_impl([&](const Matrix& rows) { return gram_matrix_fn(k, rows); }, samples,
                     labels, partition);
}

ApproxPartition make_partition(std::size_t n, unsigned subset_count, Rng& rng) {
  if (subset_count == 0 || subset_count > n) {
    throw Error(ErrorCode::Partition,
                "subset count must satisfy 1 <= a <= n, got a = " +
                    std::to_string(subset_count) + ", n = " + std::to_string(n));
  }
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  rng.shuffle(indices);

  ApproxPartition partition;
  partition.subset_count = subset_count;
  const std::size_t base = n / subset_count;
  const std::size_t extra = n % subset_count;
  std::size_t pos = 0;
  for (unsigned s = 0; s < subset_count; ++s) {
    const std::size_t size = base + (s < extra ? 1 : 0);
    partition.subsets.emplace_back(indices.begin() + pos, indices.begin() + pos + size);
    pos += size;
  }
  return partition;
}

}  // namespace qfm

#include "qfm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qfm/error.hpp"

namespace qfm {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double squared_fidelity(const StateVector& a, const StateVector& b) {
  return clamp01(std::norm(overlap(a, b)));
}

}  // namespace

double kernel(const FeatureMapCircuit& fm, std::span<const double> x,
              std::span<const double> y) {
  const StateVector sx = prepare_feature_state(fm, x);
  const StateVector sy = prepare_feature_state(fm, y);
  return squared_fidelity(sx, sy);
}

std::vector<StateVector> prepare_states(const FeatureMapCircuit& fm, const Matrix& samples) {
  std::vector<StateVector> states;
  states.reserve(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    states.push_back(prepare_feature_state(fm, samples.row(i)));
  }
  return states;
}

GramMatrix gram_from_states(std::span<const StateVector> states) {
  const std::size_t n = states.size();
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "gram matrix needs at least one sample");
  }
  GramMatrix gram;
  gram.entries = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    gram.entries(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = squared_fidelity(states[i], states[j]);
      gram.entries(i, j) = v;
      gram.entries(j, i) = v;
      ++gram.evaluation_count;
    }
  }
  return gram;
}

CrossKernel cross_from_states(std::span<const StateVector> a, std::span<const StateVector> b) {
  CrossKernel cross;
  cross.entries = Matrix(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      cross.entries(i, j) = squared_fidelity(a[i], b[j]);
      ++cross.evaluation_count;
    }
  }
  return cross;
}

GramMatrix gram_matrix(const FeatureMapCircuit& fm, const Matrix& samples) {
  return gram_from_states(prepare_states(fm, samples));
}

CrossKernel cross_kernel(const FeatureMapCircuit& fm, const Matrix& a, const Matrix& b) {
  const auto sa = prepare_states(fm, a);
  const auto sb = prepare_states(fm, b);
  return cross_from_states(sa, sb);
}

GramMatrix gram_matrix_fn(const KernelFn& k, const Matrix& samples) {
  const std::size_t n = samples.rows();
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "gram matrix needs at least one sample");
  }
  GramMatrix gram;
  gram.entries = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    gram.entries(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = k(samples.row(i), samples.row(j));
      gram.entries(i, j) = v;
      gram.entries(j, i) = v;
      ++gram.evaluation_count;
    }
  }
  return gram;
}

CrossKernel cross_kernel_fn(const KernelFn& k, const Matrix& a, const Matrix& b) {
  CrossKernel cross;
  cross.entries = Matrix(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      cross.entries(i, j) = k(a.row(i), b.row(j));
      ++cross.evaluation_count;
    }
  }
  return cross;
}

KernelFn rbf_kernel(double gamma) {
  return [gamma](std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
      throw Error(ErrorCode::Dimension, "rbf kernel dimension mismatch");
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - y[i];
      d2 += d * d;
    }
    return std::exp(-gamma * d2);
  };
}

void write_gram_csv(std::ostream& out, const GramMatrix& gram) {
  const Matrix& m = gram.entries;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

}  // namespace qfm

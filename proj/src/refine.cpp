#include "qfm/refine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qfm/alignment.hpp"
#include "qfm/error.hpp"
#include "qfm/linalg.hpp"

namespace qfm {

namespace {

// Exact affine interpolant through dim+1 simplex points, gradient relative
// to `origin`. Returns false when the simplex is degenerate.
bool fit_gradient(const std::vector<std::vector<double>>& points,
                  const std::vector<double>& values, const std::vector<double>& origin,
                  std::vector<double>& gradient) {
  const std::size_t dim = origin.size();
  Matrix a(dim + 1, dim + 1);
  std::vector<double> b(dim + 1);
  for (std::size_t r = 0; r <= dim; ++r) {
    a(r, 0) = 1.0;
    for (std::size_t c = 0; c < dim; ++c) a(r, c + 1) = points[r][c] - origin[c];
    b[r] = values[r];
  }
  try {
    const auto theta = solve_linear(std::move(a), std::move(b));
    gradient.assign(theta.begin() + 1, theta.end());
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<double> extract_parameters(const FeatureMapCircuit& fm) {
  std::vector<double> params;
  std::size_t rotation_index = 0;
  for (const auto& gate : fm.gates) {
    if (!gate.is_rotation()) continue;
    params.push_back(fm.has_overrides() ? fm.overrides[rotation_index]
                                        : gate.gene.proportionality);
    ++rotation_index;
  }
  return params;
}

FeatureMapCircuit with_parameters(FeatureMapCircuit fm, std::vector<double> parameters) {
  if (parameters.size() != fm.rotation_count()) {
    throw Error(ErrorCode::InvalidArgument,
                "parameter count does not match the circuit's rotation count");
  }
  fm.overrides = std::move(parameters);
  return fm;
}

CobylaResult cobyla_minimize(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const RefineConfig& config) {
  if (config.budget == 0) {
    throw Error(ErrorCode::InvalidArgument, "optimizer budget must be at least 1");
  }
  if (!(config.final_step > 0.0) || !(config.final_step < config.initial_step)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < final_step < initial_step");
  }

  CobylaResult result;
  RefineTrace& trace = result.trace;
  std::vector<double> best = x0;
  double best_value = 0.0;

  const auto evaluate = [&](const std::vector<double>& x) {
    const double v = f(x);
    trace.evaluations.emplace_back(x, v);
    if (trace.evaluations.size() == 1 || v < best_value) {
      best_value = v;
      best = x;
      trace.best_index = trace.evaluations.size() - 1;
    }
    return v;
  };
  const auto budget_left = [&] { return trace.evaluations.size() < config.budget; };

  evaluate(x0);
  const std::size_t dim = x0.size();
  if (dim == 0) {
    result.point = std::move(best);
    return result;
  }

  double rho = config.initial_step;
  std::vector<std::vector<double>> points{x0};
  std::vector<double> values{trace.evaluations[0].second};
  for (std::size_t i = 0; i < dim && budget_left(); ++i) {
    std::vector<double> p = x0;
    p[i] += rho;
    points.push_back(p);
    values.push_back(evaluate(p));
  }

  std::size_t rebuild_axis = 0;
  while (budget_left() && rho > config.final_step && points.size() == dim + 1) {
    const std::size_t vertex_best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());

    std::vector<double> gradient;
    double gradient_norm = 0.0;
    if (fit_gradient(points, values, points[vertex_best], gradient)) {
      for (const double g : gradient) gradient_norm += g * g;
      gradient_norm = std::sqrt(gradient_norm);
    }

    if (gradient_norm < 1e-14) {
      // Flat or degenerate model: shrink and refresh one vertex near the best.
      rho *= 0.5;
      if (rho <= config.final_step || !budget_left()) break;
      std::size_t victim = vertex_best == 0 ? 1 : 0;
      std::vector<double> p = points[vertex_best];
      p[rebuild_axis] += rho;
      rebuild_axis = (rebuild_axis + 1) % dim;
      points[victim] = p;
      values[victim] = evaluate(p);
      continue;
    }

    std::vector<double> candidate = points[vertex_best];
    for (std::size_t i = 0; i < dim; ++i) candidate[i] -= rho * gradient[i] / gradient_norm;
    const double candidate_value = evaluate(candidate);

    const std::size_t vertex_worst = static_cast<std::size_t>(
        std::max_element(values.begin(), values.end()) - values.begin());
    const bool improved = candidate_value < values[vertex_best];
    if (candidate_value < values[vertex_worst]) {
      points[vertex_worst] = std::move(candidate);
      values[vertex_worst] = candidate_value;
    }
    if (!improved) rho *= 0.5;
  }

  result.point = std::move(best);
  return result;
}

RefineResult refine_circuit(const FeatureMapCircuit& fm, const Matrix& train_features,
                            std::span<const int> train_labels, const RefineConfig& config,
                            double svm_c, double rmse_confidence, RmseVariant rmse_variant,
                            const CircuitKernel* kernel_override) {
  RefineResult result;
  if (fm.rotation_count() == 0) {
    result.circuit = fm;
    return result;
  }
  if (train_features.rows() != train_labels.size() || train_labels.empty()) {
    throw Error(ErrorCode::Dimension, "training split shape mismatch");
  }

  const std::vector<int> labels(train_labels.begin(), train_labels.end());
  const auto objective = [&](std::span<const double> params) {
    const FeatureMapCircuit candidate =
        with_parameters(fm, std::vector<double>(params.begin(), params.end()));
    GramMatrix gram;
    if (kernel_override != nullptr) {
      const KernelFn bound = [&](std::span<const double> x, std::span<const double> y) {
        return (*kernel_override)(candidate, x, y);
      };
      gram = gram_matrix_fn(bound, train_features);
    } else {
      gram = gram_matrix(candidate, train_features);
    }
    result.kernel_evaluations += gram.evaluation_count;
    if (config.objective == RefineObjective::MaxKta) {
      return -kta(gram.entries, labels);
    }
    const SvmModel model = train_svm(gram.entries, labels, svm_c);
    return rmse(model, gram.entries, labels, rmse_confidence, rmse_variant);
  };

  CobylaResult opt = cobyla_minimize(objective, extract_parameters(fm), config);
  result.circuit = with_parameters(fm, std::move(opt.point));
  result.initial_objective = opt.trace.evaluations.front().second;
  result.final_objective = opt.trace.evaluations[opt.trace.best_index].second;
  result.trace = std::move(opt.trace);
  return result;
}

void write_trace_csv(std::ostream& out, const RefineTrace& trace) {
  for (std::size_t i = 0; i < trace.evaluations.size(); ++i) {
    out << i;
    for (const double p : trace.evaluations[i].first) out << ',' << p;
    out << ',' << trace.evaluations[i].second << '\n';
  }
}

}  // namespace qfm

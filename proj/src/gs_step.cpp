#include "fringestep/gs_step.hpp"

#include <algorithm>
#include <cmath>

namespace fringestep {

namespace {

// Folds an arcsin argument into the reported estimate.  sin(delta) cannot
// distinguish delta from pi - delta, so the magnitude in [0, pi/2] is reported
// together with the argument's sign.
StepEstimate fold_estimate(double raw_argument, Estimator estimator, double kappa_ratio,
                           double mask_fraction) {
  StepEstimate est;
  est.sign = raw_argument >= 0.0 ? +1 : -1;
  const double clamped = std::clamp(raw_argument, -1.0, 1.0);
  est.delta_hat = std::abs(std::asin(clamped));
  est.estimator = estimator;
  est.kappa_ratio = kappa_ratio;
  est.mask_fraction = mask_fraction;
  return est;
}

}  // namespace

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::Tan: return "tan";
    case Estimator::Sin: return "sin";
  }
  throw std::logic_error("estimator_name: bad enum value");
}

Estimator parse_estimator(const std::string& name) {
  if (name == "tan") return Estimator::Tan;
  if (name == "sin") return Estimator::Sin;
  throw std::invalid_argument("unknown estimator '" + name + "' (expected tan or sin)");
}

const char* aggregator_name(Aggregator a) {
  switch (a) {
    case Aggregator::Mean: return "mean";
    case Aggregator::Median: return "median";
  }
  throw std::logic_error("aggregator_name: bad enum value");
}

Aggregator parse_aggregator(const std::string& name) {
  if (name == "mean") return Aggregator::Mean;
  if (name == "median") return Aggregator::Median;
  throw std::invalid_argument("unknown aggregator '" + name + "' (expected mean or median)");
}

GSDecomposition gs_decompose(const ScalarField& u1, const ScalarField& u2) {
  const double n1 = norm(u1);
  if (n1 == 0.0) {
    throw DegeneratePairError("gs_decompose: first frame is blank (zero norm)");
  }
  GSDecomposition d;
  d.u1_tilde = u1 / n1;
  d.proj_coeff = inner_product(u2, d.u1_tilde);
  d.u2_hat = scale_add(u2, 1.0, d.u1_tilde, -d.proj_coeff);
  const double n2 = norm(d.u2_hat);
  if (n2 <= 1e-12 * norm(u2)) {
    throw DegeneratePairError(
        "gs_decompose: frames are numerically parallel (step = 0 mod pi leaves no "
        "quadrature component)");
  }
  d.u2_tilde = d.u2_hat / n2;
  return d;
}

ScalarField wrapped_phase(const GSDecomposition& d, std::size_t* undefined_count) {
  ScalarField out(d.u1_tilde.rows(), d.u1_tilde.cols());
  std::size_t undefined = 0;
  const double* c = d.u1_tilde.data();
  const double* s = d.u2_tilde.data();
  double* o = out.data();
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    if (c[k] == 0.0 && s[k] == 0.0) {
      o[k] = 0.0;  // direction undefined; pinned, not an error
      ++undefined;
      continue;
    }
    double v = std::atan2(-s[k], c[k]);
    if (v == -kPi) v = kPi;  // keep the range the half-open (-pi, pi]
    o[k] = v;
  }
  if (undefined_count != nullptr) *undefined_count = undefined;
  return out;
}

double compute_kappa_ratio(const ScalarField& u1, const GSDecomposition& d) {
  if (norm(u1) == 0.0) {
    throw DegeneratePairError("compute_kappa_ratio: first frame is blank (zero norm)");
  }
  const double* ct = d.u1_tilde.data();
  const double* st = d.u2_tilde.data();
  double cs = 0.0;
  double cc = 0.0;
  for (Eigen::Index k = 0; k < d.u1_tilde.size(); ++k) {
    const double r = std::hypot(ct[k], st[k]);
    if (r == 0.0) continue;  // no phase direction at this pixel
    const double c = ct[k] / r;
    const double s = -st[k] / r;
    cs += c * s;
    cc += c * c;
  }
  if (cc == 0.0) {
    throw DegeneratePairError("compute_kappa_ratio: no usable pixels");
  }
  return std::abs(cs) / cc;
}

DeltaMap delta_map(const ScalarField& u1, const GSDecomposition& d) {
  const ScalarField den = u1 * d.u2_tilde;
  const ScalarField abs_den = den.abs();

  std::vector<double> all(abs_den.data(), abs_den.data() + abs_den.size());
  const double threshold = percentile(std::move(all), 10.0);

  DeltaMap dm;
  dm.mask = abs_den > threshold;  // strict: zero denominators never survive
  const Eigen::Index kept = dm.mask.count();
  if (static_cast<double>(kept) < 0.01 * static_cast<double>(dm.mask.size())) {
    throw MaskStarvationError("delta_map: fewer than 1% of pixels have a usable denominator");
  }
  // u2_hat ~ -b*sin(delta)*sin(phi) and u2_tilde ~ -b*sin(phi)/||.||, so the
  // ratio comes out with a positive sign: no negation needed for the aggregate
  // to estimate +sin(delta).
  dm.map = dm.mask.select(d.u1_tilde * d.u2_hat / den, ScalarField::Zero(den.rows(), den.cols()));
  return dm;
}

StepEstimate estimate_step_tan(const ScalarField& u1, const ScalarField& u2,
                               Aggregator aggregator) {
  const GSDecomposition d = gs_decompose(u1, u2);
  const DeltaMap dm = delta_map(u1, d);
  std::vector<double> samples = masked_values(dm.map, dm.mask);
  const double mask_fraction =
      static_cast<double>(samples.size()) / static_cast<double>(dm.map.size());
  const double aggregate = aggregator == Aggregator::Mean ? mean(samples)
                                                          : median(std::move(samples));
  const double kappa = compute_kappa_ratio(u1, d);
  return fold_estimate(aggregate, Estimator::Tan, kappa, mask_fraction);
}

StepEstimate estimate_step_sin(const ScalarField& u1, const ScalarField& u2) {
  const GSDecomposition d = gs_decompose(u1, u2);
  const ScalarField s = wrapped_phase(d).sin();
  const double ss = inner_product(s, s);
  if (ss == 0.0) {
    throw DegeneratePairError("estimate_step_sin: sin(phase) field is identically zero");
  }
  const double raw = -inner_product(d.u2_hat, s) / ss;
  const double kappa = compute_kappa_ratio(u1, d);
  return fold_estimate(raw, Estimator::Sin, kappa, /*mask_fraction=*/1.0);
}

ScalarField demodulate(const ScalarField& u1, const ScalarField& u2) {
  return wrapped_phase(gs_decompose(u1, u2));
}

}  // namespace fringestep

#include "fringestep/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fringestep {

namespace {

void require_same_shape(const ScalarField& f, const ScalarField& g, const char* op) {
  if (f.rows() != g.rows() || f.cols() != g.cols()) {
    throw std::invalid_argument(std::string(op) + ": field dimensions differ (" +
                                std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                                " vs " + std::to_string(g.rows()) + "x" +
                                std::to_string(g.cols()) + ")");
  }
}

}  // namespace

double inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_shape(f, g, "inner_product");
  // Eigen reduces in a fixed traversal order, so the result is reproducible
  // bit-for-bit within one build.
  return (f * g).sum();
}

double norm(const ScalarField& f) { return std::sqrt(inner_product(f, f)); }

ScalarField scale_add(const ScalarField& f, double alpha, const ScalarField& g, double beta) {
  require_same_shape(f, g, "scale_add");
  return alpha * f + beta * g;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) {
    throw std::invalid_argument("percentile: empty sample");
  }
  if (!(p >= 0.0 && p <= 100.0)) {
    throw std::invalid_argument("percentile: p must lie in [0, 100], got " + std::to_string(p));
  }
  std::sort(values.begin(), values.end());
  const double pos = (p / 100.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 == values.size()) {
    return values[lo];
  }
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median: empty sample");
  }
  return percentile(std::move(values), 50.0);
}

double mean(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("mean: empty sample");
  }
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

std::vector<double> masked_values(const ScalarField& f, const MaskField& mask) {
  if (f.rows() != mask.rows() || f.cols() != mask.cols()) {
    throw std::invalid_argument("masked_values: mask dimensions differ from field");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(f.size()));
  const double* fp = f.data();
  const bool* mp = mask.data();
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    if (mp[k]) out.push_back(fp[k]);
  }
  return out;
}

}  // namespace fringestep

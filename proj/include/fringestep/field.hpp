#pragma once

#include <Eigen/Core>

#include <vector>

namespace fringestep {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Dense real-valued image sample grid, treated throughout as a vector in an
// inner-product space.  Row 0 is the top image row; storage is row-major so
// data() walks the image in raster order.
using ScalarField = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-pixel boolean mask with the same layout as ScalarField.
using MaskField = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// --- inner-product-space primitives -----------------------------------------

// Unweighted pixel-sum dot product.  Throws std::invalid_argument on shape
// mismatch (a caller bug, not a data condition).
double inner_product(const ScalarField& f, const ScalarField& g);

// sqrt(inner_product(f, f)).
double norm(const ScalarField& f);

// Elementwise alpha*f + beta*g with shape checking.
ScalarField scale_add(const ScalarField& f, double alpha, const ScalarField& g, double beta);

// --- order statistics --------------------------------------------------------

// Linear-interpolation percentile of an unsorted sample, p in [0, 100].
// percentile(v, 50) equals median(v) exactly.  Throws on an empty sample or an
// out-of-range p.
double percentile(std::vector<double> values, double p);

// Median of an unsorted sample; for even sizes the midpoint of the two central
// order statistics.  Throws std::invalid_argument on an empty sample.
double median(std::vector<double> values);

// Arithmetic mean.  Throws std::invalid_argument on an empty sample.
double mean(const std::vector<double>& values);

// Values of f at mask==true pixels, in raster order.
std::vector<double> masked_values(const ScalarField& f, const MaskField& mask);

}  // namespace fringestep

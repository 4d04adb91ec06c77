#pragma once

#include "fringestep/field.hpp"

#include <stdexcept>
#include <string>

namespace fringestep {

// The two frames are numerically parallel or blank: no quadrature component
// can be extracted, so no step estimate exists.
class DegeneratePairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The valid-pixel mask for the ratio map kept fewer than 1% of the pixels.
class MaskStarvationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gram-Schmidt orthonormalization of a two-frame pair.  With u1 ~ b*cos(phi)
// and u2 ~ b*cos(phi + delta), the orthogonal residual u2_hat points along
// -b*sin(delta)*sin(phi), so (u1_tilde, u2_tilde) form an approximate
// cos/sin quadrature basis for the underlying phase.
struct GSDecomposition {
  ScalarField u1_tilde;  // u1 / ||u1||
  ScalarField u2_hat;    // u2 - proj_coeff * u1_tilde
  ScalarField u2_tilde;  // u2_hat / ||u2_hat||
  double proj_coeff = 0.0;  // <u2, u1_tilde>
};

enum class Estimator { Tan, Sin };
enum class Aggregator { Mean, Median };

const char* estimator_name(Estimator e);
Estimator parse_estimator(const std::string& name);
const char* aggregator_name(Aggregator a);
Aggregator parse_aggregator(const std::string& name);

// One step estimate plus diagnostics.
struct StepEstimate {
  double delta_hat = 0.0;  // radians, folded to [0, pi/2]
  int sign = +1;           // sign of the arcsin argument before folding
  Estimator estimator = Estimator::Tan;
  double kappa_ratio = 0.0;    // quadrature cross-correlation diagnostic
  double mask_fraction = 1.0;  // fraction of pixels used (ratio-map estimator)
};

// Ratio map m(x) = u1_tilde*u2_hat / (u1*u2_tilde) together with the mask of
// pixels where the denominator is considered reliable.
struct DeltaMap {
  ScalarField map;  // 0 outside the mask
  MaskField mask;
};

// Orthonormalizes (u1, u2).  Throws DegeneratePairError when u1 is blank or
// u2 is numerically parallel to u1 (residual norm <= 1e-12 * ||u2||).
GSDecomposition gs_decompose(const ScalarField& u1, const ScalarField& u2);

// Wrapped phase atan2(-u2_tilde, u1_tilde), values in (-pi, pi].  Pixels where
// both components are zero (undefined direction) are set to 0; their count is
// reported through undefined_count when non-null.
ScalarField wrapped_phase(const GSDecomposition& d, std::size_t* undefined_count = nullptr);

// Scalar diagnostic of the quadrature assumption <b*cos(phi), b*sin(phi)> ~ 0:
// |<c, s>| / <c, c> over per-pixel phase proxies c = u1_tilde/r, s = -u2_tilde/r
// with r = hypot(u1_tilde, u2_tilde).  The raw pair (u1, u2_hat) is orthogonal
// by construction and would report exactly 0, so the normalized proxies are
// used instead.  Small values (< 0.01 at the default fringe density) mean the
// cross term was negligible.
double compute_kappa_ratio(const ScalarField& u1, const GSDecomposition& d);

// Per-pixel ratio map whose robust aggregate estimates sin(delta).  Pixels
// whose denominator magnitude |u1 * u2_tilde| does not exceed the 10th
// percentile of its field-wide distribution are masked out (the denominator
// vanishes on fringe extrema).  Throws MaskStarvationError when fewer than 1%
// of pixels survive.
DeltaMap delta_map(const ScalarField& u1, const GSDecomposition& d);

// Step estimate from the aggregated ratio map:
//   delta_hat = |asin(clamp(aggregate m(x), -1, 1))|.
// Robust to spatial amplitude variation; does not need the wrapped phase.
StepEstimate estimate_step_tan(const ScalarField& u1, const ScalarField& u2,
                               Aggregator aggregator = Aggregator::Median);

// Closed-form least-squares estimate assuming unit amplitude:
//   delta_hat = |asin(clamp(-<u2_hat, sin(phi_hat)> / <sin(phi_hat), sin(phi_hat)>, -1, 1))|.
// Accurate for b ~ 1 inputs (flat pairs or pre-normalized fringes); biased
// when the amplitude varies across the frame.
StepEstimate estimate_step_sin(const ScalarField& u1, const ScalarField& u2);

// Convenience composition: wrapped_phase(gs_decompose(u1, u2)).
ScalarField demodulate(const ScalarField& u1, const ScalarField& u2);

}  // namespace fringestep

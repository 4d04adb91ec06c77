#pragma once

#include "fringestep/field.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace fringestep {

// Evaluation scenarios for the two-frame intensity model
//   i_k(x) = a(x) + b(x)*cos(phi(x) + delta_k) + eta_k(x),  delta_1 = 0, delta_2 = delta.
//
//   I   - flat pair: a = 0, b = 1 (pure cosine plus noise)
//   II  - variable amplitude: a = 0, b spatially varying
//   III - variable amplitude and background: both a and b spatially varying
enum class FringeCase { I, II, III };

const char* fringe_case_name(FringeCase c);
FringeCase parse_fringe_case(const std::string& name);

// Full recipe for one synthetic pair.
struct SynthSpec {
  int width = 256;
  int height = 256;
  FringeCase fringe_case = FringeCase::I;
  double delta = kPi / 3.0;    // phase step of the second frame, radians, in (0, pi]
  double sigma = 0.0;          // additive Gaussian noise standard deviation
  std::uint64_t seed = 1;      // master seed; per-frame noise streams derive from it
  double fringe_scale = 20.0;  // quadratic phase coefficient (fringe density)
};

// Ground truth carried alongside a synthetic pair.
struct FringeTruth {
  ScalarField phi;  // modulating phase
  ScalarField a;    // background
  ScalarField b;    // fringe amplitude
  double delta = 0.0;
};

// Two co-registered interferograms; truth is populated for synthetic pairs.
struct FringePair {
  ScalarField i1;
  ScalarField i2;
  std::optional<FringeTruth> truth;
};

// Normalized pixel coordinates: column c maps to x = -1 + 2c/(width-1), row r
// to y = -1 + 2r/(height-1); both endpoints inclusive, row 0 at the top.
ScalarField coord_x(int width, int height);
ScalarField coord_y(int width, int height);

// Smooth test phase producing closed fringes: a quadratic bowl with a linear
// carrier tilt plus an off-centre Gaussian bump,
//   phi = fringe_scale*(x^2 + y^2 + 2.02*x - 2.66*y) + 3*exp(-((x-0.3)^2 + (y+0.2)^2)/0.18).
// The carrier keeps the frame-wide norms of cos(phi) and sin(phi) closely
// balanced, which the step estimators rely on; a plain centred bowl leaves a
// percent-level imbalance that floors their accuracy.
ScalarField phase_function(int width, int height, double fringe_scale);

// Slowly varying additive background, a = 0.5*exp(-(x^2+y^2)/0.8), in (0, 0.5].
ScalarField background_function(int width, int height);

// Fringe modulation envelope, b = 0.2 + 0.8*exp(-(x^2+y^2)/1.2), in (0.2, 1.0].
ScalarField amplitude_function(int width, int height);

// Deterministic i.i.d. N(0, sigma^2) field drawn from stream_seed (Box-Muller
// over a 64-bit Mersenne Twister).  sigma = 0 returns the zero field without
// touching the generator.
ScalarField gaussian_noise(int width, int height, double sigma, std::uint64_t stream_seed);

// Generates the pair for spec, noise streams seeded per frame from spec.seed.
// Truth fields are always attached.  Throws std::invalid_argument on an
// invalid spec.
FringePair synthesize(const SynthSpec& spec);

// SplitMix64-based combiner for deriving independent seed streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace fringestep

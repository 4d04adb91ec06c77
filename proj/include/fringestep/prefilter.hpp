#pragma once

#include "fringestep/field.hpp"

#include <complex>
#include <string>

namespace fringestep {

// Frequency-domain workspace with the same layout as the originating field.
using ComplexField = Eigen::Array<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                                  Eigen::RowMajor>;
using Spectrum = ComplexField;

// Default high-pass cutoff (cycles/pixel) used by the normalizers to strip the
// background before quadrature processing.
inline constexpr double kDefaultBackgroundCutoff = 0.01;

// Gabor filter bank layout: n_orientations uniform over [0, pi) crossed with
// n_frequencies geometrically spaced centre frequencies in
// [freq_min, freq_max] cycles/pixel; each kernel is an oriented complex
// exponential under an isotropic Gaussian whose width follows from the octave
// bandwidth.
struct GfbParams {
  int n_orientations = 8;
  int n_frequencies = 5;
  double freq_min = 0.02;
  double freq_max = 0.25;
  double bandwidth = 1.0;  // Gaussian envelope octave bandwidth
};

// Standard 2D DFT, forward unnormalized, inverse scaled by 1/(width*height)
// so that dft2_inverse(dft2_forward(f)) == f to 1e-10.
Spectrum dft2_forward(const ScalarField& f);
ComplexField dft2_inverse(const Spectrum& s);

// High-pass filter: zeroes every spectral bin whose radial frequency is below
// cutoff (DC included).  A hard binary mask keeps the operator an exact
// spectral projection, so applying it twice equals applying it once.  Output
// spatial mean is ~0.
ScalarField remove_background(const ScalarField& i, double cutoff = kDefaultBackgroundCutoff);

// Raised-cosine border window, ramp width = round(border * side length) per
// axis, used before spectral processing to suppress wraparound ringing.
ScalarField raised_cosine_taper(const ScalarField& f, double border = 0.10);

// Isotropic fringe normalization: high-pass, spiral-phase (vortex) quadrature
//   q = IDFT(exp(i*atan2(fy, fx)) * DFT(h)),
// amplitude A = sqrt(h^2 + |q|^2), output h / max(A, 1e-3 * max A).  The
// result approximates cos(local phase) regardless of the input's background
// and contrast.  Throws std::invalid_argument on a constant input.
ScalarField isotropic_normalize(const ScalarField& i);

// Gabor filter bank normalization: high-pass, then per pixel keep the
// complex bank response of maximum magnitude and output its unit-modulus real
// part Re(g/|g|); pixels whose best response magnitude falls below
// 1e-6 * (global max response) are set to 0.
ScalarField gabor_filter_bank(const ScalarField& i, const GfbParams& p = GfbParams{});

// Pre-normalization selection for the evaluation pipeline.
enum class Prefilter { None, Isotropic, Gfb };

const char* prefilter_name(Prefilter p);
Prefilter parse_prefilter(const std::string& name);

// Applies the selected normalizer to one frame (None is the identity).
ScalarField apply_prefilter(const ScalarField& frame, Prefilter p);

}  // namespace fringestep

#include "fringestep/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fringestep {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Carrier tilt of the quadratic bowl; see phase_function docs.  The exact
// coefficients are tuned so that ||sin(phi)|| / ||cos(phi)|| lands at
// 1 + 2e-4 on the default 256x256 grid: just above one, which keeps the
// ratio-map median unbiased at the 1e-3 level and makes an exact-quadrature
// pair saturate the arcsin argument from above.
constexpr double kCarrierX = 2.02;
constexpr double kCarrierY = -2.66;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require_dims(int width, int height) {
  if (width < 2 || height < 2) {
    throw std::invalid_argument("field dimensions must be at least 2x2, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

const char* fringe_case_name(FringeCase c) {
  switch (c) {
    case FringeCase::I: return "I";
    case FringeCase::II: return "II";
    case FringeCase::III: return "III";
  }
  throw std::logic_error("fringe_case_name: bad enum value");
}

FringeCase parse_fringe_case(const std::string& name) {
  if (name == "I") return FringeCase::I;
  if (name == "II") return FringeCase::II;
  if (name == "III") return FringeCase::III;
  throw std::invalid_argument("unknown case '" + name + "' (expected I, II, or III)");
}

ScalarField coord_x(int width, int height) {
  require_dims(width, height);
  const Eigen::ArrayXd line = Eigen::ArrayXd::LinSpaced(width, -1.0, 1.0);
  ScalarField out(height, width);
  for (int r = 0; r < height; ++r) {
    out.row(r) = line.transpose();
  }
  return out;
}

ScalarField coord_y(int width, int height) {
  require_dims(width, height);
  const Eigen::ArrayXd line = Eigen::ArrayXd::LinSpaced(height, -1.0, 1.0);
  ScalarField out(height, width);
  for (int r = 0; r < height; ++r) {
    out.row(r) = ScalarField::Constant(1, width, line[r]);
  }
  return out;
}

ScalarField phase_function(int width, int height, double fringe_scale) {
  const ScalarField x = coord_x(width, height);
  const ScalarField y = coord_y(width, height);
  const ScalarField bowl = x.square() + y.square() + kCarrierX * x + kCarrierY * y;
  const ScalarField bump =
      3.0 * (-((x - 0.3).square() + (y + 0.2).square()) / 0.18).exp();
  return fringe_scale * bowl + bump;
}

ScalarField background_function(int width, int height) {
  const ScalarField x = coord_x(width, height);
  const ScalarField y = coord_y(width, height);
  return 0.5 * (-(x.square() + y.square()) / 0.8).exp();
}

ScalarField amplitude_function(int width, int height) {
  const ScalarField x = coord_x(width, height);
  const ScalarField y = coord_y(width, height);
  return 0.2 + 0.8 * (-(x.square() + y.square()) / 1.2).exp();
}

ScalarField gaussian_noise(int width, int height, double sigma, std::uint64_t stream_seed) {
  require_dims(width, height);
  if (sigma < 0.0) {
    throw std::invalid_argument("gaussian_noise: sigma must be non-negative");
  }
  ScalarField out(height, width);
  if (sigma == 0.0) {
    out.setZero();
    return out;
  }
  // Box-Muller over explicit 53-bit uniforms.  std::normal_distribution is
  // implementation-defined, so it is avoided to keep noise streams portable
  // across standard libraries.
  std::mt19937_64 eng(stream_seed);
  const auto uniform_01 = [&eng]() {
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  };
  double* p = out.data();
  const Eigen::Index n = out.size();
  for (Eigen::Index k = 0; k < n; k += 2) {
    const double u = uniform_01();
    const double v = uniform_01();
    const double r = std::sqrt(-2.0 * std::log(u));
    p[k] = sigma * r * std::cos(kTwoPi * v);
    if (k + 1 < n) {
      p[k + 1] = sigma * r * std::sin(kTwoPi * v);
    }
  }
  return out;
}

FringePair synthesize(const SynthSpec& spec) {
  require_dims(spec.width, spec.height);
  if (!(spec.delta > 0.0 && spec.delta <= kPi)) {
    throw std::invalid_argument("synthesize: delta must lie in (0, pi]");
  }
  if (spec.sigma < 0.0) {
    throw std::invalid_argument("synthesize: sigma must be non-negative");
  }
  if (!(spec.fringe_scale > 0.0)) {
    throw std::invalid_argument("synthesize: fringe_scale must be positive");
  }

  FringeTruth truth;
  truth.phi = phase_function(spec.width, spec.height, spec.fringe_scale);
  truth.delta = spec.delta;
  switch (spec.fringe_case) {
    case FringeCase::I:
      truth.a = ScalarField::Zero(spec.height, spec.width);
      truth.b = ScalarField::Ones(spec.height, spec.width);
      break;
    case FringeCase::II:
      truth.a = ScalarField::Zero(spec.height, spec.width);
      truth.b = amplitude_function(spec.width, spec.height);
      break;
    case FringeCase::III:
      truth.a = background_function(spec.width, spec.height);
      truth.b = amplitude_function(spec.width, spec.height);
      break;
  }

  FringePair pair;
  pair.i1 = truth.a + truth.b * truth.phi.cos();
  pair.i2 = truth.a + truth.b * (truth.phi + spec.delta).cos();
  if (spec.sigma > 0.0) {
    pair.i1 += gaussian_noise(spec.width, spec.height, spec.sigma, mix_seed(spec.seed, 1));
    pair.i2 += gaussian_noise(spec.width, spec.height, spec.sigma, mix_seed(spec.seed, 2));
  }
  pair.truth = std::move(truth);
  return pair;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // Run both words through SplitMix64 so that nearby (seed, index) pairs give
  // decorrelated streams.
  std::uint64_t state = a;
  const std::uint64_t h = splitmix64(state);
  state = h ^ (b + 0x9e3779b97f4a7c15ULL);
  return splitmix64(state);
}

}  // namespace fringestep

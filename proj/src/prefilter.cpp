#include "fringestep/prefilter.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fringestep {

namespace {

Eigen::FFT<double>& fft_engine() {
  // Plans are cached per transform length; thread_local keeps the cache safe
  // under parallel trial execution.
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// DFT sample frequency for bin k of an n-point axis, in cycles/sample:
// 0, 1/n, ..., then the negative half.
double bin_frequency(Eigen::Index k, Eigen::Index n) {
  const auto kk = static_cast<double>(k);
  const auto nn = static_cast<double>(n);
  return k < (n + 1) / 2 ? kk / nn : (kk - nn) / nn;
}

void require_dims(const ScalarField& f, const char* op) {
  if (f.rows() < 2 || f.cols() < 2) {
    throw std::invalid_argument(std::string(op) + ": field must be at least 2x2");
  }
}

// In-place 2D transform pass structure shared by forward and inverse.
template <typename Transform1D>
void transform_rows_then_cols(ComplexField& a, Transform1D&& pass) {
  const Eigen::Index h = a.rows();
  const Eigen::Index w = a.cols();
  std::vector<std::complex<double>> buf_in(static_cast<std::size_t>(std::max(w, h)));
  std::vector<std::complex<double>> buf_out(buf_in.size());
  // Rows are contiguous in row-major storage.
  for (Eigen::Index r = 0; r < h; ++r) {
    pass(buf_out.data(), a.data() + r * w, w);
    std::copy(buf_out.data(), buf_out.data() + w, a.data() + r * w);
  }
  for (Eigen::Index c = 0; c < w; ++c) {
    for (Eigen::Index r = 0; r < h; ++r) buf_in[static_cast<std::size_t>(r)] = a(r, c);
    pass(buf_out.data(), buf_in.data(), h);
    for (Eigen::Index r = 0; r < h; ++r) a(r, c) = buf_out[static_cast<std::size_t>(r)];
  }
}

ComplexField to_complex(const ScalarField& f) {
  ComplexField out(f.rows(), f.cols());
  const double* src = f.data();
  std::complex<double>* dst = out.data();
  for (Eigen::Index k = 0; k < f.size(); ++k) dst[k] = std::complex<double>(src[k], 0.0);
  return out;
}

}  // namespace

Spectrum dft2_forward(const ScalarField& f) {
  require_dims(f, "dft2_forward");
  ComplexField a = to_complex(f);
  auto& fft = fft_engine();
  transform_rows_then_cols(a, [&fft](std::complex<double>* dst, const std::complex<double>* src,
                                     Eigen::Index n) { fft.fwd(dst, src, n); });
  return a;
}

ComplexField dft2_inverse(const Spectrum& s) {
  if (s.rows() < 2 || s.cols() < 2) {
    throw std::invalid_argument("dft2_inverse: spectrum must be at least 2x2");
  }
  ComplexField a = s;
  auto& fft = fft_engine();
  // Each 1D inverse scales by 1/n, so the two passes give the 1/(W*H) total.
  transform_rows_then_cols(a, [&fft](std::complex<double>* dst, const std::complex<double>* src,
                                     Eigen::Index n) { fft.inv(dst, src, n); });
  return a;
}

ScalarField remove_background(const ScalarField& i, double cutoff) {
  require_dims(i, "remove_background");
  if (!(cutoff > 0.0 && cutoff < 0.5)) {
    throw std::invalid_argument("remove_background: cutoff must lie in (0, 0.5) cycles/pixel");
  }
  Spectrum s = dft2_forward(i);
  const double cut2 = cutoff * cutoff;
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    const double fy = bin_frequency(r, s.rows());
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      const double fx = bin_frequency(c, s.cols());
      if (fx * fx + fy * fy < cut2) s(r, c) = 0.0;
    }
  }
  return dft2_inverse(s).real();
}

ScalarField raised_cosine_taper(const ScalarField& f, double border) {
  require_dims(f, "raised_cosine_taper");
  if (!(border >= 0.0 && border <= 0.5)) {
    throw std::invalid_argument("raised_cosine_taper: border must lie in [0, 0.5]");
  }
  const auto ramp = [border](Eigen::Index n) {
    Eigen::ArrayXd w = Eigen::ArrayXd::Ones(n);
    const auto m = static_cast<Eigen::Index>(std::llround(border * static_cast<double>(n)));
    for (Eigen::Index k = 0; k < m; ++k) {
      const double t =
          0.5 * (1.0 - std::cos(kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(m)));
      w[k] = t;
      w[n - 1 - k] = t;
    }
    return w;
  };
  const Eigen::ArrayXd wy = ramp(f.rows());
  const Eigen::ArrayXd wx = ramp(f.cols());
  ScalarField out(f.rows(), f.cols());
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    out.row(r) = f.row(r) * wy[r] * wx.transpose();
  }
  return out;
}

ScalarField isotropic_normalize(const ScalarField& i) {
  require_dims(i, "isotropic_normalize");
  if (i.maxCoeff() == i.minCoeff()) {
    throw std::invalid_argument("isotropic_normalize: constant input has no fringes");
  }
  const ScalarField h = raised_cosine_taper(remove_background(i));

  // Spiral-phase (vortex) transform: multiply the spectrum by the unit phasor
  // of the frequency coordinate's polar angle.  The magnitude of the result
  // estimates the quadrature component |b*sin| regardless of orientation.
  Spectrum s = dft2_forward(h);
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    const double fy = bin_frequency(r, s.rows());
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      const double fx = bin_frequency(c, s.cols());
      if (fx == 0.0 && fy == 0.0) {
        s(r, c) = 0.0;  // the polar angle is undefined at DC
        continue;
      }
      const double theta = std::atan2(fy, fx);
      s(r, c) *= std::complex<double>(std::cos(theta), std::sin(theta));
    }
  }
  const ComplexField q = dft2_inverse(s);

  const ScalarField amplitude = (h.square() + q.abs2()).sqrt();
  const double floor = 1e-3 * amplitude.maxCoeff();
  return h / amplitude.cwiseMax(floor);
}

ScalarField gabor_filter_bank(const ScalarField& i, const GfbParams& p) {
  require_dims(i, "gabor_filter_bank");
  if (p.n_orientations < 2) {
    throw std::invalid_argument("gabor_filter_bank: need at least 2 orientations");
  }
  if (p.n_frequencies < 1) {
    throw std::invalid_argument("gabor_filter_bank: need at least 1 frequency");
  }
  if (!(p.freq_min > 0.0 && p.freq_min < p.freq_max && p.freq_max <= 0.5)) {
    throw std::invalid_argument(
        "gabor_filter_bank: frequencies must satisfy 0 < freq_min < freq_max <= 0.5");
  }
  if (!(p.bandwidth > 0.0)) {
    throw std::invalid_argument("gabor_filter_bank: bandwidth must be positive");
  }

  const ScalarField h = raised_cosine_taper(remove_background(i));
  const Spectrum base = dft2_forward(h);
  const Eigen::Index rows = base.rows();
  const Eigen::Index cols = base.cols();

  // Frequency-domain Gaussian width from the octave bandwidth: a filter of
  // bandwidth beta octaves has half-magnitude points at f0*2^(+-beta/2), which
  // pins sigma_f = f0 * (2^beta - 1) / ((2^beta + 1) * sqrt(2 ln 2)).
  const double two_b = std::pow(2.0, p.bandwidth);
  const double sigma_scale = (two_b - 1.0) / ((two_b + 1.0) * std::sqrt(2.0 * std::log(2.0)));

  std::vector<double> fy(static_cast<std::size_t>(rows));
  std::vector<double> fx(static_cast<std::size_t>(cols));
  for (Eigen::Index r = 0; r < rows; ++r) fy[static_cast<std::size_t>(r)] = bin_frequency(r, rows);
  for (Eigen::Index c = 0; c < cols; ++c) fx[static_cast<std::size_t>(c)] = bin_frequency(c, cols);

  ComplexField best = ComplexField::Zero(rows, cols);
  ScalarField best_mag2 = ScalarField::Zero(rows, cols);
  Spectrum filtered(rows, cols);

  for (int oi = 0; oi < p.n_orientations; ++oi) {
    const double theta = kPi * static_cast<double>(oi) / static_cast<double>(p.n_orientations);
    const double dx = std::cos(theta);
    const double dy = std::sin(theta);
    for (int fi = 0; fi < p.n_frequencies; ++fi) {
      const double ratio = p.freq_max / p.freq_min;
      const double f0 =
          p.n_frequencies == 1
              ? p.freq_min
              : p.freq_min * std::pow(ratio, static_cast<double>(fi) /
                                                 static_cast<double>(p.n_frequencies - 1));
      const double sigma_f = f0 * sigma_scale;
      const double inv_two_sigma2 = 1.0 / (2.0 * sigma_f * sigma_f);
      const double cx = f0 * dx;
      const double cy = f0 * dy;

      // One-sided transfer function (no mirrored lobe): the response stays
      // complex and carries the local phase.
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double dfy = fy[static_cast<std::size_t>(r)] - cy;
        for (Eigen::Index c = 0; c < cols; ++c) {
          const double dfx = fx[static_cast<std::size_t>(c)] - cx;
          const double gain = std::exp(-(dfx * dfx + dfy * dfy) * inv_two_sigma2);
          filtered(r, c) = base(r, c) * gain;
        }
      }
      const ComplexField response = dft2_inverse(filtered);

      const std::complex<double>* resp = response.data();
      std::complex<double>* bst = best.data();
      double* bm = best_mag2.data();
      for (Eigen::Index k = 0; k < response.size(); ++k) {
        const double m2 = std::norm(resp[k]);
        if (m2 > bm[k]) {
          bm[k] = m2;
          bst[k] = resp[k];
        }
      }
    }
  }

  const double peak = std::sqrt(best_mag2.maxCoeff());
  const double guard = 1e-6 * peak;
  ScalarField out(rows, cols);
  const std::complex<double>* bst = best.data();
  double* o = out.data();
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const double mag = std::abs(bst[k]);
    o[k] = mag < guard ? 0.0 : bst[k].real() / mag;
  }
  return out;
}

const char* prefilter_name(Prefilter p) {
  switch (p) {
    case Prefilter::None: return "none";
    case Prefilter::Isotropic: return "isotropic";
    case Prefilter::Gfb: return "gfb";
  }
  throw std::logic_error("prefilter_name: bad enum value");
}

Prefilter parse_prefilter(const std::string& name) {
  if (name == "none") return Prefilter::None;
  if (name == "isotropic") return Prefilter::Isotropic;
  if (name == "gfb") return Prefilter::Gfb;
  throw std::invalid_argument("unknown prefilter '" + name +
                              "' (expected none, isotropic, or gfb)");
}

ScalarField apply_prefilter(const ScalarField& frame, Prefilter p) {
  switch (p) {
    case Prefilter::None: return frame;
    case Prefilter::Isotropic: return isotropic_normalize(frame);
    case Prefilter::Gfb: return gabor_filter_bank(frame);
  }
  throw std::logic_error("apply_prefilter: bad enum value");
}

}  // namespace fringestep

#include "railmap/lockin.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "railmap/parallel.hpp"

namespace railmap::lockin {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

LockInResult lockin_demodulate(const FrameStack& fs, double ref_frequency_hz,
                               double ref_phase_rad) {
  if (ref_frequency_hz <= 0) fail(ErrorCategory::validation, "reference frequency must be positive");
  if (fs.fps <= 2.0 * ref_frequency_hz)
    fail(ErrorCategory::validation, "lock-in requires fps > 2x the reference frequency");

  const double frames_per_period = fs.fps / ref_frequency_hz;
  const double total_periods = fs.n_frames() / frames_per_period;
  const auto whole_periods = std::floor(total_periods + 1e-9);
  if (whole_periods < 4.0)
    fail(ErrorCategory::validation, "lock-in requires at least 4 whole modulation periods");
  const int n_used =
      std::min(fs.n_frames(), static_cast<int>(std::floor(whole_periods * frames_per_period + 1e-9)));

  const int w = fs.width;
  const int h = fs.height;
  LockInResult result;
  result.amplitude = Raster<double>(w, h, 0.0);
  result.phase_rad = Raster<double>(w, h, 0.0);
  result.ref_frequency_hz = ref_frequency_hz;
  result.n_frames_integrated = n_used;
  result.periods_integrated = n_used / frames_per_period;

  std::vector<double> ref_sin(n_used), ref_cos(n_used);
  for (int k = 0; k < n_used; ++k) {
    const double arg = kTwoPi * ref_frequency_hz * fs.frame_time(k) + ref_phase_rad;
    ref_sin[k] = std::sin(arg);
    ref_cos[k] = std::cos(arg);
  }

  // frame-outer accumulation streams each frame once per pass; the
  // per-pixel summation order stays k-ascending (results bit-identical to
  // the naive pixel-outer form)
  const std::int64_t n_px = static_cast<std::int64_t>(result.amplitude.size());
  parallel_for(n_px, [&](std::int64_t begin, std::int64_t end) {
    const std::size_t len = static_cast<std::size_t>(end - begin);
    std::vector<double> mean(len, 0.0), in_phase(len, 0.0), quadrature(len, 0.0);
    for (int k = 0; k < n_used; ++k) {
      const float* frame = fs.frames[k].data().data() + begin;
      for (std::size_t i = 0; i < len; ++i) mean[i] += frame[i];
    }
    for (std::size_t i = 0; i < len; ++i) mean[i] /= n_used;
    for (int k = 0; k < n_used; ++k) {
      const float* frame = fs.frames[k].data().data() + begin;
      const double rs = ref_sin[k];
      const double rc = ref_cos[k];
      for (std::size_t i = 0; i < len; ++i) {
        const double v = frame[i] - mean[i];
        in_phase[i] += v * rs;
        quadrature[i] += v * rc;
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      const double ip = in_phase[i] * 2.0 / n_used;
      const double q = quadrature[i] * 2.0 / n_used;
      const double amp = std::hypot(ip, q);
      result.amplitude.data()[begin + i] = amp;
      result.phase_rad.data()[begin + i] = amp > 0.0 ? std::atan2(q, ip) : 0.0;
    }
  });
  return result;
}

void BandFilterSpec::validate() const {
  if (!(bandwidth_hz > 0.0 && bandwidth_hz < center_frequency_hz))
    fail(ErrorCategory::validation, "band filter requires 0 < bandwidth < center frequency");
}

double eofm_point_filter(std::span<const double> samples, double fs_hz, const BandFilterSpec& band) {
  band.validate();
  if (fs_hz <= 2.0 * (band.center_frequency_hz + band.bandwidth_hz / 2.0))
    fail(ErrorCategory::validation, "sample rate violates Nyquist for the requested band");

  const std::size_t n = samples.size();
  const auto box_len = static_cast<std::size_t>(std::llround(2.0 * fs_hz / band.bandwidth_hz));
  const std::size_t warmup = 2 * box_len;
  if (n <= warmup + box_len)
    fail(ErrorCategory::validation, "record too short for the requested bandwidth");

  std::vector<std::complex<double>> z(n);
  const double w0 = kTwoPi * band.center_frequency_hz / fs_hz;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = w0 * static_cast<double>(k);
    z[k] = samples[k] * std::complex<double>(std::cos(a), -std::sin(a));
  }

  // two boxcar passes (moving averages) via prefix sums
  auto boxcar = [&](std::vector<std::complex<double>>& x) {
    std::vector<std::complex<double>> prefix(x.size() + 1, {0.0, 0.0});
    for (std::size_t k = 0; k < x.size(); ++k) prefix[k + 1] = prefix[k] + x[k];
    for (std::size_t k = 0; k < x.size(); ++k) {
      const std::size_t lo = k + 1 >= box_len ? k + 1 - box_len : 0;
      x[k] = (prefix[k + 1] - prefix[lo]) / static_cast<double>(k + 1 - lo);
    }
  };
  boxcar(z);
  boxcar(z);

  double acc = 0.0;
  for (std::size_t k = warmup; k < n; ++k) acc += std::abs(z[k]);
  // complex demodulation halves the in-band tone amplitude
  return 2.0 * acc / static_cast<double>(n - warmup);
}

double snr_gain(std::int64_t n_frames_a, std::int64_t n_frames_b) {
  if (n_frames_a < 1 || n_frames_b < 1)
    fail(ErrorCategory::validation, "snr_gain requires frame counts >= 1");
  return std::sqrt(static_cast<double>(n_frames_b) / static_cast<double>(n_frames_a));
}

}  // namespace railmap::lockin

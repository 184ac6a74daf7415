#pragma once

#include <cstdint>
#include <span>

#include "railmap/framestack.hpp"
#include "railmap/raster.hpp"

namespace railmap::lockin {

// Co-registered amplitude/phase maps from synchronous detection.
// Phase convention: 0 means the pixel oscillates as sin(2pi f t) in phase
// with the stimulus; amplitude is the peak of the sinusoidal component.
struct LockInResult {
  Raster<double> amplitude;
  Raster<double> phase_rad;  // (-pi, pi]
  double ref_frequency_hz = 0.0;
  int n_frames_integrated = 0;
  double periods_integrated = 0.0;
};

// Rectangular window over a whole number of periods (trailing partial
// period truncated); per-pixel mean removed before correlation.
// Requires fps > 2*f and at least 4 whole periods.
LockInResult lockin_demodulate(const FrameStack& fs, double ref_frequency_hz,
                               double ref_phase_rad = 0.0);

struct BandFilterSpec {
  double center_frequency_hz = 0.0;
  double bandwidth_hz = 0.0;

  void validate() const;  // 0 < bandwidth < center
};

// Narrow-band amplitude of a point waveform: complex demodulation at the
// center frequency, two cascaded boxcar low-passes with cutoff ~bw/2,
// magnitude averaged over the settled part of the record.
double eofm_point_filter(std::span<const double> samples, double fs_hz, const BandFilterSpec& band);

// Predicted amplitude-noise improvement from lock-in integration.
double snr_gain(std::int64_t n_frames_a, std::int64_t n_frames_b);

}  // namespace railmap::lockin

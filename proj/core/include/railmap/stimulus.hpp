#pragma once

#include <string>

#include "railmap/errors.hpp"

namespace railmap::stimulus {

enum class Waveform { square, sine };

const char* to_string(Waveform w) noexcept;
Waveform waveform_from_string(const std::string& s);

// Per-rail electrical modulation: square wave from a switchable PSU or a
// DC-offset sine as delivered through a bias-tee.
struct ModulationSpec {
  Waveform waveform = Waveform::square;
  double frequency_hz = 0.0;
  double amplitude_vpp = 0.0;
  double dc_offset_v = 0.0;
  double phase_rad = 0.0;

  void validate() const;
  double v_min() const noexcept { return dc_offset_v - amplitude_vpp / 2.0; }
  double v_max() const noexcept { return dc_offset_v + amplitude_vpp / 2.0; }
};

// Instantaneous supply voltage. Square: dc + (vpp/2)*sign(sin(2pi f t + phi))
// with sign(0) = +1 (50% duty). Sine: dc + (vpp/2)*sin(2pi f t + phi).
double sample_waveform(const ModulationSpec& spec, double t_s);

// Normalized instantaneous dissipation factor in [0, 1]. Square modulation
// switches the rail fully on/off: (v - v_min)/(v_max - v_min). Sine keeps
// the rail powered and scales quadratically: (v / v_max)^2. A constant
// spec (vpp = 0) dissipates steadily: factor 1.
double power_waveform(const ModulationSpec& spec, double t_s);

}  // namespace railmap::stimulus

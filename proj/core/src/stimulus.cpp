#include "railmap/stimulus.hpp"

#include <cmath>

namespace railmap::stimulus {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

const char* to_string(Waveform w) noexcept {
  return w == Waveform::square ? "square" : "sine";
}

Waveform waveform_from_string(const std::string& s) {
  if (s == "square") return Waveform::square;
  if (s == "sine") return Waveform::sine;
  fail(ErrorCategory::config, "unknown waveform '" + s + "' (expected \"square\" or \"sine\")");
}

void ModulationSpec::validate() const {
  if (frequency_hz <= 0) fail(ErrorCategory::validation, "modulation frequency_hz must be positive");
  if (amplitude_vpp < 0) fail(ErrorCategory::validation, "modulation amplitude_vpp must be >= 0");
  if (waveform == Waveform::sine && v_min() < 0)
    fail(ErrorCategory::validation,
         "sine modulation must not reverse the supply (dc_offset_v - amplitude_vpp/2 < 0)");
}

double sample_waveform(const ModulationSpec& spec, double t_s) {
  const double s = std::sin(kTwoPi * spec.frequency_hz * t_s + spec.phase_rad);
  if (spec.waveform == Waveform::sine) return spec.dc_offset_v + 0.5 * spec.amplitude_vpp * s;
  return spec.dc_offset_v + 0.5 * spec.amplitude_vpp * (s >= 0.0 ? 1.0 : -1.0);
}

double power_waveform(const ModulationSpec& spec, double t_s) {
  if (spec.amplitude_vpp == 0.0) {
    if (spec.dc_offset_v == 0.0)
      fail(ErrorCategory::numeric, "degenerate modulation spec: zero amplitude and zero offset");
    return 1.0;
  }
  const double v = sample_waveform(spec, t_s);
  if (spec.waveform == Waveform::square)
    return (v - spec.v_min()) / (spec.v_max() - spec.v_min());
  const double f = v / spec.v_max();
  return f * f;
}

}  // namespace railmap::stimulus

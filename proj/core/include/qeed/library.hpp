#pragma once

#include <set>
#include <string>
#include <vector>

#include "qeed/pulse.hpp"
#include "qeed/su2.hpp"

namespace qeed {

struct PulseLibraryEntry {
  std::string name;
  std::string variant;  // "printed" or "refined"
  std::string note;
  FourierPulseParams params;
  Axis gate_axis = Axis::X;
  double angle = 0.0;
  std::set<Axis> robust_axes;
  bool extended = false;

  Mat2 target() const { return rotation(gate_axis, angle); }
  ControlPulse pulse() const { return fourier_waveform(params); }
};

class PulseLibrary {
 public:
  // The library compiled into the binary.
  static const PulseLibrary& bundled();
  static PulseLibrary parse(const std::string& text, const std::string& source = "<library>");

  const std::vector<PulseLibraryEntry>& entries() const { return entries_; }
  std::vector<std::string> names() const;
  bool contains(const std::string& name) const;
  // Throws std::out_of_range for unknown names.
  const PulseLibraryEntry& at(const std::string& name) const;

 private:
  std::vector<PulseLibraryEntry> entries_;
};

}  // namespace qeed

#include "qeed/library.hpp"

#include <stdexcept>
#include <string_view>

#include "json.hpp"
#include "qeed/pulse_io.hpp"

namespace qeed {

namespace detail {
extern const std::string_view kBundledLibraryJson;
}

const PulseLibrary& PulseLibrary::bundled() {
  static const PulseLibrary lib = parse(std::string(detail::kBundledLibraryJson), "pulse_library.json");
  return lib;
}

PulseLibrary PulseLibrary::parse(const std::string& text, const std::string& source) {
  const nlohmann::json j = nlohmann::json::parse(text);
  PulseLibrary lib;
  for (const auto& e : j.at("entries")) {
    PulseLibraryEntry entry;
    entry.name = e.at("name").get<std::string>();
    if (lib.contains(entry.name)) throw std::invalid_argument(source + ": duplicate entry '" + entry.name + "'");
    entry.variant = e.value("variant", "printed");
    entry.note = e.value("note", "");
    entry.params = params_from_json(e.at("pulse"), source + ":" + entry.name, text);
    const auto& gate = e.at("gate");
    entry.gate_axis = parse_axis(gate.at("axis").get<std::string>().at(0));
    entry.angle = gate.at("angle").get<double>();
    for (const auto& a : e.at("robust_axes")) entry.robust_axes.insert(parse_axis(a.get<std::string>().at(0)));
    entry.extended = e.value("extended", false);
    lib.entries_.push_back(std::move(entry));
  }
  return lib;
}

std::vector<std::string> PulseLibrary::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.name);
  return out;
}

bool PulseLibrary::contains(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return true;
  }
  return false;
}

const PulseLibraryEntry& PulseLibrary::at(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no pulse named '" + name + "' in the library");
}

}  // namespace qeed

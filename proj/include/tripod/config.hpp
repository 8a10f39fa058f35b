#pragma once

#include "tripod/model.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tripod {

// Scenario files are flat `key = value` text with `#` comments. Times of the
// optical pulses are in 1/Gamma, amplitudes and detunings in Gamma, phases in
// radians. The magnetic stage is given either in laboratory units
// (magnetic.b_tesla, magnetic.t_start_us, magnetic.duration_us) or internal
// ones (magnetic.b_au, magnetic.t_start, magnetic.duration).
Scenario parse_config(std::string_view text);
Scenario load_config(const std::string& path);

// Text that parse_config maps back to an equal Scenario.
std::string render_config(const Scenario& scenario);

// Ordered key/value pairs of render_config, values as written.
std::vector<std::pair<std::string, std::string>> config_entries(const Scenario& scenario);

// Help text listing every key with its default.
std::string config_reference();

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

} // namespace tripod

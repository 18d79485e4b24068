#pragma once

#include "oreach/breach.hpp"
#include "oreach/sas.hpp"
#include "oreach/vocab.hpp"

#include <string>

namespace oreach {

// Machine-readable verdict. Field order is fixed (status, iterations, trace,
// witness); output is UTF-8 and newline-terminated, and identical runs
// produce identical bytes.
std::string render_report(const verdict& vd, const artifact_system& s, const vocab& v);

std::string render_inconclusive(std::uint32_t iterations);

} // namespace oreach

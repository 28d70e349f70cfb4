// Static, self-contained SVG figures.

#ifndef FDBOOT_SVG_HPP
#define FDBOOT_SVG_HPP

#include "fdboot/boot.hpp"
#include "fdboot/sim.hpp"

#include <string>

namespace fdboot {

/// Empirical against nominal coverage, one line per (configuration, method),
/// with the diagonal as reference.
std::string coverage_svg(const CoverageTable& table, const std::string& title);

/// Sample curves (thin grey), estimate (solid black), single band (solid red)
/// and double band (dotted blue) when present.
std::string band_svg(const FunctionalSample& sample, const BandSet& bands, const std::string& title);

}  // namespace fdboot

#endif  // FDBOOT_SVG_HPP

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "altproj/fracpow.hpp"
#include "altproj/geometry.hpp"
#include "altproj/spectral.hpp"

namespace altproj {

void write_geometry_csv(std::ostream& out, const GeometryReport& r);
void write_trace_csv(std::ostream& out, const IterationTrace& trace);
void write_boundary_csv(std::ostream& out, const ContainmentReport& report);
void write_decay_csv(std::ostream& out, const std::vector<DecayReport>& reports);
void write_ritt_csv(std::ostream& out, const RittPowerProfile& power,
                    const std::vector<ResolventSample>& resolvent);

/// Writes content to path through a sibling temp file and rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace altproj

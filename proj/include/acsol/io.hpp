#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "acsol/radial_ode.hpp"
#include "acsol/soliton.hpp"
#include "acsol/verify.hpp"

namespace acsol {

using Json = nlohmann::ordered_json;

// Tensors: nested row-major arrays; on grids an outer array over points
// (axis 0 slowest).  Scalars: a number, or an array of numbers on grids.
Json tensor_to_json(const TensorField& t);
TensorField tensor_from_json(const Json& j, const DomainPtr& domain, int up, int down);

// {"catalog": "..."}, {"dim", "grid", "metric"} or {"dim", "grid", "samples"}.
Json link_to_json(const LinkManifold& link);
LinkManifold link_from_json(const Json& j);
// A path to a JSON link file, or a catalog string.
LinkManifold load_link(const std::string& arg);

Json coefficients_to_json(const ExpansionCoefficients& c);
ExpansionCoefficients coefficients_from_json(const Json& j);

Json state_to_json(const RadialState& s, const LinkManifold& link, SolitonMode mode);
RadialState state_from_json(const Json& j, const LinkManifold& link);

Json residual_to_json(const Residual& r);
Json diagnostics_to_json(const DiagnosticsReport& d);
Json decay_to_json(const DecayFit& fit);

// Canonical text form: two-space indent, trailing newline.
std::string dump(const Json& j);
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Shortest round-trip decimal ('.' separator, "nan"/"inf" for non-finite).
std::string format_double(double v);

void write_decay_csv(std::ostream& os, const DecayFit& fit);
void write_trajectory_csv(std::ostream& os, const TrajectoryMonitor& m);

}  // namespace acsol

#pragma once
/**
 * @file reports.hpp
 * @brief JSON serialization of pipeline reports for the command-line tool.
 */

#include <json.hpp>

#include "specular/block.hpp"
#include "specular/measure.hpp"
#include "specular/mirror.hpp"
#include "specular/tracer.hpp"
#include "specular/urchin.hpp"

namespace specular::cli {

using Json = nlohmann::ordered_json;

/// Version, tolerances and the recorded command line shared by every report.
Json report_header(const std::string& command, const std::vector<std::string>& argv);

Json to_json(Point p);
Json to_json(const Segment& s);
Json to_json(const DirectedLine& l);
Json to_json(const IntervalSet& s);
Json to_json(const BlockReport& r);
Json to_json(const BlockSearchStep& s);
Json to_json(const UrchinParams& p);
Json to_json(const BundleLedger& b);
Json to_json(const Theorem1Report& r);
Json to_json(const RayPath& p);
Json to_json(const MirrorStage& s);
Json to_json(const MirrorPartOne& p);
Json to_json(const MirrorReport& r);

}  // namespace specular::cli

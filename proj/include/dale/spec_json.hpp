#pragma once

#include <json.hpp>

#include "dale/synthesis.hpp"

namespace dale {

// Sample spec file layout:
//   {"mode": "superpixel", "seed": 42,
//    "weights": [[region, L], ...],
//    "regions": {"kind": "labels", "height": H, "width": W, "runs": [[id, length], ...]}
//             | {"kind": "quadtree", "leaves": [{"id", "top", "left", "height", "width"}, ...]}
//             | {"kind": "frame", "height": H, "width": W},
//    "window": {"top", "left", "height", "width"}}          // patches only
nlohmann::json spec_to_json(const IlluminationSpec& spec);
IlluminationSpec spec_from_json(const nlohmann::json& j);

}  // namespace dale

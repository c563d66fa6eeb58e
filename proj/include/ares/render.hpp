#pragma once

#include <string>
#include <vector>

#include "ares/flock.hpp"
#include "ares/mdp.hpp"

namespace ares {

/// States at the start of the plan and after each committed level.
std::vector<FlockConfig> key_frames(const Plan<FlockConfig>& plan, const FlockParams& params);

/// One frame as a standalone SVG: wing segments, positions, and velocity
/// arrows, framed around the flock.
std::string render_svg(const FlockConfig& frame, const FlockParams& params, const std::string& title);

/// Writes frame_000.svg, frame_001.svg, ... into `directory` (created if
/// missing) and returns the paths written.
std::vector<std::string> render_plan(const Plan<FlockConfig>& plan, const FlockParams& params,
                                     const std::string& directory);

}  // namespace ares

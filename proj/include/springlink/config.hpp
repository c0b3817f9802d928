// Run configuration: JSON documents describing a mechanism, its spring and
// the analysis settings. Angles are radians throughout.
//
//   {
//     "mechanism":  {"kind": "slider-crank", "a": 1, "b": 6, "units": "dimensionless"},
//     "attachment": {"l_ext": 6, "beta": 1.5707963267948966},
//     "spring":     {"mode": "auto-size"},
//     "load":       {"mode": "constant", "P": 1},
//     "analysis":   {"direction": "cw", "samples": 3600, "T_load_fraction": 0.4,
//                    "threshold": 0.4}
//   }
//
// See README.md for every key.
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "springlink/torque.hpp"

namespace springlink {

enum class Units { Dimensionless, MillimetreNewton };
enum class SpringMode { AutoSize, Explicit, None };

struct RunConfig {
    FourBarGeometry geometry;
    Branch branch = Branch::Open;
    Units units = Units::Dimensionless;
    CouplerAttachment attachment;
    SpringMode spring_mode = SpringMode::AutoSize;
    SpringOverrides overrides;
    InputLoad load;
    Direction direction = Direction::CW;
    std::size_t samples = 3600;
    double load_fraction = 0.4;
    double threshold = 0.40;
    double clearance = 0.05;  ///< length, in the config's units
    RatioBaseline baseline = RatioBaseline::KinematicMax;
    std::optional<double> crank_pin_radius;
};

/// Validates and fills defaults. Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

PipelineInput to_pipeline_input(const RunConfig& config);

Direction parse_direction(const std::string& text);
std::string to_string(Direction direction);

}  // namespace springlink

// Prediction for a spring-actuated slider-crank test rig, and comparison
// against a measured torque series.
#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <utility>
#include <vector>

#include "springlink/config.hpp"

namespace springlink {

/// Measured (crank angle [deg], torque) rows. Blank lines split passes;
/// angles increase strictly within a pass.
struct MeasuredSeries {
    std::vector<std::vector<std::pair<double, double>>> passes;

    std::size_t size() const;
};

MeasuredSeries parse_measured_series(std::istream& in);
MeasuredSeries read_measured_series(const std::filesystem::path& path);

struct Comparison {
    std::size_t compared = 0;    ///< model grid points covered by a pass
    double rms_difference = 0.0;
    double mean_offset = 0.0;    ///< mean of measured - model
};

/// Interpolates the measured series linearly onto the model grid.
Comparison compare_measured(const TorqueProfile& model, const MeasuredSeries& measured);

/// Runs the design procedure for a spring-actuated slider-crank config.
PipelineResult predict_prototype(const RunConfig& config);

}  // namespace springlink

#include "springlink/prototype.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "springlink/csv_io.hpp"

namespace springlink {

std::size_t MeasuredSeries::size() const {
    std::size_t n = 0;
    for (const auto& pass : passes) n += pass.size();
    return n;
}

MeasuredSeries parse_measured_series(std::istream& in) {
    MeasuredSeries series;
    std::vector<std::pair<double, double>> pass;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    auto close_pass = [&] {
        if (!pass.empty()) series.passes.push_back(std::move(pass));
        pass.clear();
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) {
            close_pass();
            continue;
        }
        if (line[first] == '#') continue;
        for (char& ch : line) {
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        }
        // A leading row with letters is a header.
        if (!seen_data && std::isalpha(static_cast<unsigned char>(line[first])) &&
            line.compare(first, 3, "inf") != 0 && line.compare(first, 3, "nan") != 0) {
            continue;
        }
        std::istringstream fields(line);
        std::string angle_text;
        std::string torque_text;
        std::string extra;
        if (!(fields >> angle_text >> torque_text) || (fields >> extra)) {
            throw DataError("measured data line " + std::to_string(line_no) +
                            ": expected two columns");
        }
        double angle = 0.0;
        double torque = 0.0;
        try {
            angle = io::parse_number(angle_text);
            torque = io::parse_number(torque_text);
        } catch (const DataError&) {
            throw DataError("measured data line " + std::to_string(line_no) + ": not numeric");
        }
        if (!std::isfinite(angle) || !std::isfinite(torque)) {
            throw DataError("measured data line " + std::to_string(line_no) + ": non-finite value");
        }
        if (!pass.empty() && !(angle > pass.back().first)) {
            throw DataError("measured data line " + std::to_string(line_no) +
                            ": angles must increase strictly within a pass");
        }
        pass.emplace_back(angle, torque);
        seen_data = true;
    }
    close_pass();
    if (series.passes.empty()) throw DataError("measured data holds no rows");
    return series;
}

MeasuredSeries read_measured_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open measured data " + path.string());
    return parse_measured_series(in);
}

Comparison compare_measured(const TorqueProfile& model, const MeasuredSeries& measured) {
    Comparison out;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < model.theta.size(); ++i) {
        const double angle = model.theta[i] * 180.0 / kPi;
        for (const auto& pass : measured.passes) {
            if (pass.empty() || angle < pass.front().first || angle > pass.back().first) continue;
            auto hi = pass.begin();
            while (hi->first < angle) ++hi;
            double value = hi->second;
            if (hi->first != angle) {
                const auto lo = hi - 1;
                const double t = (angle - lo->first) / (hi->first - lo->first);
                value = lo->second + t * (hi->second - lo->second);
            }
            const double diff = value - model.total[i];
            sum += diff;
            sum_sq += diff * diff;
            ++out.compared;
            break;
        }
    }
    if (out.compared == 0) throw DataError("measured data does not overlap the model grid");
    const auto n = static_cast<double>(out.compared);
    out.mean_offset = sum / n;
    out.rms_difference = std::sqrt(sum_sq / n);
    return out;
}

PipelineResult predict_prototype(const RunConfig& config) {
    if (config.geometry.kind != MechanismKind::SliderCrank ||
        config.load.mode != LoadMode::SpringActuated) {
        throw ConfigError("prototype: needs a slider-crank with a spring-actuated load");
    }
    return design_pipeline(to_pipeline_input(config));
}

}  // namespace springlink

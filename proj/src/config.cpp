#include "springlink/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace springlink {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
    throw ConfigError(path + ": " + reason);
}

const json& require_object(const json& doc, const std::string& path) {
    if (!doc.is_object()) fail(path, "expected an object");
    return doc;
}

void reject_unknown(const json& block, const std::string& path,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : block.items()) {
        bool found = false;
        for (const char* k : known) found = found || key == k;
        if (!found) fail(path + "." + key, "unknown field");
    }
}

std::optional<double> number(const json& block, const std::string& path, const char* key) {
    if (!block.contains(key)) return std::nullopt;
    const auto& v = block.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path + "." + key, "must be finite");
    return x;
}

double required_number(const json& block, const std::string& path, const char* key) {
    auto v = number(block, path, key);
    if (!v) fail(path + "." + key, "missing required field");
    return *v;
}

std::optional<std::string> text(const json& block, const std::string& path, const char* key) {
    if (!block.contains(key)) return std::nullopt;
    const auto& v = block.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

double positive(double v, const std::string& path) {
    if (!(v > 0.0)) fail(path, "must be positive");
    return v;
}

}  // namespace

Direction parse_direction(const std::string& t) {
    if (t == "cw" || t == "CW") return Direction::CW;
    if (t == "ccw" || t == "CCW") return Direction::CCW;
    throw ConfigError("direction: expected 'cw' or 'ccw', got '" + t + "'");
}

std::string to_string(Direction direction) { return direction == Direction::CW ? "cw" : "ccw"; }

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    require_object(doc, "config");
    reject_unknown(doc, "config", {"mechanism", "attachment", "spring", "load", "analysis",
                                   "prototype", "description"});
    RunConfig cfg;

    // mechanism
    if (!doc.contains("mechanism")) fail("mechanism", "missing required block");
    const auto& mech = require_object(doc.at("mechanism"), "mechanism");
    reject_unknown(mech, "mechanism", {"kind", "a", "b", "c", "d", "units", "branch"});
    const auto kind = text(mech, "mechanism", "kind");
    if (!kind) fail("mechanism.kind", "missing required field");
    const auto units = text(mech, "mechanism", "units").value_or("dimensionless");
    if (units == "dimensionless") {
        cfg.units = Units::Dimensionless;
    } else if (units == "mm-N") {
        cfg.units = Units::MillimetreNewton;
    } else {
        fail("mechanism.units", "expected 'dimensionless' or 'mm-N'");
    }
    const bool dimensionless = cfg.units == Units::Dimensionless;
    const double a = positive(dimensionless ? number(mech, "mechanism", "a").value_or(1.0)
                                            : required_number(mech, "mechanism", "a"),
                              "mechanism.a");
    // Dimensionless runs normalize every length by the crank.
    const double scale = dimensionless ? 1.0 / a : 1.0;
    const double b = positive(required_number(mech, "mechanism", "b"), "mechanism.b");
    if (*kind == "slider-crank") {
        if (mech.contains("c")) fail("mechanism.c", "not used by a slider-crank");
        if (mech.contains("d")) fail("mechanism.d", "not used by a slider-crank");
        cfg.geometry = FourBarGeometry::slider_crank(a * scale, b * scale);
    } else if (*kind == "rocker-crank") {
        const double c = positive(required_number(mech, "mechanism", "c"), "mechanism.c");
        const double d = positive(required_number(mech, "mechanism", "d"), "mechanism.d");
        cfg.geometry = FourBarGeometry::rocker_crank(a * scale, b * scale, c * scale, d * scale);
    } else {
        fail("mechanism.kind", "expected 'slider-crank' or 'rocker-crank'");
    }
    const auto branch = text(mech, "mechanism", "branch").value_or("open");
    if (branch == "open") {
        cfg.branch = Branch::Open;
    } else if (branch == "crossed") {
        cfg.branch = Branch::Crossed;
    } else {
        fail("mechanism.branch", "expected 'open' or 'crossed'");
    }

    // attachment
    if (!doc.contains("attachment")) fail("attachment", "missing required block");
    const auto& att = require_object(doc.at("attachment"), "attachment");
    reject_unknown(att, "attachment", {"l_ext", "beta"});
    const double l_ext = required_number(att, "attachment", "l_ext");
    if (l_ext < 0.0) fail("attachment.l_ext", "must be non-negative");
    const double beta = required_number(att, "attachment", "beta");
    if (beta < 0.0 || beta >= kTwoPi) fail("attachment.beta", "must lie in [0, 2*pi)");
    cfg.attachment = CouplerAttachment::make(l_ext * scale, beta);

    // load
    const json empty = json::object();
    const auto& load = require_object(doc.contains("load") ? doc.at("load") : empty, "load");
    reject_unknown(load, "load", {"mode", "P", "k_a", "pretension"});
    const auto load_mode = text(load, "load", "mode").value_or("constant");
    if (load_mode == "constant") {
        if (load.contains("k_a") || load.contains("pretension")) {
            fail("load", "k_a and pretension belong to mode 'spring-actuated'");
        }
        std::optional<double> p = number(load, "load", "P");
        if (dimensionless) {
            if (p && *p != 1.0) fail("load.P", "dimensionless runs use P = 1");
            p = 1.0;
        } else if (!p) {
            fail("load.P", "missing required field");
        }
        cfg.load = InputLoad::constant(positive(*p, "load.P"));
    } else if (load_mode == "spring-actuated") {
        if (dimensionless) fail("load.mode", "spring-actuated input needs units 'mm-N'");
        if (cfg.geometry.kind != MechanismKind::SliderCrank) {
            fail("load.mode", "spring-actuated input requires a slider-crank");
        }
        if (load.contains("P")) fail("load.P", "not used by mode 'spring-actuated'");
        const double k_a = positive(required_number(load, "load", "k_a"), "load.k_a");
        const double pre = required_number(load, "load", "pretension");
        if (pre < 0.0) fail("load.pretension", "must be non-negative");
        cfg.load = InputLoad::spring_actuated(k_a, pre);
    } else {
        fail("load.mode", "expected 'constant' or 'spring-actuated'");
    }

    // spring
    const auto& spring =
        require_object(doc.contains("spring") ? doc.at("spring") : empty, "spring");
    reject_unknown(spring, "spring", {"mode", "K_s", "l0", "grounding"});
    const auto spring_mode = text(spring, "spring", "mode").value_or("auto-size");
    if (spring_mode == "auto-size") {
        cfg.spring_mode = SpringMode::AutoSize;
        for (const char* key : {"K_s", "l0", "grounding"}) {
            if (spring.contains(key)) fail(std::string("spring.") + key, "only used in mode 'explicit'");
        }
    } else if (spring_mode == "none") {
        cfg.spring_mode = SpringMode::None;
        cfg.overrides.stiffness = 0.0;
    } else if (spring_mode == "explicit") {
        cfg.spring_mode = SpringMode::Explicit;
        const double k = required_number(spring, "spring", "K_s");
        if (k < 0.0) fail("spring.K_s", "must be non-negative");
        const double l0 = required_number(spring, "spring", "l0");
        if (l0 < 0.0) fail("spring.l0", "must be non-negative");
        // Stiffness is [F/L]; normalizing lengths by a rescales it by a.
        cfg.overrides.stiffness = k / scale;
        cfg.overrides.relaxed_length = l0 * scale;
        if (!spring.contains("grounding")) fail("spring.grounding", "missing required field");
        const auto& g = spring.at("grounding");
        if (g.is_string() && g.get<std::string>() == "placement") {
            // anchor from the placement rule
        } else if (g.is_array() && g.size() == 2 && g[0].is_number() && g[1].is_number()) {
            cfg.overrides.grounding = Vec2{g[0].get<double>() * scale, g[1].get<double>() * scale};
        } else {
            fail("spring.grounding", "expected [x, y] or \"placement\"");
        }
    } else {
        fail("spring.mode", "expected 'auto-size', 'explicit' or 'none'");
    }

    // analysis
    const auto& an =
        require_object(doc.contains("analysis") ? doc.at("analysis") : empty, "analysis");
    reject_unknown(an, "analysis", {"direction", "samples", "T_load_fraction", "threshold",
                                    "clearance", "ratio_baseline"});
    if (auto d = text(an, "analysis", "direction")) {
        try {
            cfg.direction = parse_direction(*d);
        } catch (const ConfigError&) {
            fail("analysis.direction", "expected 'cw' or 'ccw'");
        }
    }
    if (auto n = number(an, "analysis", "samples")) {
        if (*n < 16 || *n != std::floor(*n)) fail("analysis.samples", "must be an integer >= 16");
        cfg.samples = static_cast<std::size_t>(*n);
    }
    cfg.load_fraction = number(an, "analysis", "T_load_fraction").value_or(0.4);
    if (!(cfg.load_fraction > 0.0 && cfg.load_fraction < 1.0)) {
        fail("analysis.T_load_fraction", "must lie in (0, 1)");
    }
    cfg.threshold = number(an, "analysis", "threshold").value_or(0.40);
    cfg.clearance = number(an, "analysis", "clearance").value_or(kDefaultClearanceFraction * a) *
                    scale;
    if (!(cfg.clearance > 0.0)) fail("analysis.clearance", "must be positive");
    const auto baseline = text(an, "analysis", "ratio_baseline").value_or("kinematic");
    if (baseline == "kinematic") {
        cfg.baseline = RatioBaseline::KinematicMax;
    } else if (baseline == "total") {
        cfg.baseline = RatioBaseline::TotalMax;
    } else {
        fail("analysis.ratio_baseline", "expected 'kinematic' or 'total'");
    }

    if (doc.contains("prototype")) {
        const auto& proto = require_object(doc.at("prototype"), "prototype");
        reject_unknown(proto, "prototype", {"crank_pin_radius"});
        if (auto r = number(proto, "prototype", "crank_pin_radius")) {
            cfg.crank_pin_radius = positive(*r, "prototype.crank_pin_radius") * scale;
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

PipelineInput to_pipeline_input(const RunConfig& cfg) {
    PipelineInput in;
    in.geometry = cfg.geometry;
    in.attachment = cfg.attachment;
    in.branch = cfg.branch;
    in.load = cfg.load;
    in.load_fraction = cfg.load_fraction;
    in.direction = cfg.direction;
    in.samples = cfg.samples;
    in.clearance = cfg.clearance;
    in.overrides = cfg.overrides;
    in.baseline = cfg.baseline;
    return in;
}

}  // namespace springlink

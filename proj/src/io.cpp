#include "pan/io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "pan/errors.hpp"

namespace pan {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void dump_field_json(const PoissonField& field, const std::string& path) {
    nlohmann::json j;
    j["window"] = {{"lo", {field.window.lo.x, field.window.lo.y, field.window.lo.z}},
                   {"hi", {field.window.hi.x, field.window.hi.y, field.window.hi.z}}};
    j["intensity"] = field.intensity;
    j["seed"] = field.seed;
    nlohmann::json pts = nlohmann::json::array();
    for (const Vec3& p : field.points) pts.push_back({p.x, p.y, p.z});
    j["points"] = pts;
    std::ofstream out(path);
    if (!out) throw domain_error("dump_field_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

PoissonField load_field_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("load_field_json: cannot open " + path);
    nlohmann::json j;
    in >> j;
    PoissonField f;
    auto lo = j.at("window").at("lo");
    auto hi = j.at("window").at("hi");
    f.window = {{lo.at(0), lo.at(1), lo.at(2)}, {hi.at(0), hi.at(1), hi.at(2)}};
    f.intensity = j.at("intensity");
    f.seed = j.at("seed");
    for (const auto& p : j.at("points")) f.points.push_back({p.at(0), p.at(1), p.at(2)});
    return f;
}

} // namespace pan

#pragma once

// JSON forms:
//   body           {"n": 2, "vertices": [[0,0],[1,0],[0,1]]}  or  {"box": {"lo": [...], "hi": [...]}}
//   hyperplane     {"normal": [...], "offset": c}
//   step function  {"n": 2, "pieces": [{"weight": 1.5, "region": <body>}, ...]}
//   points         [[x_1, ..., x_n], ...]

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lapval/errors.hpp"
#include "lapval/functrans.hpp"
#include "lapval/geom.hpp"

namespace lapval {

using Json = nlohmann::json;

inline Vector vector_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError("expected a number");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

inline Json vector_to_json(const Vector& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

inline Json matrix_to_json(const Matrix& m) {
    Json j = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) j.push_back(vector_to_json(m.row(r).transpose()));
    return j;
}

inline Polytope body_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("body: expected an object");
    if (j.contains("box")) {
        const Json& b = j["box"];
        if (!b.is_object() || !b.contains("lo") || !b.contains("hi")) throw ParseError("body: box needs lo and hi");
        const Vector lo = vector_from_json(b["lo"]), hi = vector_from_json(b["hi"]);
        if (lo.size() != hi.size()) throw ParseError("body: box bounds differ in length");
        if (j.contains("n") && j["n"] != lo.size()) throw ParseError("body: n does not match box bounds");
        return Polytope::box(lo, hi);
    }
    if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
        throw ParseError("body: needs a nonempty 'vertices' array or a 'box'");
    std::vector<Vector> pts;
    for (const auto& v : j["vertices"]) pts.push_back(vector_from_json(v));
    const auto n = pts.front().size();
    for (const auto& p : pts)
        if (p.size() != n) throw ParseError("body: vertices differ in length");
    if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<long>() != n))
        throw ParseError("body: n does not match vertex length");
    return Polytope::from_points(std::move(pts));
}

inline Json body_to_json(const Polytope& p) {
    Json j;
    j["n"] = p.ambient_dim();
    if (p.box_tag()) {
        j["box"] = {{"lo", vector_to_json(p.box_tag()->lo)}, {"hi", vector_to_json(p.box_tag()->hi)}};
        return j;
    }
    Json verts = Json::array();
    for (const auto& v : p.vertices()) verts.push_back(vector_to_json(v));
    j["vertices"] = std::move(verts);
    return j;
}

inline Hyperplane hyperplane_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("normal") || !j.contains("offset") || !j["offset"].is_number())
        throw ParseError("hyperplane: needs 'normal' and numeric 'offset'");
    return Hyperplane(vector_from_json(j["normal"]), j["offset"].get<double>());
}

inline StepFunction step_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer() || !j.contains("pieces") ||
        !j["pieces"].is_array())
        throw ParseError("step function: needs integer 'n' and a 'pieces' array");
    StepFunction f(j["n"].get<int>());
    for (const auto& piece : j["pieces"]) {
        if (!piece.is_object() || !piece.contains("weight") || !piece["weight"].is_number() || !piece.contains("region"))
            throw ParseError("step function: each piece needs numeric 'weight' and 'region'");
        Polytope region = body_from_json(piece["region"]);
        if (region.ambient_dim() != f.ambient_dim()) throw ParseError("step function: region dimension differs from n");
        f.add(piece["weight"].get<double>(), std::move(region));
    }
    return f;
}

inline Json step_to_json(const StepFunction& f) {
    Json pieces = Json::array();
    for (const auto& p : f.pieces()) pieces.push_back({{"weight", p.weight}, {"region", body_to_json(p.region)}});
    return {{"n", f.ambient_dim()}, {"pieces", std::move(pieces)}};
}

inline std::vector<Vector> points_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("points: expected an array of coordinate arrays");
    std::vector<Vector> xs;
    for (const auto& p : j) xs.push_back(vector_from_json(p));
    return xs;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace lapval

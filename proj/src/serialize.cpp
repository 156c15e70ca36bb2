#include "bmojn/serialize.hpp"

namespace bmojn {

using nlohmann::json;

json to_json(const PiecewiseFunction& phi) {
    json segs = json::array();
    for (const Segment& s : phi.segments()) {
        json js{{"lo", s.lo}, {"hi", s.hi}};
        if (const auto* c = std::get_if<Constant>(&s.shape)) {
            js["shape"] = "constant";
            js["c"] = c->c;
        } else {
            const auto& r = std::get<LogRamp>(s.shape);
            js["shape"] = "log_ramp";
            js["gamma"] = r.gamma;
            js["a"] = r.a;
            js["b"] = r.b;
        }
        segs.push_back(std::move(js));
    }
    return json{{"type", "piecewise"}, {"segments", std::move(segs)}};
}

json to_json(const DyadicStepFunction& phi) {
    json pieces = json::array();
    for (const DyadicPiece& p : phi.pieces()) {
        json jp{{"level", p.level}, {"pos", p.pos}};
        if (p.stair) {
            jp["kind"] = "staircase";
            jp["first"] = p.value;
            jp["step"] = p.step;
        } else {
            jp["kind"] = "constant";
            jp["value"] = p.value;
        }
        pieces.push_back(std::move(jp));
    }
    json out{{"type", "dyadic_step"}, {"depth", phi.depth()}, {"pieces", std::move(pieces)}};
    if (phi.depth() <= 12 && !phi.has_stair())
        out["leaves"] = phi.leaf_values(phi.depth());
    return out;
}

PiecewiseFunction piecewise_from_json(const json& j) {
    if (j.at("type") != "piecewise")
        throw std::invalid_argument("piecewise_from_json: wrong type tag");
    std::vector<Segment> segs;
    for (const json& js : j.at("segments")) {
        Segment s;
        s.lo = js.at("lo").get<double>();
        s.hi = js.at("hi").get<double>();
        if (js.at("shape") == "constant")
            s.shape = Constant{js.at("c").get<double>()};
        else
            s.shape = LogRamp{js.at("gamma").get<double>(), js.at("a").get<double>(),
                              js.at("b").get<double>()};
        segs.push_back(std::move(s));
    }
    return PiecewiseFunction(std::move(segs));
}

DyadicStepFunction dyadic_from_json(const json& j) {
    if (j.at("type") != "dyadic_step")
        throw std::invalid_argument("dyadic_from_json: wrong type tag");
    std::vector<DyadicPiece> pieces;
    for (const json& jp : j.at("pieces")) {
        DyadicPiece p;
        p.level = jp.at("level").get<int>();
        p.pos = jp.at("pos").get<std::uint64_t>();
        if (jp.at("kind") == "staircase") {
            p.stair = true;
            p.value = jp.at("first").get<double>();
            p.step = jp.at("step").get<double>();
        } else {
            p.value = jp.at("value").get<double>();
        }
        pieces.push_back(p);
    }
    return DyadicStepFunction(j.at("depth").get<int>(), std::move(pieces));
}

} // namespace bmojn

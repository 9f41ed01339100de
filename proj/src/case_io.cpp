#include "helm/case_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace helm {

using nlohmann::json;

namespace {

cd read_complex(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw NetworkError(NetworkErrorKind::Malformed, std::string("field '") + field + "' must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json write_complex(cd z) { return json::array({z.real(), z.imag()}); }

BusKind read_kind(const std::string& s) {
    if (s == "slack") return BusKind::Slack;
    if (s == "pq") return BusKind::PQ;
    if (s == "pv") return BusKind::PV;
    if (s == "exp_load") return BusKind::ExpLoad;
    throw NetworkError(NetworkErrorKind::Malformed, "unknown bus kind '" + s + "'");
}

template <typename T>
T required(const json& j, const char* field) {
    if (!j.contains(field)) throw NetworkError(NetworkErrorKind::Malformed, std::string("missing field '") + field + "'");
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        throw NetworkError(NetworkErrorKind::Malformed, std::string("bad type for field '") + field + "'");
    }
}

Network build_network(const json& doc);

}  // namespace

Network parse_case(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw NetworkError(NetworkErrorKind::Malformed, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("buses") || !doc["buses"].is_array())
        throw NetworkError(NetworkErrorKind::Malformed, "case must contain a 'buses' array");

    try {
        return build_network(doc);
    } catch (const json::exception& e) {
        throw NetworkError(NetworkErrorKind::Malformed, std::string("malformed case: ") + e.what());
    }
}

namespace {

Network build_network(const json& doc) {
    std::vector<Bus> buses;
    for (const json& jb : doc["buses"]) {
        Bus b;
        b.id = required<int>(jb, "id");
        b.kind = read_kind(required<std::string>(jb, "kind"));
        switch (b.kind) {
        case BusKind::Slack:
            b.v_ref = jb.contains("v_ref") ? read_complex(jb["v_ref"], "v_ref") : cd(1.0, 0.0);
            break;
        case BusKind::PQ:
            b.s = read_complex(jb.at("s"), "s");
            break;
        case BusKind::PV:
            b.p = required<double>(jb, "p");
            b.m_set = required<double>(jb, "m_set");
            break;
        case BusKind::ExpLoad:
            if (!jb.contains("loads") || !jb["loads"].is_array())
                throw NetworkError(NetworkErrorKind::Malformed, "exp_load bus requires a 'loads' array");
            for (const json& jl : jb["loads"]) {
                LoadComponent l;
                l.s0 = read_complex(jl.at("s0"), "s0");
                l.mp = required<int>(jl, "mp");
                l.np = required<int>(jl, "np");
                l.mq = required<int>(jl, "mq");
                l.nq = required<int>(jl, "nq");
                b.loads.push_back(l);
            }
            break;
        }
        if (jb.contains("q_min")) b.q_min = required<double>(jb, "q_min");
        if (jb.contains("q_max")) b.q_max = required<double>(jb, "q_max");
        buses.push_back(std::move(b));
    }
    std::vector<Line> lines;
    if (doc.contains("lines")) {
        for (const json& jl : doc["lines"]) {
            Line l;
            l.from = required<int>(jl, "from");
            l.to = required<int>(jl, "to");
            l.z = read_complex(jl.at("z"), "z");
            lines.push_back(l);
        }
    }
    return Network(std::move(buses), std::move(lines));
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Network load_case_file(const std::string& path) { return parse_case(read_text_file(path)); }

std::string serialize_case(const Network& net) {
    json doc;
    doc["buses"] = json::array();
    for (const Bus& b : net.buses()) {
        json jb;
        jb["id"] = b.id;
        jb["kind"] = to_string(b.kind);
        switch (b.kind) {
        case BusKind::Slack: jb["v_ref"] = write_complex(b.v_ref); break;
        case BusKind::PQ: jb["s"] = write_complex(b.s); break;
        case BusKind::PV:
            jb["p"] = b.p;
            jb["m_set"] = b.m_set;
            break;
        case BusKind::ExpLoad:
            jb["loads"] = json::array();
            for (const auto& l : b.loads)
                jb["loads"].push_back(
                    {{"s0", write_complex(l.s0)}, {"mp", l.mp}, {"np", l.np}, {"mq", l.mq}, {"nq", l.nq}});
            break;
        }
        if (b.q_min) jb["q_min"] = *b.q_min;
        if (b.q_max) jb["q_max"] = *b.q_max;
        doc["buses"].push_back(jb);
    }
    doc["lines"] = json::array();
    for (const Line& l : net.lines()) doc["lines"].push_back({{"from", l.from}, {"to", l.to}, {"z", write_complex(l.z)}});
    return doc.dump(2);
}

}  // namespace helm

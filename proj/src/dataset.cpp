#include "hegnn/dataset.hpp"

#include <fstream>

#include <json.hpp>

#include "hegnn/error.hpp"

namespace hegnn::geom {

namespace {

using nlohmann::json;

json flatten(const std::vector<Vec3>& v) {
    json arr = json::array();
    for (const Vec3& p : v) {
        arr.push_back(p.x);
        arr.push_back(p.y);
        arr.push_back(p.z);
    }
    return arr;
}

std::vector<Vec3> unflatten(const json& arr, size_t nodes, const char* field) {
    require(arr.is_array() && arr.size() == 3 * nodes, ErrorCode::io,
            std::string("dataset record field has wrong length: ") + field);
    std::vector<Vec3> out(nodes);
    for (size_t i = 0; i < nodes; ++i)
        out[i] = {arr[3 * i].get<double>(), arr[3 * i + 1].get<double>(), arr[3 * i + 2].get<double>()};
    return out;
}

} // namespace

void write_dataset(const std::vector<NBodySample>& samples, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io, "cannot open dataset file for writing: " + path);
    for (const NBodySample& s : samples) {
        json rec;
        rec["charges"] = s.charges;
        rec["positions_t0"] = flatten(s.positions_t0);
        rec["velocities_t0"] = flatten(s.velocities_t0);
        rec["positions_t1"] = flatten(s.positions_t1);
        out << rec.dump() << '\n';
    }
    require(out.good(), ErrorCode::io, "failed writing dataset file: " + path);
}

std::vector<NBodySample> read_dataset(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io, "cannot open dataset file: " + path);
    std::vector<NBodySample> samples;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            fail(ErrorCode::io, "dataset parse error at line " + std::to_string(lineno) + ": " + e.what());
        }
        for (const char* field : {"charges", "positions_t0", "velocities_t0", "positions_t1"})
            require(rec.contains(field), ErrorCode::io,
                    "dataset record missing field '" + std::string(field) + "' at line " + std::to_string(lineno));
        NBodySample s;
        s.charges = rec["charges"].get<std::vector<double>>();
        const size_t n = s.charges.size();
        require(n >= 2, ErrorCode::io, "dataset record with fewer than two bodies");
        s.positions_t0 = unflatten(rec["positions_t0"], n, "positions_t0");
        s.velocities_t0 = unflatten(rec["velocities_t0"], n, "velocities_t0");
        s.positions_t1 = unflatten(rec["positions_t1"], n, "positions_t1");
        samples.push_back(std::move(s));
    }
    return samples;
}

} // namespace hegnn::geom

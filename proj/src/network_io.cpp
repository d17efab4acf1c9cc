#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "lacsim/workload.hpp"

namespace lacsim {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("network: cannot open " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("network: " + path + " is not valid JSON: " + e.what());
    }
    return j;
}

int require_int(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key)) {
        throw std::runtime_error("network: " + ctx + " is missing '" + key + "'");
    }
    if (!j[key].is_number_integer()) {
        throw std::runtime_error("network: " + ctx + " field '" + key + "' must be an integer");
    }
    return j[key].get<int>();
}

TensorTrace load_tensor(const json& spec, const std::vector<int>& dims, int precision,
                        uint64_t default_seed, const std::filesystem::path& base,
                        const std::string& ctx) {
    if (spec.is_string()) {
        std::filesystem::path p(spec.get<std::string>());
        if (p.is_relative()) p = base / p;
        TensorTrace trace = load_trace(p.string());
        if (trace.dims != dims) {
            throw std::runtime_error("network: " + ctx + " trace " + p.string() +
                                     " shape does not match the layer");
        }
        return trace;
    }
    if (spec.is_object()) {
        const double density = spec.value("density", 1.0);
        const uint64_t seed = spec.value("seed", default_seed);
        return gen_synthetic(dims, density, precision, seed);
    }
    throw std::runtime_error("network: " + ctx +
                             " must be a trace path or a synthetic {density, seed} object");
}

}  // namespace

NetworkDesc load_network(const std::string& path) {
    const json j = load_json(path);
    const auto base = std::filesystem::path(path).parent_path();

    NetworkDesc desc;
    desc.net.name = j.value("name", std::filesystem::path(path).stem().string());
    desc.profile.name = desc.net.name;
    desc.profile.weight_bits = j.value("weight_precision", 16);

    if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
        throw std::runtime_error("network: " + path + " must list at least one layer");
    }
    size_t index = 0;
    for (const json& lj : j["layers"]) {
        const std::string ctx = "layer " + std::to_string(index);
        LayerData layer;
        layer.name = lj.value("name", "L" + std::to_string(index));
        layer.shape.channels = require_int(lj, "channels", ctx);
        layer.shape.input_x = require_int(lj, "input_x", ctx);
        layer.shape.input_y = require_int(lj, "input_y", ctx);
        layer.shape.filters = require_int(lj, "filters", ctx);
        layer.shape.filter_h = require_int(lj, "filter_h", ctx);
        layer.shape.filter_k = require_int(lj, "filter_k", ctx);
        layer.shape.stride = lj.value("stride", 1);
        layer.shape.validate();

        const int act_bits = lj.value("act_precision", 16);
        desc.profile.act_bits.push_back(act_bits);

        const std::vector<int> act_dims{layer.shape.channels, layer.shape.input_x,
                                        layer.shape.input_y};
        const std::vector<int> wgt_dims{layer.shape.filters, layer.shape.channels,
                                        layer.shape.filter_h, layer.shape.filter_k};
        if (!lj.contains("activations")) {
            throw std::runtime_error("network: " + ctx + " is missing 'activations'");
        }
        if (!lj.contains("weights")) {
            throw std::runtime_error("network: " + ctx + " is missing 'weights'");
        }
        layer.acts = load_tensor(lj["activations"], act_dims, act_bits, index + 1, base,
                                 ctx + " activations");
        layer.wgts = load_tensor(lj["weights"], wgt_dims, desc.profile.weight_bits,
                                 1000 + index, base, ctx + " weights");
        desc.net.layers.push_back(std::move(layer));
        ++index;
    }
    return desc;
}

}  // namespace lacsim

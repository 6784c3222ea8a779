#include "decnas/model_io.hpp"

#include <fstream>

namespace decnas {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

LayerKind kind_from_name(const std::string& name) {
  for (LayerKind k : {LayerKind::Conv2d, LayerKind::Dense, LayerKind::MaxPool2d,
                      LayerKind::Relu, LayerKind::Flatten, LayerKind::Softmax})
    if (name == layer_kind_name(k)) return k;
  throw ConfigError("unknown layer kind '" + name + "'");
}

ordered_json tensor_to_json(const Tensor& t) {
  ordered_json j;
  j["shape"] = t.shape;
  j["values"] = t.values;
  return j;
}

Tensor tensor_from_json(const json& j) {
  return Tensor(j.at("shape").get<std::vector<std::size_t>>(),
                j.at("values").get<std::vector<float>>());
}

}  // namespace

ordered_json architecture_to_json(const Architecture& arch) {
  ordered_json j;
  j["input"] = {arch.input.h, arch.input.w, arch.input.c};
  j["class_count"] = arch.class_count;
  j["layers"] = ordered_json::array();
  for (const auto& l : arch.layers) {
    ordered_json lj;
    lj["kind"] = layer_kind_name(l.kind);
    switch (l.kind) {
      case LayerKind::Conv2d:
        lj["filters"] = l.filter_count;
        lj["kernel"] = {l.kernel_h, l.kernel_w};
        lj["stride"] = l.stride;
        lj["padding"] = l.padding == Padding::Same ? "same" : "valid";
        break;
      case LayerKind::Dense:
        lj["units"] = l.filter_count;
        break;
      case LayerKind::MaxPool2d:
        lj["window"] = l.window;
        lj["stride"] = l.pool_stride;
        break;
      default:
        break;
    }
    j["layers"].push_back(std::move(lj));
  }
  return j;
}

Architecture architecture_from_json(const json& j) {
  Architecture arch;
  auto in = j.at("input");
  arch.input = {in.at(0).get<int>(), in.at(1).get<int>(), in.at(2).get<int>()};
  arch.class_count = j.at("class_count").get<int>();
  for (const auto& lj : j.at("layers")) {
    LayerKind kind = kind_from_name(lj.at("kind").get<std::string>());
    switch (kind) {
      case LayerKind::Conv2d: {
        auto k = lj.at("kernel");
        arch.layers.push_back(LayerSpec::conv2d(
            lj.at("filters").get<int>(), k.at(0).get<int>(), k.at(1).get<int>(),
            lj.at("stride").get<int>(),
            lj.at("padding").get<std::string>() == "same" ? Padding::Same
                                                          : Padding::Valid));
        break;
      }
      case LayerKind::Dense:
        arch.layers.push_back(LayerSpec::dense(lj.at("units").get<int>()));
        break;
      case LayerKind::MaxPool2d:
        arch.layers.push_back(LayerSpec::maxpool2d(lj.at("window").get<int>(),
                                                   lj.at("stride").get<int>()));
        break;
      case LayerKind::Relu:
        arch.layers.push_back(LayerSpec::relu());
        break;
      case LayerKind::Flatten:
        arch.layers.push_back(LayerSpec::flatten());
        break;
      case LayerKind::Softmax:
        arch.layers.push_back(LayerSpec::softmax());
        break;
    }
  }
  validate(arch);
  return arch;
}

void save_model(const std::string& path, const Architecture& arch,
                const Parameters& params) {
  ordered_json j;
  j["architecture"] = architecture_to_json(arch);
  j["params"] = ordered_json::array();
  for (const auto& lp : params.layers) {
    ordered_json pj;
    pj["trainable"] = lp.trainable;
    if (lp.trainable) {
      pj["weights"] = tensor_to_json(lp.weights);
      pj["bias"] = tensor_to_json(lp.bias);
    }
    j["params"].push_back(std::move(pj));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump() << '\n';
}

std::pair<Architecture, Parameters> load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  json j = json::parse(in);
  Architecture arch = architecture_from_json(j.at("architecture"));
  Parameters params;
  for (const auto& pj : j.at("params")) {
    LayerParams lp;
    lp.trainable = pj.at("trainable").get<bool>();
    if (lp.trainable) {
      lp.weights = tensor_from_json(pj.at("weights"));
      lp.bias = tensor_from_json(pj.at("bias"));
    }
    params.layers.push_back(std::move(lp));
  }
  if (params.layers.size() != arch.layers.size())
    throw ConfigError("parameter count does not match architecture in " + path);
  return {std::move(arch), std::move(params)};
}

}  // namespace decnas

#include "decnas/models.hpp"

namespace decnas {

Architecture make_template(const std::string& name, int class_count) {
  Architecture arch;
  arch.class_count = class_count;
  if (name == "convnet-small") {
    arch.input = {32, 32, 1};
    arch.layers = {
        LayerSpec::conv2d(8, 3, 3),  LayerSpec::relu(), LayerSpec::maxpool2d(2),
        LayerSpec::conv2d(16, 3, 3), LayerSpec::relu(), LayerSpec::maxpool2d(2),
        LayerSpec::conv2d(32, 3, 3), LayerSpec::relu(), LayerSpec::maxpool2d(2),
        LayerSpec::conv2d(32, 3, 3), LayerSpec::relu(),
        LayerSpec::flatten(),
        LayerSpec::dense(class_count),
        LayerSpec::softmax(),
    };
  } else if (name == "convnet-celeba-shape") {
    arch.input = {32, 32, 1};
    arch.layers = {
        LayerSpec::conv2d(8, 3, 3),  LayerSpec::relu(),
        LayerSpec::conv2d(8, 3, 3),  LayerSpec::relu(), LayerSpec::maxpool2d(2),
        LayerSpec::conv2d(16, 3, 3), LayerSpec::relu(),
        LayerSpec::conv2d(16, 3, 3), LayerSpec::relu(), LayerSpec::maxpool2d(2),
        LayerSpec::conv2d(32, 3, 3), LayerSpec::relu(),
        LayerSpec::conv2d(32, 3, 3), LayerSpec::relu(), LayerSpec::maxpool2d(2),
        LayerSpec::flatten(),
        LayerSpec::dense(class_count),
        LayerSpec::softmax(),
    };
  } else {
    throw ConfigError("unknown model template '" + name + "'");
  }
  validate(arch);
  return arch;
}

}  // namespace decnas

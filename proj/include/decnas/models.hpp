#pragma once

#include <string>

#include "decnas/nn.hpp"

namespace decnas {

// Desk-scale model templates. "convnet-small" is a 4 conv + 1 FC stack;
// "convnet-celeba-shape" mirrors the 6 conv + 1 FC layout.
Architecture make_template(const std::string& name, int class_count);

}  // namespace decnas

#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxmag/prox.hpp"

namespace proxmag {

/// Builds a regulariser by registry name: l1, l2, l2sq, wl1-matrix, tv-iso,
/// tv-aniso, vtv, tv-st, gtik, multibang, box, tgv2. lambda scales the whole
/// term. Unknown names or parameter keys throw InvalidInput.
[[nodiscard]] std::unique_ptr<ProxFunction> make_regularizer(const std::string& name, Shape shape,
                                                             double lambda,
                                                             const nlohmann::json& params = {});

[[nodiscard]] const std::vector<std::string>& regularizer_names();

}  // namespace proxmag

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppc/codes.hpp"

// JSON form of an output code: {"name": ..., "K": ..., "checks": [[i, j, ...], ...]}.
namespace ppc {

inline nlohmann::json code_to_json(const OutputCode& code) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : code.checks()) checks.push_back(c.support());
  return {{"name", code.name()}, {"K", code.k()}, {"checks", std::move(checks)}};
}

// Family tags are not part of the document; the structure is recovered so
// that a serialized repetition code keeps its majority-vote fast path.
inline OutputCode code_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("K") || !doc.contains("checks")) {
    throw std::invalid_argument("code document needs \"K\" and \"checks\"");
  }
  const auto name = doc.value("name", std::string("custom"));
  const auto& k_node = doc.at("K");
  if (!k_node.is_number_unsigned()) throw std::invalid_argument("\"K\" must be a non-negative integer");
  const auto k = k_node.get<std::size_t>();
  std::vector<ParityCheck> checks;
  for (const auto& entry : doc.at("checks")) {
    if (!entry.is_array()) throw std::invalid_argument("each check must be an array of indices");
    std::vector<std::size_t> support;
    for (const auto& idx : entry) {
      if (!idx.is_number_unsigned()) throw std::invalid_argument("check indices must be non-negative integers");
      support.push_back(idx.get<std::size_t>());
    }
    checks.emplace_back(std::move(support));
  }

  if (k >= 1 && checks.size() % k == 0 && !checks.empty()) {
    bool repetition = true;
    for (std::size_t j = 0; j < checks.size() && repetition; ++j) {
      repetition = checks[j] == ParityCheck{j % k};
    }
    if (repetition) {
      const auto copies = checks.size() / k;
      return OutputCode(name, k, std::move(checks), CodeFamily::repetition, copies);
    }
  }
  return OutputCode(name, k, std::move(checks));
}

}  // namespace ppc

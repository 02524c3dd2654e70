#pragma once

#include <json.hpp>

#include "vdo/ml/model.hpp"

namespace vdo::ml {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json spec_to_json(const AlgorithmSpec& spec);
AlgorithmSpec spec_from_json(const nlohmann::json& j);

/// Versioned document; reloading predicts bit-identically.
nlohmann::json model_to_json(const TrainedModel& model);
/// Throws ParseError on schema or version mismatch.
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace vdo::ml

#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rarekit/lago.hpp"
#include "rarekit/svm.hpp"
#include "rarekit/trees.hpp"

namespace rarekit::cli {

using Json = nlohmann::json;

Json to_json(const KernelClassifier& model);
Json to_json(const LagoModel& model);
Json to_json(const Forest& forest);
Json to_json(const BoostEnsemble& ensemble);

KernelClassifier classifier_from_json(const Json& j);
LagoModel lago_from_json(const Json& j);
Forest forest_from_json(const Json& j);
BoostEnsemble boost_from_json(const Json& j);

// Every model file carries {"format": "rarekit-model", "type": ...}.
void save_model(const std::filesystem::path& path, const std::string& type, Json body);
Json load_model(const std::filesystem::path& path, const std::string& type);

}  // namespace rarekit::cli

/*
 * Copyright 2026 The seefew Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SEEFEW_INVENTORY_HPP_
#define SEEFEW_INVENTORY_HPP_

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "seefew/text.hpp"

namespace seefew {

/// Entity types plus the non-entity type, each with a natural-language
/// hypothesis template ("is a person."). Hypotheses are rendered as
/// "<candidate> <template>" (no space for Chinese).
class TypeInventory {
 public:
  static constexpr const char* kNoneName = "<none>";

  struct TypeTemplate {
    std::string name;
    std::string template_text;
  };

  TypeInventory(std::vector<TypeTemplate> types, std::string none_template,
                std::string language)
      : types_(std::move(types)),
        none_template_(std::move(none_template)),
        language_(std::move(language)) {
    if (language_ != "english" && language_ != "chinese") {
      throw std::invalid_argument("inventory language must be english or chinese");
    }
    for (std::size_t i = 0; i < types_.size(); ++i) {
      if (types_[i].name.empty() || types_[i].template_text.empty()) {
        throw std::invalid_argument("inventory entries need a name and a template");
      }
      for (std::size_t j = i + 1; j < types_.size(); ++j) {
        if (types_[i].name == types_[j].name) {
          throw std::invalid_argument("duplicate type name " + types_[i].name);
        }
      }
    }
    if (none_template_.empty()) {
      throw std::invalid_argument("inventory needs a non-entity template");
    }
  }

  const std::vector<TypeTemplate>& types() const { return types_; }
  const std::string& language() const { return language_; }
  const std::string& none_template() const { return none_template_; }
  bool chinese() const { return language_ == "chinese"; }

  /// |T| = |T+| + 1.
  int v() const { return static_cast<int>(types_.size()) + 1; }
  int none_index() const { return static_cast<int>(types_.size()); }

  /// Token separator for surface text in this language.
  std::string separator() const { return chinese() ? "" : " "; }

  /// Name at pair-column index i: T+ in order, then the non-entity type.
  std::string name_at(int index) const {
    if (index == none_index()) return kNoneName;
    return types_.at(static_cast<std::size_t>(index)).name;
  }

  int index_of(const std::string& type_name) const {
    if (type_name == kNoneName) return none_index();
    for (std::size_t i = 0; i < types_.size(); ++i) {
      if (types_[i].name == type_name) return static_cast<int>(i);
    }
    throw std::invalid_argument("unknown entity type '" + type_name + "'");
  }

  bool has_type(const std::string& type_name) const {
    if (type_name == kNoneName) return true;
    for (const auto& t : types_) {
      if (t.name == type_name) return true;
    }
    return false;
  }

  /// Renders the hypothesis for (candidate text, type).
  std::string hypothesis(const std::string& candidate_text,
                         const std::string& type_name) const {
    const std::string& tmpl = type_name == kNoneName
                                  ? none_template_
                                  : types_.at(static_cast<std::size_t>(
                                                  index_of(type_name)))
                                        .template_text;
    return chinese() ? candidate_text + tmpl : candidate_text + " " + tmpl;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["language"] = language_;
    j["none_template"] = none_template_;
    j["types"] = nlohmann::json::array();
    for (const auto& t : types_) {
      j["types"].push_back({{"name", t.name}, {"template", t.template_text}});
    }
    return j;
  }

  static TypeInventory from_json(const nlohmann::json& j) {
    std::vector<TypeTemplate> types;
    for (const auto& t : j.at("types")) {
      types.push_back({t.at("name").get<std::string>(),
                       t.at("template").get<std::string>()});
    }
    return TypeInventory(std::move(types), j.at("none_template").get<std::string>(),
                         j.value("language", "english"));
  }

  static TypeInventory load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open inventory file: " + path);
    return from_json(nlohmann::json::parse(in));
  }

  /// Bundled per-dataset defaults.
  static TypeInventory builtin(const std::string& dataset) {
    const std::string none_en = "is not an entity.";
    if (dataset == "conll03" || dataset == "wikigold") {
      return TypeInventory({{"PER", "is a person."},
                            {"LOC", "is a location."},
                            {"MISC", "is a miscellaneous entity."},
                            {"ORG", "is an organization."}},
                           none_en, "english");
    }
    if (dataset == "mit-restaurant") {
      return TypeInventory({{"Hours", "is a time."},
                            {"Rating", "is the rating."},
                            {"Amenity", "is an amenity."},
                            {"Price", "is the price."},
                            {"Dish", "is a dish."},
                            {"Location", "is a location."},
                            {"Cuisine", "is a cuisine."},
                            {"Restaurant_Name", "is a restaurant name."}},
                           none_en, "english");
    }
    if (dataset == "weibo") {
      return TypeInventory({{"GPE.NAM", "是城市、国家的特指。"},
                            {"GPE.NOM", "是城市、国家的泛指。"},
                            {"LOC.NAM", "是地名的特指。"},
                            {"LOC.NOM", "是地名的泛指。"},
                            {"ORG.NAM", "是组织名的特指。"},
                            {"ORG.NOM", "是组织名的泛指。"},
                            {"PER.NAM", "是人名的特指。"},
                            {"PER.NOM", "是人名的泛指。"}},
                           "不是命名实体。", "chinese");
    }
    throw std::invalid_argument("no builtin inventory named '" + dataset + "'");
  }

 private:
  std::vector<TypeTemplate> types_;
  std::string none_template_;
  std::string language_;
};

/// Hypothesis text for (candidate text, type); the type must exist.
inline std::string build_hypothesis(const std::string& candidate_text,
                                    const std::string& type_name,
                                    const TypeInventory& inventory) {
  return inventory.hypothesis(candidate_text, type_name);
}

}  // namespace seefew

#endif  // SEEFEW_INVENTORY_HPP_

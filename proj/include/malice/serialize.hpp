#ifndef MALICE_SERIALIZE_HPP
#define MALICE_SERIALIZE_HPP

#include <json.hpp>

#include "malice/adversary.hpp"
#include "malice/datagen.hpp"
#include "malice/experiments.hpp"
#include "malice/hinge_learner.hpp"
#include "malice/outlier_removal.hpp"
#include "malice/report.hpp"

// JSON forms of the configuration and result types. Field names follow the
// type definitions; unknown fields are rejected nowhere (forward-compatible
// reads), missing required fields throw.

namespace malice {

void to_json(nlohmann::json& j, const MixtureComponent& c);
void from_json(const nlohmann::json& j, MixtureComponent& c);

void to_json(nlohmann::json& j, const MixtureSpec& s);
void from_json(const nlohmann::json& j, MixtureSpec& s);

void to_json(nlohmann::json& j, const SeparableMixtureSpec& s);
void from_json(const nlohmann::json& j, SeparableMixtureSpec& s);

void to_json(nlohmann::json& j, const AdversarySpec& s);
void from_json(const nlohmann::json& j, AdversarySpec& s);

void to_json(nlohmann::json& j, const AlgorithmParams& p);
void from_json(const nlohmann::json& j, AlgorithmParams& p);

void to_json(nlohmann::json& j, const RemovalParams& p);
void from_json(const nlohmann::json& j, RemovalParams& p);

void to_json(nlohmann::json& j, const OptimizerConfig& c);
void from_json(const nlohmann::json& j, OptimizerConfig& c);

void to_json(nlohmann::json& j, const CertificateEntry& e);
void from_json(const nlohmann::json& j, CertificateEntry& e);

void to_json(nlohmann::json& j, const CertificateReport& r);
void from_json(const nlohmann::json& j, CertificateReport& r);

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// LearnerOutput with the weight vector written to a side CSV; `q_csv` names
/// that file. load_learner_output reads it back relative to the JSON's
/// directory.
nlohmann::json learner_output_to_json(const LearnerOutput& out,
                                      const std::string& q_csv);
LearnerOutput learner_output_from_json(const nlohmann::json& j,
                                       const std::string& base_dir);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace malice

#endif

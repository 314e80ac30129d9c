#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "superres/adversarial.hpp"
#include "superres/cluster.hpp"
#include "superres/experiments.hpp"
#include "superres/measurement.hpp"
#include "superres/oracle.hpp"
#include "superres/pencil.hpp"
#include "superres/signal.hpp"

namespace superres {

using Json = nlohmann::ordered_json;

// Non-finite doubles are written as the strings "inf", "-inf" and "nan";
// readers accept both numbers and those strings.
Json number_to_json(double value);
double number_from_json(const Json& j);

Json to_json(const SpikeSignal& signal);
SpikeSignal signal_from_json(const Json& j);

Json to_json(const MeasurementGrid& grid);
MeasurementGrid grid_from_json(const Json& j);

Json to_json(const Measurement& measurement);
Measurement measurement_from_json(const Json& j);

Json to_json(const ClusterSpec& spec);
/// Missing keys keep the values of `defaults`.
ClusterSpec cluster_spec_from_json(const Json& j, const ClusterSpec& defaults = {});

Json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const Json& j, const ExperimentConfig& defaults = {});

Json to_json(const RecoveryResult& result);
Json to_json(const AdversarialPair& pair);
Json to_json(const TaylorReport& report);
Json to_json(const DiameterEstimate& estimate);
Json to_json(const ScalingReport& report);
Json to_json(const TrialRecord& record);

/// Reads a JSON document; Error("cli", "malformed input") on I/O or parse failure.
Json read_json_file(const std::filesystem::path& path);
/// Writes with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
/// Writes text, creating parent directories; Error("cli", "io failure") on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace superres

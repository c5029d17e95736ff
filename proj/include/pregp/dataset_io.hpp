#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pregp/dataset.hpp"

namespace pregp {

/// Applies input warping and the dataset's output warping to raw trials.
/// Throws ValidationError for out-of-bounds inputs or invalid outputs.
[[nodiscard]] MultiTaskDataset build_dataset(SearchSpace space, OutputWarping warping,
                                             std::vector<std::pair<std::string, std::vector<RawTrial>>> tasks);

/// Dataset document:
///   {"search_space": {"dims": [{"name", "low", "high", "scaling"}]},
///    "output_warping": "none" | "neg-log-error" | "online-softplus",   (optional)
///    "tasks": [{"name", "points": [{"x": [...], "y": real, "feasible": bool}]}]}
/// `origin` prefixes error messages. Throws ParseError or ValidationError.
[[nodiscard]] MultiTaskDataset parse_dataset(std::string_view text, const std::string& origin = "<dataset>");
[[nodiscard]] std::string serialize_dataset(const MultiTaskDataset& dataset);

[[nodiscard]] MultiTaskDataset load_dataset(const std::string& path);
void save_dataset(const MultiTaskDataset& dataset, const std::string& path);

[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace pregp

#pragma once

#include "iorobust/lp.hpp"
#include "iorobust/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace iorobust {

// Dataset file:
//   {"A": [[...], ...],
//    "observations": [{"b": [...], "x_star": [...]}, ...],
//    "validation":   [{"b": [...], "x_star": [...]}, ...],   (optional)
//    "c_true": [...] | null,
//    "seed": <uint64>}                                        (optional)
// Observations are validated (A x* = b, x* >= 0) on load.
Dataset parse_dataset(std::string_view text);
std::string dataset_to_json(const Dataset& data);

Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const Dataset& data);

// A bare JSON array of numbers, or an object holding one under `key`.
Vector parse_vector(std::string_view text, std::string_view key);
Vector read_vector(const std::filesystem::path& path, std::string_view key);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace iorobust

#pragma once

/// @file io.hpp
/// @brief JSON documents for NK instances, landscapes and EA configurations,
/// and a small CSV writer with a commented provenance header.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "epiroad/ea.hpp"
#include "epiroad/landscape.hpp"
#include "epiroad/nk.hpp"

namespace epiroad {

using json = nlohmann::json;

inline constexpr std::string_view kVersion = "0.1.0";

/// Thrown for unreadable, unwritable or malformed files; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {n, k, kind, seed, links, tables, mask}. Table values are written with the
/// shortest representation that parses back to the same double.
json to_json(const NkInstance& nk);
NkInstance nk_from_json(const json& doc);

/// {params, nk, optimum_value[, provenance]}.
json to_json(const ErLandscape& landscape, const json& provenance = nullptr);

/// Rebuilds the landscape and checks the stored optimum_value bit-exactly.
ErLandscape landscape_from_json(const json& doc);

json to_json(const EaConfig& cfg);

/// Fields missing from `doc` keep their defaults; unknown fields are rejected.
EaConfig ea_config_from_json(const json& doc);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

void save_landscape(const std::filesystem::path& path, const ErLandscape& landscape,
                    const json& provenance = nullptr);
ErLandscape load_landscape(const std::filesystem::path& path);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

/// Formats a double with up to 17 significant digits ("nan" when undefined).
std::string format_number(double v);

/// CSV table rendered as '#'-prefixed provenance lines, a header row, and rows.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_comment(std::string line) { comments_.push_back(std::move(line)); }
    /// Throws std::invalid_argument when the field count differs from the header.
    void add_row(std::vector<std::string> fields);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::string str() const;
    void write(const std::filesystem::path& path) const { write_text_file(path, str()); }

private:
    std::vector<std::string> columns_;
    std::vector<std::string> comments_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace epiroad

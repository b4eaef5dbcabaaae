// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mchcli {

using Json = nlohmann::ordered_json;

enum class Format { Csv, Json };

/// Locale-independent shortest round-trip rendering.
std::string format_number(double x);

/// Pretty-prints with one member per line; numbers via format_number,
/// non-finite numbers as null.
std::string dump_json(const Json& value);

struct RunManifest {
    std::string subcommand;
    std::string input;
    std::vector<std::pair<std::string, std::string>> flags;
    std::uint64_t seed = 0;
    std::string version;
    double duration_seconds = 0.0;

    [[nodiscard]] Json to_json() const;
    /// '#'-prefixed lines for CSV output.
    [[nodiscard]] std::string to_csv_header() const;
};

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    CsvTable& add(double x);
    CsvTable& add(std::uint64_t x);
    CsvTable& add(std::string text);
    void end_row();

    [[nodiscard]] std::string str() const;

private:
    std::size_t width_;
    std::string body_;
    std::vector<std::string> row_;
};

/// Writes to stdout when path is empty or "-", else to a sibling temp file
/// renamed over the target. Throws std::runtime_error on I/O failure.
void write_output(const std::string& path, const std::string& content);

}  // namespace mchcli

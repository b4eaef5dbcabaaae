// SPDX-License-Identifier: Apache-2.0
#include "cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace mchcli {

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void dump_into(std::string& out, const Json& v, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                escape_into(out, it.key());
                out += ": ";
                dump_into(out, it.value(), depth + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            // Arrays of scalars stay on one line.
            const bool flat = std::none_of(v.begin(), v.end(), [](const Json& e) { return e.is_structured(); });
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += flat ? "[" : "[\n";
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += flat ? ", " : ",\n";
                first = false;
                if (!flat) out += pad;
                dump_into(out, e, depth + 1);
            }
            out += flat ? "]" : "\n" + close + "]";
            return;
        }
        case Json::value_t::string: escape_into(out, v.get_ref<const std::string&>()); return;
        case Json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; return;
        case Json::value_t::number_integer: out += std::to_string(v.get<std::int64_t>()); return;
        case Json::value_t::number_unsigned: out += std::to_string(v.get<std::uint64_t>()); return;
        case Json::value_t::number_float: {
            const double x = v.get<double>();
            out += std::isfinite(x) ? format_number(x) : "null";
            return;
        }
        default: out += "null"; return;
    }
}

std::string csv_field(std::string text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (const char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);  // shortest round-trip
    return std::string(buf, r.ptr);
}

std::string dump_json(const Json& value) {
    std::string out;
    dump_into(out, value, 0);
    out += '\n';
    return out;
}

Json RunManifest::to_json() const {
    Json flag_obj = Json::object();
    for (const auto& [k, v] : flags) flag_obj[k] = v;
    Json j;
    j["subcommand"] = subcommand;
    j["input"] = input;
    j["flags"] = flag_obj;
    j["seed"] = seed;
    j["version"] = version;
    j["duration_seconds"] = duration_seconds;
    return j;
}

std::string RunManifest::to_csv_header() const {
    std::string out;
    out += "# subcommand: " + subcommand + "\n";
    out += "# input: " + input + "\n";
    for (const auto& [k, v] : flags) out += "# flag " + k + ": " + v + "\n";
    out += "# seed: " + std::to_string(seed) + "\n";
    out += "# version: " + version + "\n";
    out += "# duration_seconds: " + format_number(duration_seconds) + "\n";
    return out;
}

CsvTable::CsvTable(std::vector<std::string> columns) : width_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) body_ += ',';
        body_ += csv_field(columns[i]);
    }
    body_ += '\n';
}

CsvTable& CsvTable::add(double x) {
    row_.push_back(format_number(x));
    return *this;
}

CsvTable& CsvTable::add(std::uint64_t x) {
    row_.push_back(std::to_string(x));
    return *this;
}

CsvTable& CsvTable::add(std::string text) {
    row_.push_back(csv_field(std::move(text)));
    return *this;
}

void CsvTable::end_row() {
    if (row_.size() != width_) throw std::logic_error("CSV row width mismatch");
    for (std::size_t i = 0; i < row_.size(); ++i) {
        if (i > 0) body_ += ',';
        body_ += row_[i];
    }
    body_ += '\n';
    row_.clear();
}

std::string CsvTable::str() const { return body_; }

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        std::fflush(stdout);
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path temp = target;
    temp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + temp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(temp, ignored);
            throw std::runtime_error("failed writing " + temp.string());
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(temp, ignored);
        throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
    }
}

}  // namespace mchcli

#include "gearcheck/error.hpp"
#include "gearcheck/features.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace gearcheck {
namespace {

std::string quote_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

// RFC 4180-style split of a single line.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

} // namespace

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write feature file " + path.string());
    }
    for (auto name : kFeatureNames) {
        out << name << ',';
    }
    out << "label,source\n";
    char buf[32];
    for (const auto& row : table.rows) {
        for (const auto& v : row.values) {
            if (v) {
                std::snprintf(buf, sizeof buf, "%.17g", *v);
                out << buf;
            }
            out << ',';
        }
        if (row.label) {
            out << to_string(*row.label);
        }
        out << ',' << quote_field(row.source) << '\n';
    }
    if (!out) {
        throw DataError("write failed for " + path.string());
    }
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open feature file " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(path.string() + ": empty feature file");
    }
    const auto header = split_csv_line(line);
    if (header.size() != kFeatureCount + 2) {
        throw DataError(path.string() + ": expected " + std::to_string(kFeatureCount + 2) +
                        " columns, found " + std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (header[i] != kFeatureNames[i]) {
            throw DataError(path.string() + ": unexpected column '" + header[i] + "'");
        }
    }
    if (header[kFeatureCount] != "label" || header[kFeatureCount + 1] != "source") {
        throw DataError(path.string() + ": last columns must be label,source");
    }

    FeatureTable table;
    std::optional<FeatureSet> set;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        const auto where = path.string() + ":" + std::to_string(line_no);
        if (fields.size() != kFeatureCount + 2) {
            throw DataError(where + ": wrong field count");
        }
        FeatureVector row;
        std::size_t present = 0;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            const auto& text = fields[i];
            if (text.empty()) {
                continue;
            }
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
                throw DataError(where + ": bad value in column " + std::string(kFeatureNames[i]));
            }
            row.values[i] = value;
            ++present;
        }
        bool time_complete = true;
        for (std::size_t i = 0; i < kTimeFeatureCount; ++i) {
            time_complete = time_complete && row.values[i].has_value();
        }
        if (!time_complete || (present != kTimeFeatureCount && present != kFeatureCount)) {
            throw DataError(where + ": row must carry 12 time features or all 19 features");
        }
        row.set = present == kFeatureCount ? FeatureSet::Combined : FeatureSet::TimeOnly;
        if (set && *set != row.set) {
            throw DataError(where + ": rows mix time-only and combined feature sets");
        }
        set = row.set;
        if (!fields[kFeatureCount].empty()) {
            row.label = parse_health(fields[kFeatureCount]);
        }
        row.source = fields[kFeatureCount + 1];
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) {
        throw DataError(path.string() + ": feature table has no rows");
    }
    table.set = *set;
    return table;
}

} // namespace gearcheck

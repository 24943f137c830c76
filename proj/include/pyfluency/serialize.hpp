#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pyfluency/catalog.hpp"
#include "pyfluency/report.hpp"

namespace pyfluency {

/// Report JSON: one top-level object keyed by unit name, each unit keyed by
/// unit-relative file path, each file an array of occurrence records. All five
/// record fields are serialized as strings and the indentation is fixed at one
/// space per level so output is stable byte-for-byte.
inline std::string to_json(std::span<const UnitReport> run) {
    nlohmann::ordered_json root = nlohmann::ordered_json::object();
    for (const UnitReport& unit : run) {
        nlohmann::ordered_json unit_obj = nlohmann::ordered_json::object();
        for (const FileReport& file : unit.files) {
            if (file.failure) {
                nlohmann::ordered_json marker = nlohmann::ordered_json::object();
                marker["Line"] = std::to_string(file.failure->line);
                marker["Message"] = file.failure->message;
                nlohmann::ordered_json wrapper = nlohmann::ordered_json::object();
                wrapper["Parse Failure"] = std::move(marker);
                unit_obj[file.path] = std::move(wrapper);
                continue;
            }
            nlohmann::ordered_json records = nlohmann::ordered_json::array();
            for (const Occurrence& occ : file.occurrences) {
                nlohmann::ordered_json record = nlohmann::ordered_json::object();
                record["Class"] = occ.display_name;
                record["Start Line"] = std::to_string(occ.start_line);
                record["End Line"] = std::to_string(occ.end_line);
                record["Displacement"] = std::to_string(occ.displacement);
                record["Level"] = std::string(occ.level.label());
                records.push_back(std::move(record));
            }
            unit_obj[file.path] = std::move(records);
        }
        root[unit.name] = std::move(unit_obj);
    }
    return root.dump(1) + "\n";
}

/// Inverse of to_json, rebuilding the report model (histograms and required
/// levels are recomputed). Only accepts documents this tool produced.
inline std::vector<UnitReport> parse_report_json(std::string_view text) {
    nlohmann::ordered_json root = nlohmann::ordered_json::parse(text);
    std::vector<UnitReport> run;
    for (const auto& [unit_name, unit_obj] : root.items()) {
        std::vector<FileReport> files;
        for (const auto& [path, value] : unit_obj.items()) {
            if (value.is_object()) {
                const auto& marker = value.at("Parse Failure");
                ParseFailure failure;
                failure.path = path;
                failure.line = std::stoi(marker.at("Line").template get<std::string>());
                failure.message = marker.at("Message").template get<std::string>();
                files.push_back(summarize_file(path, {}, std::move(failure)));
                continue;
            }
            std::vector<Occurrence> occurrences;
            for (const auto& record : value) {
                Occurrence occ;
                occ.display_name = record.at("Class").template get<std::string>();
                const ConstructInfo* info = find_construct_by_display_name(occ.display_name);
                if (info == nullptr)
                    throw std::runtime_error("unknown Class in report: " + occ.display_name);
                occ.construct = std::string(info->id);
                occ.start_line = std::stoi(record.at("Start Line").template get<std::string>());
                occ.end_line = std::stoi(record.at("End Line").template get<std::string>());
                occ.displacement =
                    std::stoi(record.at("Displacement").template get<std::string>());
                occ.level = parse_level(record.at("Level").template get<std::string>());
                occurrences.push_back(std::move(occ));
            }
            files.push_back(summarize_file(path, std::move(occurrences)));
        }
        run.push_back(summarize_unit(unit_name, std::move(files)));
    }
    return run;
}

inline std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

/// CSV form: one row per occurrence, plus one `Parse Failure` row (empty level)
/// per unparseable file. Row order matches the JSON record order.
inline std::string to_csv(std::span<const UnitReport> run) {
    std::string out = "unit,file,class,start_line,end_line,displacement,level\n";
    for (const UnitReport& unit : run) {
        for (const FileReport& file : unit.files) {
            if (file.failure) {
                out += csv_escape(unit.name) + "," + csv_escape(file.path) + ",Parse Failure," +
                       std::to_string(file.failure->line) + ",,,\n";
                continue;
            }
            for (const Occurrence& occ : file.occurrences) {
                out += csv_escape(unit.name) + "," + csv_escape(file.path) + "," +
                       csv_escape(occ.display_name) + "," + std::to_string(occ.start_line) + "," +
                       std::to_string(occ.end_line) + "," + std::to_string(occ.displacement) +
                       "," + std::string(occ.level.label()) + "\n";
            }
        }
    }
    return out;
}

/// Human summary: per unit, all six level counts, the required level and the
/// failed-file count.
inline std::string to_terminal(std::span<const UnitReport> run) {
    if (run.empty()) return "No Python files analyzed.\n";
    std::string out;
    bool first = true;
    for (const UnitReport& unit : run) {
        if (!first) out += "\n";
        first = false;
        out += unit.name + "\n";
        for (Level level : all_levels())
            out += "  " + std::string(level.label()) + ": " +
                   std::to_string(unit.histogram.count(level)) + "\n";
        out += "  Required level: ";
        out += unit.required_level ? std::string(unit.required_level->label()) : "unrated";
        out += "\n";
        out += "  Files: " + std::to_string(unit.files.size()) + " analyzed, " +
               std::to_string(unit.files_failed) + " failed to parse\n";
    }
    return out;
}

}  // namespace pyfluency

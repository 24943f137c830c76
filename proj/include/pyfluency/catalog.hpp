#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pyfluency/level.hpp"

namespace pyfluency {

class MalformedConfigError : public std::runtime_error {
public:
    MalformedConfigError(std::string_view what, int line)
        : std::runtime_error("malformed level config at line " + std::to_string(line) + ": " +
                             std::string(what)),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class UnknownConstructError : public std::runtime_error {
public:
    explicit UnknownConstructError(std::string_view id)
        : std::runtime_error("unknown construct id: '" + std::string(id) + "'"),
          id_(id) {}
    UnknownConstructError(std::string_view id, int line)
        : std::runtime_error("unknown construct id: '" + std::string(id) + "' at line " +
                             std::to_string(line)),
          id_(id) {}
    const std::string& construct_id() const { return id_; }

private:
    std::string id_;
};

/// One detectable Python construct: stable kebab-case id, the prose name used in
/// reports, and the level it maps to when no config override is given.
struct ConstructInfo {
    std::string_view id;
    std::string_view display_name;
    Level default_level;
};

/// The full construct catalog. Ids are unique; the detector registers exactly one
/// rule per entry.
inline const std::vector<ConstructInfo>& construct_catalog() {
    static const std::vector<ConstructInfo> catalog = {
        {"print-call", "Print", kA1},
        {"if-statement", "If Statement", kA1},
        {"list-literal", "List", kA1},
        {"for-statement", "For Statement", kA1},
        {"while-statement", "While Statement", kA1},
        {"import", "Import", kA1},
        {"open-call", "Open Function", kA2},
        {"nested-list", "Nested List", kA2},
        {"simple-dictionary", "Simple Dictionary", kA2},
        {"tuple-literal", "Tuple", kA2},
        {"function-def", "Function Definition", kA2},
        {"string-formatting", "String Formatting", kA2},
        {"list-with-dictionary", "List With Dictionary", kB1},
        {"nested-dictionary", "Nested Dictionary", kB1},
        {"with-statement", "With Statement", kB1},
        {"class-def", "Class Definition", kB1},
        {"try-except", "Try Except", kB1},
        {"list-comprehension", "List Comprehension", kB2},
        {"dunder-dict-attribute", "__dict__ Attribute", kB2},
        {"main-guard", "Main Guard", kB2},
        {"dict-of-lists-of-dicts", "Dictionary Of Lists Of Dictionaries", kB2},
        {"lambda-expression", "Lambda Expression", kB2},
        {"star-args", "Star Args", kB2},
        {"generator-expression", "Generator Expression", kB2},
        {"dict-comprehension", "Dict Comprehension", kB2},
        {"set-comprehension", "Set Comprehension", kB2},
        {"property-decorator", "Property Decorator", kB2},
        {"dunder-slots", "__slots__", kC1},
        {"generator-function", "Generator Function", kC1},
        {"function-decorator", "Function Decorator", kC1},
        {"async-function", "Async Function", kC1},
        {"yield-from", "Yield From", kC1},
        {"context-manager-protocol", "Context Manager Protocol", kC1},
        {"metaclass", "Metaclass", kC2},
        {"class-decorator", "Class Decorator", kC2},
    };
    return catalog;
}

inline const ConstructInfo* find_construct(std::string_view id) {
    for (const ConstructInfo& info : construct_catalog())
        if (info.id == id) return &info;
    return nullptr;
}

inline const ConstructInfo* find_construct_by_display_name(std::string_view name) {
    for (const ConstructInfo& info : construct_catalog())
        if (info.display_name == name) return &info;
    return nullptr;
}

/// Returns the report name for an id; throws UnknownConstructError for ids
/// outside the catalog.
inline std::string_view display_name_of(std::string_view id) {
    if (const ConstructInfo* info = find_construct(id)) return info->display_name;
    throw UnknownConstructError(id);
}

/// The construct -> level assignment matrix. Immutable once built; config files
/// may only re-level ids that exist in the catalog.
class LevelMapping {
public:
    enum class Source { BuiltInDefault, ConfigFile };

    static LevelMapping built_in_default() {
        LevelMapping mapping;
        mapping.source_ = Source::BuiltInDefault;
        for (const ConstructInfo& info : construct_catalog())
            mapping.entries_.emplace(std::string(info.id), info.default_level);
        return mapping;
    }

    /// Built-in defaults with the overrides from `config_text` applied.
    ///
    /// Config grammar: one `construct-id: LEVEL` entry per line, `#` starts a
    /// comment, blank lines are skipped. Ids are case-sensitive, labels are not.
    /// The last entry wins when an id is repeated.
    static LevelMapping from_config(std::string_view config_text) {
        LevelMapping mapping = built_in_default();
        mapping.source_ = Source::ConfigFile;

        int line_no = 0;
        size_t pos = 0;
        while (pos <= config_text.size()) {
            size_t eol = config_text.find('\n', pos);
            std::string_view line = config_text.substr(
                pos, eol == std::string_view::npos ? config_text.size() - pos : eol - pos);
            ++line_no;
            if (eol == std::string_view::npos)
                pos = config_text.size() + 1;
            else
                pos = eol + 1;

            if (size_t hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;

            size_t colon = line.find(':');
            if (colon == std::string_view::npos)
                throw MalformedConfigError("expected '<construct-id>: <LEVEL>'", line_no);
            std::string_view id = trim(line.substr(0, colon));
            std::string_view label = trim(line.substr(colon + 1));
            if (id.empty()) throw MalformedConfigError("missing construct id before ':'", line_no);
            if (label.empty()) throw MalformedConfigError("missing level after ':'", line_no);

            Level level = [&] {
                try {
                    return parse_level(label);
                } catch (const UnknownLevelError&) {
                    throw UnknownLevelError(label, line_no);
                }
            }();

            auto it = mapping.entries_.find(id);
            if (it == mapping.entries_.end()) throw UnknownConstructError(id, line_no);
            it->second = level;
        }
        return mapping;
    }

    Level level_for(std::string_view id) const {
        auto it = entries_.find(id);
        if (it == entries_.end()) throw UnknownConstructError(id);
        return it->second;
    }

    bool contains(std::string_view id) const { return entries_.find(id) != entries_.end(); }

    const std::map<std::string, Level, std::less<>>& entries() const { return entries_; }

    Source source() const { return source_; }

private:
    static std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
            s.remove_suffix(1);
        return s;
    }

    std::map<std::string, Level, std::less<>> entries_;
    Source source_ = Source::BuiltInDefault;
};

}  // namespace pyfluency

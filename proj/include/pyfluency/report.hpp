#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pyfluency/ast.hpp"
#include "pyfluency/detector.hpp"
#include "pyfluency/level.hpp"

namespace pyfluency {

/// Per-level occurrence counts; all six levels always present.
struct LevelHistogram {
    std::array<std::int64_t, Level::kCount> counts{};

    std::int64_t count(Level level) const { return counts[level.rank() - 1]; }

    void add(Level level, std::int64_t n = 1) { counts[level.rank() - 1] += n; }

    LevelHistogram& operator+=(const LevelHistogram& other) {
        for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
        return *this;
    }

    std::int64_t total() const {
        std::int64_t sum = 0;
        for (std::int64_t c : counts) sum += c;
        return sum;
    }

    friend bool operator==(const LevelHistogram&, const LevelHistogram&) = default;
};

struct FileReport {
    std::string path;  // unit-relative
    std::vector<Occurrence> occurrences;
    LevelHistogram histogram;
    std::optional<Level> required_level;
    std::optional<ParseFailure> failure;
};

struct UnitReport {
    std::string name;
    std::vector<FileReport> files;  // sorted by path
    LevelHistogram histogram;
    std::optional<Level> required_level;
    std::size_t files_failed = 0;
};

/// Folds one file's occurrences (ordered as produced by detect) into a report.
inline FileReport summarize_file(std::string path, std::vector<Occurrence> occurrences,
                                 std::optional<ParseFailure> failure = std::nullopt) {
    FileReport report;
    report.path = std::move(path);
    report.occurrences = std::move(occurrences);
    report.failure = std::move(failure);
    for (const Occurrence& occ : report.occurrences) {
        report.histogram.add(occ.level);
        if (!report.required_level || occ.level > *report.required_level)
            report.required_level = occ.level;
    }
    return report;
}

/// Folds file reports into a unit report. Files are sorted by path so the
/// result does not depend on production order.
inline UnitReport summarize_unit(std::string name, std::vector<FileReport> files) {
    UnitReport unit;
    unit.name = std::move(name);
    unit.files = std::move(files);
    std::sort(unit.files.begin(), unit.files.end(),
              [](const FileReport& a, const FileReport& b) { return a.path < b.path; });
    for (const FileReport& file : unit.files) {
        unit.histogram += file.histogram;
        if (file.required_level &&
            (!unit.required_level || *file.required_level > *unit.required_level))
            unit.required_level = file.required_level;
        if (file.failure) ++unit.files_failed;
    }
    return unit;
}

}  // namespace pyfluency

#pragma once

#include <array>
#include <compare>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pyfluency {

class UnknownLevelError : public std::runtime_error {
public:
    explicit UnknownLevelError(std::string_view text)
        : std::runtime_error("unknown proficiency level: '" + std::string(text) +
                             "' (expected one of A1, A2, B1, B2, C1, C2)") {}
    UnknownLevelError(std::string_view text, int line)
        : std::runtime_error("unknown proficiency level: '" + std::string(text) + "' at line " +
                             std::to_string(line) + " (expected one of A1, A2, B1, B2, C1, C2)") {}
};

/// One of the six CEFR proficiency ranks, totally ordered A1 < A2 < ... < C2.
/// Labels are the only serialized form; the numeric rank is internal.
class Level {
public:
    static constexpr int kCount = 6;

    static constexpr Level from_rank(int rank) {
        if (rank < 1 || rank > kCount)
            throw std::out_of_range("level rank must be in 1..6");
        return Level(rank);
    }

    constexpr int rank() const { return rank_; }

    constexpr std::string_view label() const { return kLabels[rank_ - 1]; }

    /// 'A', 'B' or 'C'.
    constexpr char group() const { return kLabels[rank_ - 1][0]; }

    friend constexpr auto operator<=>(Level, Level) = default;

private:
    explicit constexpr Level(int rank) : rank_(rank) {}

    static constexpr std::array<std::string_view, kCount> kLabels = {"A1", "A2", "B1",
                                                                     "B2", "C1", "C2"};
    int rank_;
};

inline constexpr Level kA1 = Level::from_rank(1);
inline constexpr Level kA2 = Level::from_rank(2);
inline constexpr Level kB1 = Level::from_rank(3);
inline constexpr Level kB2 = Level::from_rank(4);
inline constexpr Level kC1 = Level::from_rank(5);
inline constexpr Level kC2 = Level::from_rank(6);

inline constexpr std::array<Level, Level::kCount> all_levels() {
    return {kA1, kA2, kB1, kB2, kC1, kC2};
}

/// The A/B/C grouping above the six levels.
struct LevelGroup {
    char label;
    std::string_view description;
};

inline constexpr LevelGroup group_of(Level level) {
    switch (level.group()) {
    case 'A': return {'A', "Basic user"};
    case 'B': return {'B', "Independent user"};
    default: return {'C', "Proficient user"};
    }
}

/// Parses a level label, ignoring surrounding whitespace and case.
/// Throws UnknownLevelError for anything outside the closed six-label set.
inline Level parse_level(std::string_view text) {
    size_t begin = 0, end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    std::string label;
    for (size_t i = begin; i < end; ++i)
        label.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text[i]))));
    for (Level level : all_levels())
        if (level.label() == label) return level;
    throw UnknownLevelError(text);
}

/// Highest level in the sequence; empty input carries no evidence and yields nullopt.
inline std::optional<Level> max_level(const std::vector<Level>& levels) {
    std::optional<Level> best;
    for (Level level : levels)
        if (!best || level > *best) best = level;
    return best;
}

/// A competency suffices for an occurrence of `required` iff it ranks at least as high.
inline constexpr bool suffices_for(Level competency, Level required) {
    return competency >= required;
}

}  // namespace pyfluency

#pragma once

#include <string>

namespace pyfluency {

/// One Python file queued for analysis. `rel_path` is the path reported under
/// the unit (repository or directory) the file came from.
struct SourceFile {
    std::string path;      // where the file was read from
    std::string rel_path;  // unit-relative display path
    std::string unit;      // enclosing source unit name
    std::string content;   // raw bytes, expected UTF-8
};

}  // namespace pyfluency

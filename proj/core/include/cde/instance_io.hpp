#pragma once

#include <string>

#include "cde/model.hpp"

namespace cde {

/// Parses `{"L": 7, "has_sets": [[1,3],[2]]}`. Shape errors throw
/// InvalidInstance; content is not validated here.
RawInstance parse_instance(const std::string& text);

/// Reads and validates an instance file.
Instance load_instance(const std::string& path);

/// Compact single-line encoding in the same format.
std::string serialize_instance(const Instance& instance);

}  // namespace cde

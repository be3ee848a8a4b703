#pragma once
// JSON instance files, schema_version "1".
//
//   {"schema_version": "1", "kind": "multiscale", "name": ..., "description": ...,
//    "first_stage": {"c": [...], "rows": [{"coeffs": {"0": 1.5}, "sense": "LE", "rhs": 2}],
//                    "x_upper": [...], "x_lower": [...]},
//    "subperiods": [{"weight": 1, "q": [...], "y_upper": [...],
//                    "rows": [{"x_coeffs": {...}, "y_coeffs": {...}, "sense": "GE", "rhs": 1}]}]}
//
//   {"schema_version": "1", "kind": "capacity", "J": 2, "I": 3, "S": 3,
//    "a": [[[...]]], "c": [...], "d": [[...]], "f": [[...]], "g": [...]}
//
// x_upper, x_lower and y_upper are optional; null stands for an infinite bound.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "msopt/model.hpp"

namespace msopt {

using AnyInstance = std::variant<MultiScaleInstance, CapacityInstance>;

inline constexpr std::string_view kSchemaVersion = "1";

// Throws ParseError / SchemaVersionMismatch.
AnyInstance parse_instance(std::string_view text);
AnyInstance read_instance(const std::filesystem::path& path);

std::string dump_instance(const MultiScaleInstance& inst);
std::string dump_instance(const CapacityInstance& cap);
void write_instance(const MultiScaleInstance& inst, const std::filesystem::path& path);
void write_instance(const CapacityInstance& cap, const std::filesystem::path& path);

// Capacity instances are lowered; multiscale ones are returned as is.
MultiScaleInstance as_multiscale(const AnyInstance& any);

}  // namespace msopt

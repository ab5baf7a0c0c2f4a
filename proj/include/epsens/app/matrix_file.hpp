#pragma once

// JSON matrix files:
//   {"dim": m, "entries": [[[re, im], ...], ...],
//    "model": {"family": ..., "omega_ep": [re, im], "order": n,
//              "truncated": bool, "h_prime": [[[re, im], ...], ...]}}
// Entries are row-major; "model" is optional and "family" within it too.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "epsens/linalg.hpp"
#include "epsens/models.hpp"

namespace epsens::app {

/// Malformed or invalid input. `position` is the byte offset for JSON syntax
/// errors and empty for schema violations.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::optional<std::size_t> position = std::nullopt);
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    std::optional<std::size_t> position_;
};

struct ModelMeta {
    std::optional<std::string> family;
    Complex omega_ep;
    std::size_t order = 0;
    bool truncated = false;
    Matrix h_prime;
};

struct MatrixFile {
    Matrix entries;
    std::optional<ModelMeta> model;
};

MatrixFile parse_matrix_file(std::string_view text);
MatrixFile read_matrix_file(const std::string& path);

/// Two-space indented JSON with a trailing newline. Key order is fixed, so
/// parse followed by serialize reproduces a serialized file byte for byte.
std::string serialize_matrix_file(const MatrixFile& file);

/// The EP matrix with its model block.
MatrixFile to_matrix_file(const NearEPModel& model, std::optional<std::string> family = std::nullopt);

/// Throws ParseError when the file has no model block.
NearEPModel to_model(const MatrixFile& file);

}  // namespace epsens::app

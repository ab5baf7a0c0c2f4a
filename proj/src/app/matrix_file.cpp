#include "epsens/app/matrix_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace epsens::app {

using Json = nlohmann::ordered_json;

namespace {

double finite_number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ParseError(where + ": non-finite number");
    return x;
}

Complex complex_from(const Json& j, const std::string& where) {
    if (j.is_number()) return finite_number(j, where);
    if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [re, im]");
    return {finite_number(j[0], where), finite_number(j[1], where)};
}

Json complex_to(Complex z) { return Json::array({z.real(), z.imag()}); }

Matrix matrix_from(const Json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array() || j.size() != dim)
        throw ParseError(where + ": expected " + std::to_string(dim) + " rows");
    Matrix x(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const Json& row = j[r];
        const std::string at = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != dim)
            throw ParseError(at + ": expected " + std::to_string(dim) + " entries");
        for (std::size_t c = 0; c < dim; ++c) x(r, c) = complex_from(row[c], at + "[" + std::to_string(c) + "]");
    }
    return x;
}

Json matrix_to(const Matrix& x) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < x.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < x.dim(); ++c) row.push_back(complex_to(x(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::optional<std::size_t> position)
    : std::runtime_error(position ? what + " (at byte " + std::to_string(*position) + ")" : what),
      position_(position) {}

MatrixFile parse_matrix_file(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    if (!doc.is_object()) throw ParseError("top level must be an object");
    if (!doc.contains("dim") || !doc["dim"].is_number_unsigned()) throw ParseError("dim: expected a positive integer");
    const auto dim = doc["dim"].get<std::size_t>();
    if (dim == 0) throw ParseError("dim: expected a positive integer");
    if (!doc.contains("entries")) throw ParseError("entries: missing");

    MatrixFile file;
    file.entries = matrix_from(doc["entries"], dim, "entries");
    if (doc.contains("model")) {
        const Json& m = doc["model"];
        if (!m.is_object()) throw ParseError("model: expected an object");
        ModelMeta meta;
        if (m.contains("family")) {
            if (!m["family"].is_string()) throw ParseError("model.family: expected a string");
            meta.family = m["family"].get<std::string>();
        }
        if (!m.contains("omega_ep")) throw ParseError("model.omega_ep: missing");
        meta.omega_ep = complex_from(m["omega_ep"], "model.omega_ep");
        if (!m.contains("order") || !m["order"].is_number_unsigned())
            throw ParseError("model.order: expected a positive integer");
        meta.order = m["order"].get<std::size_t>();
        if (meta.order < 2 || meta.order > dim) throw ParseError("model.order: must satisfy 2 <= order <= dim");
        if (!m.contains("truncated") || !m["truncated"].is_boolean())
            throw ParseError("model.truncated: expected a boolean");
        meta.truncated = m["truncated"].get<bool>();
        if (!m.contains("h_prime")) throw ParseError("model.h_prime: missing");
        meta.h_prime = matrix_from(m["h_prime"], dim, "model.h_prime");
        file.model = std::move(meta);
    }
    return file;
}

MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix_file(buf.str());
}

std::string serialize_matrix_file(const MatrixFile& file) {
    Json doc;
    doc["dim"] = file.entries.dim();
    doc["entries"] = matrix_to(file.entries);
    if (file.model) {
        Json m;
        if (file.model->family) m["family"] = *file.model->family;
        m["omega_ep"] = complex_to(file.model->omega_ep);
        m["order"] = file.model->order;
        m["truncated"] = file.model->truncated;
        m["h_prime"] = matrix_to(file.model->h_prime);
        doc["model"] = std::move(m);
    }
    return doc.dump(2) + "\n";
}

MatrixFile to_matrix_file(const NearEPModel& model, std::optional<std::string> family) {
    return {model.h_at_ep, ModelMeta{std::move(family), model.omega_ep, model.order, model.truncated, model.h_prime}};
}

NearEPModel to_model(const MatrixFile& file) {
    if (!file.model) throw ParseError("model block required");
    NearEPModel m;
    m.h_at_ep = file.entries;
    m.h_prime = file.model->h_prime;
    m.omega_ep = file.model->omega_ep;
    m.order = file.model->order;
    m.truncated = file.model->truncated;
    return m;
}

}  // namespace epsens::app

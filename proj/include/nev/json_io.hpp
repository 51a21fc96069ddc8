#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nev/matrix.hpp"
#include "nev/realization.hpp"

namespace nev {

using json = nlohmann::json;  // ordered by key, so dumps are canonical

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) throw ValidationError("schema_violation", what + " must be an array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    if (rows > 0) {
        if (!j[0].is_array())
            throw ValidationError("schema_violation", what + " rows must be arrays");
        cols = j[0].size();
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ValidationError("schema_violation", what + " is ragged");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = j[i][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ValidationError("schema_violation",
                                      what + " entries must be [re, im] number pairs");
            m(i, c) = cplx{e[0].get<double>(), e[1].get<double>()};
        }
    }
    if (!m.all_finite())
        throw ValidationError("schema_violation", what + " contains non-finite entries");
    return m;
}

/// On-disk form of a realization; see the fixtures for worked examples.
struct RealizationDocument {
    std::string schema_version = "1";
    Realization realization;
    json metadata = json::object();
};

inline RealizationDocument document_from_json(const json& doc, const Tolerance& tol = {}) {
    if (!doc.is_object()) throw ValidationError("schema_violation", "document must be an object");
    RealizationDocument out;
    out.schema_version = doc.value("schema_version", std::string{"1"});
    if (out.schema_version != "1")
        throw ValidationError("schema_violation", "unsupported schema_version");
    if (!doc.contains("space") || !doc["space"].is_object())
        throw ValidationError("schema_violation", "missing space object");
    const json& space = doc["space"];
    if (!space.contains("dim") || !space["dim"].is_number_unsigned())
        throw ValidationError("schema_violation", "space.dim must be a nonnegative integer");
    const std::size_t dim = space["dim"].get<std::size_t>();
    const Matrix j_mat = matrix_from_json(space.at("J"), "space.J");
    if (j_mat.rows() != dim)
        throw ValidationError("schema_violation", "space.J dimension disagrees with space.dim");
    const Matrix a = matrix_from_json(doc.at("A"), "A");
    const Matrix gamma = matrix_from_json(doc.at("Gamma"), "Gamma");
    std::optional<Matrix> s;
    if (doc.contains("S") && !doc["S"].is_null()) s = matrix_from_json(doc["S"], "S");
    out.realization = make_realization(j_mat, a, gamma, std::move(s), tol);
    if (doc.contains("metadata")) out.metadata = doc["metadata"];
    return out;
}

inline json document_to_json(const RealizationDocument& doc) {
    json out;
    out["schema_version"] = doc.schema_version;
    out["space"] = {{"dim", doc.realization.state_dim()},
                    {"J", matrix_to_json(doc.realization.sym.j)}};
    out["A"] = matrix_to_json(doc.realization.a);
    out["Gamma"] = matrix_to_json(doc.realization.gamma);
    if (doc.realization.s) out["S"] = matrix_to_json(*doc.realization.s);
    out["metadata"] = doc.metadata;
    return out;
}

inline RealizationDocument load_document(const std::string& path, const Tolerance& tol = {}) {
    std::ifstream in(path);
    if (!in) throw ValidationError("input_unreadable", "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError("schema_violation", std::string("JSON parse error: ") + e.what());
    }
    return document_from_json(doc, tol);
}

/// FNV-1a over the canonical serialization; identifies inputs in reports.
inline std::string digest(const json& doc) {
    const std::string bytes = doc.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace nev

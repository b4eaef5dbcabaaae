// SPDX-License-Identifier: Apache-2.0
#include "core/chain_json.hpp"

#include <json.hpp>

#include "core/error.hpp"

namespace mch {

namespace {

using nlohmann::json;

Vector to_vector(const json& node, const char* field) {
    if (!node.is_array()) fail(ErrorCode::Parse, std::string("\"") + field + "\" must be an array of numbers");
    Vector out;
    out.reserve(node.size());
    for (const auto& x : node) {
        if (!x.is_number()) fail(ErrorCode::Parse, std::string("\"") + field + "\" must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Matrix to_matrix(const json& node, const char* field) {
    if (!node.is_array() || node.empty()) {
        fail(ErrorCode::Parse, std::string("\"") + field + "\" must be a non-empty array of rows");
    }
    std::vector<Vector> rows;
    rows.reserve(node.size());
    for (const auto& r : node) rows.push_back(to_vector(r, field));
    return Matrix::from_rows(rows);
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        rows.push_back(json(std::vector<double>(r.begin(), r.end())));
    }
    return rows;
}

}  // namespace

ChainDocument parse_chain_json(std::string_view text, const Tolerances& tol) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, std::string("chain JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(ErrorCode::Parse, "chain JSON must be an object");
    if (!doc.contains("transition")) fail(ErrorCode::Parse, "chain JSON is missing \"transition\"");

    std::optional<Vector> stationary;
    if (doc.contains("stationary") && !doc["stationary"].is_null()) {
        stationary = to_vector(doc["stationary"], "stationary");
    }
    MarkovChain chain = validate_chain(to_matrix(doc["transition"], "transition"), std::move(stationary), tol);

    std::optional<FunctionFamily> functions;
    if (doc.contains("functions") && !doc["functions"].is_null()) {
        const json& f = doc["functions"];
        if (!f.is_object() || !f.contains("values")) {
            fail(ErrorCode::Parse, "\"functions\" must be an object with \"values\"");
        }
        Vector bounds;
        if (f.contains("bounds") && !f["bounds"].is_null()) bounds = to_vector(f["bounds"], "bounds");
        functions.emplace(to_matrix(f["values"], "values"), std::move(bounds), tol);
        require_mean_zero(*functions, chain, tol);
    }
    return ChainDocument{std::move(chain), std::move(functions)};
}

std::string chain_to_json(const MarkovChain& chain, const FunctionFamily* functions) {
    json doc;
    doc["transition"] = matrix_json(chain.transition());
    doc["stationary"] = chain.stationary();
    if (functions != nullptr) {
        doc["functions"] = {{"values", matrix_json(functions->values())}, {"bounds", functions->bounds()}};
    }
    return doc.dump(2);
}

}  // namespace mch

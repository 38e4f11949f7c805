#ifndef RISKWARN_SERIALIZE_HPP
#define RISKWARN_SERIALIZE_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskwarn/bpnet.hpp"
#include "riskwarn/dataprep.hpp"
#include "riskwarn/logit.hpp"
#include "riskwarn/timeseries.hpp"
#include "riskwarn/warning.hpp"

namespace riskwarn::serialize {

// ordered_json keeps insertion order, so emitted files are diff-stable.
using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

// ============================================================================
// Schema validation helpers
// ============================================================================

namespace detail_json {

inline const json& require(const json& j, const char* field) {
    if (!j.is_object() || !j.contains(field)) {
        throw std::runtime_error(std::string("schema: missing field '") + field + "'");
    }
    return j.at(field);
}

inline double number(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number()) {
        throw std::runtime_error(std::string("schema: field '") + field + "' must be a number");
    }
    return v.get<double>();
}

inline int integer(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number_integer()) {
        throw std::runtime_error(std::string("schema: field '") + field + "' must be an integer");
    }
    return v.get<int>();
}

inline std::string text(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_string()) {
        throw std::runtime_error(std::string("schema: field '") + field + "' must be a string");
    }
    return v.get<std::string>();
}

inline std::vector<double> number_array(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_array()) {
        throw std::runtime_error(std::string("schema: field '") + field + "' must be an array");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) {
            throw std::runtime_error(std::string("schema: field '") + field +
                                     "' must contain only numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

inline std::vector<std::vector<double>> matrix(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_array()) {
        throw std::runtime_error(std::string("schema: field '") + field + "' must be an array");
    }
    std::vector<std::vector<double>> out;
    for (const auto& row : v) {
        if (!row.is_array()) {
            throw std::runtime_error(std::string("schema: field '") + field +
                                     "' must be an array of arrays");
        }
        std::vector<double> r;
        for (const auto& e : row) {
            if (!e.is_number()) {
                throw std::runtime_error(std::string("schema: field '") + field +
                                         "' must contain only numbers");
            }
            r.push_back(e.get<double>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline void check_version(const json& j) {
    const int v = integer(j, "format_version");
    if (v != kFormatVersion) {
        throw std::runtime_error("schema: unsupported format_version " + std::to_string(v));
    }
}

}  // namespace detail_json

// ============================================================================
// Activations / BP network
// ============================================================================

inline json to_json(const bpnet::Activation& a) {
    return json{{"kind", bpnet::activation_kind_name(a.kind)}, {"alpha", a.alpha}};
}

inline bpnet::Activation activation_from_json(const json& j, const char* field) {
    const json& v = detail_json::require(j, field);
    bpnet::Activation a;
    a.kind = bpnet::activation_kind_from_name(detail_json::text(v, "kind"));
    a.alpha = detail_json::number(v, "alpha");
    return a;
}

inline json to_json(const bpnet::Network& net) {
    json w1 = json::array();
    for (int j = 0; j < net.hidden; ++j) {
        json row = json::array();
        for (int i = 0; i < net.inputs; ++i) {
            row.push_back(net.w1[static_cast<std::size_t>(j) * static_cast<std::size_t>(net.inputs) +
                                 static_cast<std::size_t>(i)]);
        }
        w1.push_back(std::move(row));
    }
    json w2 = json::array();
    {
        json row = json::array();
        for (double v : net.w2) row.push_back(v);
        w2.push_back(std::move(row));
    }
    return json{{"n", net.inputs},
                {"r", net.hidden},
                {"hidden_activation", to_json(net.hidden_activation)},
                {"output_activation", to_json(net.output_activation)},
                {"W1", std::move(w1)},
                {"b1", net.b1},
                {"W2", std::move(w2)},
                {"b2", net.b2},
                {"format_version", kFormatVersion}};
}

inline bpnet::Network network_from_json(const json& j) {
    detail_json::check_version(j);
    bpnet::Network net;
    net.inputs = detail_json::integer(j, "n");
    net.hidden = detail_json::integer(j, "r");
    net.hidden_activation = activation_from_json(j, "hidden_activation");
    net.output_activation = activation_from_json(j, "output_activation");

    const auto w1 = detail_json::matrix(j, "W1");
    if (w1.size() != static_cast<std::size_t>(net.hidden)) {
        throw std::runtime_error("schema: field 'W1' must have r rows");
    }
    for (const auto& row : w1) {
        if (row.size() != static_cast<std::size_t>(net.inputs)) {
            throw std::runtime_error("schema: field 'W1' must have n columns per row");
        }
        net.w1.insert(net.w1.end(), row.begin(), row.end());
    }
    net.b1 = detail_json::number_array(j, "b1");

    const auto w2 = detail_json::matrix(j, "W2");
    if (w2.size() != 1) throw std::runtime_error("schema: field 'W2' must have exactly one row");
    net.w2 = w2[0];
    net.b2 = detail_json::number(j, "b2");
    net.validate();
    return net;
}

// ============================================================================
// Logistic model
// ============================================================================

inline json to_json(const logit::LogitModel& model) {
    return json{{"c0", model.c0},
                {"coeffs", model.coeffs},
                {"threshold", model.threshold},
                {"format_version", kFormatVersion}};
}

inline logit::LogitModel logit_from_json(const json& j) {
    detail_json::check_version(j);
    logit::LogitModel model;
    model.c0 = detail_json::number(j, "c0");
    model.coeffs = detail_json::number_array(j, "coeffs");
    model.threshold = detail_json::number(j, "threshold");
    model.validate();
    return model;
}

// ============================================================================
// Time-series models
// ============================================================================

inline json to_json(const timeseries::ArmaModel& model) {
    return json{{"p", model.p},
                {"q", model.q},
                {"c", model.c},
                {"phi", model.phi},
                {"theta", model.theta},
                {"sigma2", model.sigma2},
                {"format_version", kFormatVersion}};
}

inline timeseries::ArmaModel arma_from_json(const json& j) {
    detail_json::check_version(j);
    timeseries::ArmaModel model;
    model.p = detail_json::integer(j, "p");
    model.q = detail_json::integer(j, "q");
    model.c = detail_json::number(j, "c");
    model.phi = detail_json::number_array(j, "phi");
    model.theta = detail_json::number_array(j, "theta");
    model.sigma2 = detail_json::number(j, "sigma2");
    model.validate();
    return model;
}

inline json to_json(const timeseries::ArchModel& model) {
    return json{{"b", model.b},
                {"a0", model.a0},
                {"a", model.a},
                {"format_version", kFormatVersion}};
}

inline timeseries::ArchModel arch_from_json(const json& j) {
    detail_json::check_version(j);
    timeseries::ArchModel model;
    model.b = detail_json::number(j, "b");
    model.a0 = detail_json::number(j, "a0");
    model.a = detail_json::number_array(j, "a");
    model.validate();
    return model;
}

// ============================================================================
// Normalizer / metrics / warning reports
// ============================================================================

inline json to_json(const dataprep::NormalizationSpec& spec) {
    json constant = json::array();
    for (bool b : spec.constant) constant.push_back(b);
    return json{{"min", spec.min}, {"max", spec.max}, {"constant", std::move(constant)}};
}

inline dataprep::NormalizationSpec normalizer_from_json(const json& j) {
    dataprep::NormalizationSpec spec;
    spec.min = detail_json::number_array(j, "min");
    spec.max = detail_json::number_array(j, "max");
    const json& c = detail_json::require(j, "constant");
    if (!c.is_array()) throw std::runtime_error("schema: field 'constant' must be an array");
    for (const auto& e : c) {
        if (!e.is_boolean()) {
            throw std::runtime_error("schema: field 'constant' must contain only booleans");
        }
        spec.constant.push_back(e.get<bool>());
    }
    if (spec.min.size() != spec.max.size() || spec.min.size() != spec.constant.size()) {
        throw std::runtime_error("schema: field 'constant' length mismatch in normalizer");
    }
    return spec;
}

inline json to_json(const warning::EvalMetrics& m) {
    return json{{"tp", m.tp},
                {"fp", m.fp},
                {"tn", m.tn},
                {"fn", m.fn},
                {"accuracy", m.accuracy},
                {"type_i_error", m.type_i_error},
                {"type_ii_error", m.type_ii_error}};
}

inline json to_json(const warning::WarningReport& r) {
    json j{{"id", r.id}};
    j["p_bpnet"] = r.p_bpnet ? json(*r.p_bpnet) : json(nullptr);
    j["p_logit"] = r.p_logit ? json(*r.p_logit) : json(nullptr);
    j["consensus"] = r.consensus;
    j["grade"] = warning::grade_name(r.grade);
    j["rationale"] = r.rationale;
    return j;
}

inline json to_json(const std::vector<warning::WarningReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

// ============================================================================
// File helpers
// ============================================================================

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

}  // namespace riskwarn::serialize

#endif  // RISKWARN_SERIALIZE_HPP

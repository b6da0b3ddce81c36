#include "scq/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scq/errors.hpp"

namespace scq {

using nlohmann::json;

namespace {

int line_of(const std::string& text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

Matrix to_matrix(const json& j, const char* name) {
    if (!j.is_array()) throw ParseError(std::string(name) + " must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Matrix(0, 0);
    if (!j[0].is_array()) throw ParseError(std::string(name) + " must be an array of rows");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ParseError(std::string(name) + " row " + std::to_string(r) + " has the wrong length");
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!row[c].is_number()) throw ParseError(std::string(name) + " entries must be numbers");
            m(r, c) = row[c].get<double>();
        }
    }
    return m;
}

Vector to_vector(const json& j, const char* name) {
    if (!j.is_array()) throw ParseError(std::string(name) + " must be an array");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ParseError(std::string(name) + " entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

json from_matrix(const Matrix& m) {
    json j = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

json from_vector(const Vector& v) {
    json j = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

json parse_json(const std::string& text) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ParseError("empty input");
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

CircuitHamiltonian parse_hamiltonian(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw ParseError("top level must be an object");
    for (const char* key : {"mode_kinds", "C_inv", "M0"})
        if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");

    HamiltonianInputs in;
    try {
        for (const json& k : j.at("mode_kinds")) in.kinds.push_back(mode_kind_from_string(k.get<std::string>()));
        in.C_inv = to_matrix(j.at("C_inv"), "C_inv");
        in.M0 = to_matrix(j.at("M0"), "M0");
        if (j.contains("E_J"))
            for (const json& e : j.at("E_J")) {
                Junction jn;
                jn.energy = e.at("value").get<double>();
                jn.sign = e.contains("sign") ? e.at("sign").get<int>() : 1;
                in.junctions.push_back(jn);
            }
        if (j.contains("N")) in.N_ext = to_matrix(j.at("N"), "N");
        if (j.contains("Phi_x")) in.Phi_x = to_vector(j.at("Phi_x"), "Phi_x");
        if (j.contains("C_V")) in.C_V = to_matrix(j.at("C_V"), "C_V");
        if (j.contains("V")) in.V = to_vector(j.at("V"), "V");
        if (j.contains("J_args")) in.J_args = to_matrix(j.at("J_args"), "J_args");
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    const auto n = static_cast<int>(in.kinds.size());
    if (j.contains("n") && j.at("n").get<int>() != n)
        throw ParseError("n=" + std::to_string(j.at("n").get<int>()) + " but " + std::to_string(n) + " mode kinds");
    if (j.contains("n_J")) {
        const auto n_j = std::count(in.kinds.begin(), in.kinds.end(), ModeKind::Junction);
        if (j.at("n_J").get<int>() != n_j) throw ParseError("n_J does not match mode_kinds");
    }
    if (in.N_ext.size() > 0 && in.Phi_x.size() == 0) in.Phi_x = Vector::Zero(in.N_ext.cols());
    if (in.C_V.size() > 0 && in.V.size() == 0) in.V = Vector::Zero(in.C_V.cols());
    return make_hamiltonian(std::move(in));
}

CircuitHamiltonian load_hamiltonian(const std::string& path) { return parse_hamiltonian(read_file(path)); }

std::string dump_hamiltonian(const CircuitHamiltonian& h) {
    json j;
    j["n"] = h.n();
    j["n_J"] = h.n_junction_modes();
    j["mode_kinds"] = json::array();
    for (ModeKind k : h.kinds) j["mode_kinds"].push_back(to_string(k));
    j["C_inv"] = from_matrix(h.C_inv);
    j["M0"] = from_matrix(h.M0);
    if (h.N_ext.cols() > 0) {
        j["N"] = from_matrix(h.N_ext);
        j["Phi_x"] = from_vector(h.Phi_x);
    }
    if (h.C_V.cols() > 0) {
        j["C_V"] = from_matrix(h.C_V);
        j["V"] = from_vector(h.V);
    }
    j["E_J"] = json::array();
    for (const Junction& jn : h.junctions) j["E_J"].push_back({{"value", jn.energy}, {"sign", jn.sign}});
    j["J_args"] = from_matrix(h.J_args);
    return j.dump(2) + "\n";
}

void save_hamiltonian(const CircuitHamiltonian& h, const std::string& path) { write_file(path, dump_hamiltonian(h)); }

std::string dump_transform(const CanonicalTransform& t) {
    json j;
    j["W"] = from_matrix(t.W());
    j["W_inv"] = from_matrix(t.W_inv());
    j["residual"] = t.residual();
    return j.dump(2) + "\n";
}

void save_transform(const CanonicalTransform& t, const std::string& path) { write_file(path, dump_transform(t)); }

CanonicalTransform load_transform(const std::string& path) {
    const json j = parse_json(read_file(path));
    try {
        CanonicalTransform t(to_matrix(j.at("W"), "W"), to_matrix(j.at("W_inv"), "W_inv"));
        const double stored = j.at("residual").get<double>();
        if (std::abs(stored - t.residual()) > 1e-12 + 1e-6 * stored)
            throw ParseError("stored residual does not match W * W_inv");
        return t;
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
    text_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw DimensionError("CSV row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + format(values[i]);
    text_ += "\n";
}

std::string CsvWriter::str() const { return text_; }

std::string CsvWriter::format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace scq

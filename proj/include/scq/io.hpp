#pragma once

// JSON Hamiltonian and transform files, CSV tables.

#include <iosfwd>
#include <string>
#include <vector>

#include "scq/canonical.hpp"

namespace scq {

/// Parses the Hamiltonian JSON format. Throws ParseError (with line numbers for syntax
/// errors) or the model's validation errors.
CircuitHamiltonian parse_hamiltonian(const std::string& text);
CircuitHamiltonian load_hamiltonian(const std::string& path);
std::string dump_hamiltonian(const CircuitHamiltonian& h);
void save_hamiltonian(const CircuitHamiltonian& h, const std::string& path);

std::string dump_transform(const CanonicalTransform& t);
void save_transform(const CanonicalTransform& t, const std::string& path);
/// Rejects files whose stored residual disagrees with the recomputed one.
CanonicalTransform load_transform(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Comma-separated table, 12 significant digits, LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    std::string str() const;

    static std::string format(double v);

private:
    std::string text_;
    std::size_t columns_;
};

}  // namespace scq

#include "chebfd/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chebfd {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

template <class S>
SparseMatrix<S> read_body(std::istream& in, const std::string& symmetry, bool integer_field,
                          const std::string& path) {
    std::string line;
    Index rows = 0, cols = 0, nnz = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        if (!(ls >> rows >> cols >> nnz))
            throw std::runtime_error(path + ": malformed size line");
        break;
    }
    if (rows != cols) throw std::runtime_error(path + ": matrix is not square");

    constexpr bool complex_scalar = std::is_same_v<S, Complex>;
    typename SparseMatrix<S>::Builder b(rows);
    Index seen = 0;
    while (seen < nnz && std::getline(in, line)) {
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ls(line);
        Index i, j;
        double re = 0.0, im = 0.0;
        if (!(ls >> i >> j)) throw std::runtime_error(path + ": malformed entry line");
        if (!(ls >> re)) throw std::runtime_error(path + ": missing value");
        if (complex_scalar && !(ls >> im)) throw std::runtime_error(path + ": missing imaginary part");
        (void)integer_field;  // integers parse as doubles
        --i;
        --j;
        S v;
        if constexpr (complex_scalar)
            v = Complex(re, im);
        else
            v = re;
        b.add(i, j, v);
        if (i != j) {
            if (symmetry == "symmetric") b.add(j, i, v);
            if (symmetry == "hermitian") b.add(j, i, ScalarTraits<S>::conj(v));
        }
        ++seen;
    }
    if (seen != nnz) throw std::runtime_error(path + ": fewer entries than declared");
    const bool hermitian = symmetry != "general";
    return std::move(b).build(hermitian);
}

template <class S>
void write_impl(const std::string& path, const SparseMatrix<S>& a) {
    constexpr bool complex_scalar = std::is_same_v<S, Complex>;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const bool herm = a.hermitian_flag();
    const char* field = complex_scalar ? "complex" : "real";
    const char* symmetry = herm ? (complex_scalar ? "hermitian" : "symmetric") : "general";
    out << "%%MatrixMarket matrix coordinate " << field << " " << symmetry << "\n";

    const auto& offs = a.row_offsets();
    const auto& cols = a.col_indices();
    const auto& vals = a.values();
    Index count = 0;
    for (Index i = 0; i < a.dim(); ++i)
        for (Index p = offs[i]; p < offs[i + 1]; ++p)
            if (!herm || cols[p] <= i) ++count;  // lower triangle for symmetric storage

    out << a.dim() << " " << a.dim() << " " << count << "\n";
    out.precision(17);
    for (Index i = 0; i < a.dim(); ++i)
        for (Index p = offs[i]; p < offs[i + 1]; ++p) {
            if (herm && cols[p] > i) continue;
            out << (i + 1) << " " << (cols[p] + 1) << " ";
            if constexpr (complex_scalar)
                out << vals[p].real() << " " << vals[p].imag() << "\n";
            else
                out << vals[p] << "\n";
        }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

MatrixVariant read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("%%MatrixMarket", 0) != 0)
        throw std::runtime_error(path + ": missing MatrixMarket banner");
    std::istringstream hs(lower(header.substr(2)));
    std::string tag, object, format, field, symmetry;
    hs >> tag >> object >> format >> field >> symmetry;
    if (object != "matrix" || format != "coordinate")
        throw std::runtime_error(path + ": only coordinate matrices are supported");
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian")
        throw std::runtime_error(path + ": unsupported symmetry '" + symmetry + "'");
    if (field == "real" || field == "integer")
        return read_body<double>(in, symmetry, field == "integer", path);
    if (field == "complex") return read_body<Complex>(in, symmetry, false, path);
    throw std::runtime_error(path + ": unsupported field '" + field + "'");
}

void write_matrix_market(const std::string& path, const SparseMatrix<double>& a) {
    write_impl(path, a);
}

void write_matrix_market(const std::string& path, const SparseMatrix<Complex>& a) {
    write_impl(path, a);
}

}  // namespace chebfd

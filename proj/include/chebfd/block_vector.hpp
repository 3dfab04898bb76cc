#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "chebfd/scalar.hpp"

namespace chebfd {

/// Dense D x n_b block of vectors, row-major (vector index fastest).
/// The row-major layout is part of the contract; all kernels rely on it.
template <class S>
class BlockVector {
    static_assert(is_supported_scalar<S>);

  public:
    BlockVector() = default;
    BlockVector(Index dim, Index width, S fill = S{})
        : dim_(dim), width_(width), data_(static_cast<size_t>(dim * width), fill) {
        if (dim < 0 || width < 0) throw std::invalid_argument("BlockVector: negative shape");
    }

    Index dim() const { return dim_; }
    Index width() const { return width_; }

    S& operator()(Index i, Index k) { return data_[static_cast<size_t>(i * width_ + k)]; }
    const S& operator()(Index i, Index k) const { return data_[static_cast<size_t>(i * width_ + k)]; }

    S* row(Index i) { return data_.data() + i * width_; }
    const S* row(Index i) const { return data_.data() + i * width_; }

    S* data() { return data_.data(); }
    const S* data() const { return data_.data(); }
    size_t size() const { return data_.size(); }

    /// Fill with standard Gaussian entries (real and imaginary parts independently).
    void randomize(std::uint64_t seed) {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> dist(0.0, 1.0);
        for (auto& v : data_) {
            if constexpr (std::is_same_v<S, double>)
                v = dist(gen);
            else
                v = Complex(dist(gen), dist(gen));
        }
    }

    /// Extract column k as a plain vector.
    std::vector<S> column(Index k) const {
        std::vector<S> c(static_cast<size_t>(dim_));
        for (Index i = 0; i < dim_; ++i) c[i] = (*this)(i, k);
        return c;
    }
    void set_column(Index k, const std::vector<S>& c) {
        for (Index i = 0; i < dim_; ++i) (*this)(i, k) = c[i];
    }

    static constexpr std::uint32_t kMagic = 0x44464243;  // "CBFD"

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("BlockVector::save: cannot open " + path);
        std::uint32_t magic = kMagic, kind = static_cast<std::uint32_t>(ScalarTraits<S>::kind),
                      width = static_cast<std::uint32_t>(width_);
        std::uint64_t dim = static_cast<std::uint64_t>(dim_);
        out.write(reinterpret_cast<const char*>(&magic), 4);
        out.write(reinterpret_cast<const char*>(&dim), 8);
        out.write(reinterpret_cast<const char*>(&width), 4);
        out.write(reinterpret_cast<const char*>(&kind), 4);
        out.write(reinterpret_cast<const char*>(data_.data()),
                  static_cast<std::streamsize>(data_.size() * sizeof(S)));
        if (!out) throw std::runtime_error("BlockVector::save: write failed");
    }

    static BlockVector load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("BlockVector::load: cannot open " + path);
        std::uint32_t magic = 0, kind = 0, width = 0;
        std::uint64_t dim = 0;
        in.read(reinterpret_cast<char*>(&magic), 4);
        in.read(reinterpret_cast<char*>(&dim), 8);
        in.read(reinterpret_cast<char*>(&width), 4);
        in.read(reinterpret_cast<char*>(&kind), 4);
        if (!in || magic != kMagic) throw std::runtime_error("BlockVector::load: bad header");
        if (kind != static_cast<std::uint32_t>(ScalarTraits<S>::kind))
            throw std::runtime_error("BlockVector::load: scalar kind mismatch");
        BlockVector v(static_cast<Index>(dim), static_cast<Index>(width));
        in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(S)));
        if (!in) throw std::runtime_error("BlockVector::load: truncated payload");
        return v;
    }

  private:
    Index dim_ = 0;
    Index width_ = 0;
    std::vector<S> data_;
};

}  // namespace chebfd

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavetwin {

using cplx = std::complex<double>;

/// Integer 2D index, row-major order (row = y, col = x).
struct Index2 {
    int row = 0;
    int col = 0;
    friend bool operator==(const Index2&, const Index2&) = default;
};

/// A 2D sampled signal on an integer grid.
///
/// Sample (r, c) of the storage grid sits at lattice position
/// (r - origin.row, c - origin.col). Feature maps keep origin = {0, 0};
/// kernels use the origin to place their support around index zero.
template <typename T>
class Map2D {
public:
    using value_type = T;

    Map2D() = default;

    Map2D(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Map2D: negative dimensions");
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
    }

    Map2D(int rows, int cols, std::vector<T> data, Index2 origin = {})
        : rows_(rows), cols_(cols), origin_(origin), data_(std::move(data)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Map2D: negative dimensions");
        if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
            throw std::invalid_argument("Map2D: data length " + std::to_string(data_.size()) +
                                        " != " + std::to_string(rows) + "x" + std::to_string(cols));
    }

    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] Index2 origin() const noexcept { return origin_; }
    void set_origin(Index2 o) { origin_ = o; }

    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
    [[nodiscard]] std::span<T> data() noexcept { return data_; }
    [[nodiscard]] const std::vector<T>& vec() const noexcept { return data_; }

    T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const T& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    T& at(int r, int c) {
        check(r, c);
        return (*this)(r, c);
    }
    const T& at(int r, int c) const {
        check(r, c);
        return (*this)(r, c);
    }

    /// Value at lattice position k (relative to the origin); zero outside the support.
    [[nodiscard]] T at_lattice(int kr, int kc) const {
        const int r = kr + origin_.row;
        const int c = kc + origin_.col;
        if (r < 0 || c < 0 || r >= rows_ || c >= cols_) return T{};
        return (*this)(r, c);
    }

    [[nodiscard]] bool same_shape(const Map2D& o) const noexcept {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }

private:
    void check(int r, int c) const {
        if (r < 0 || c < 0 || r >= rows_ || c >= cols_)
            throw std::out_of_range("Map2D index (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") outside " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_));
    }

    int rows_ = 0;
    int cols_ = 0;
    Index2 origin_{};
    std::vector<T> data_;
};

using FeatureMap = Map2D<double>;
using ComplexMap = Map2D<cplx>;

/// A stack of same-shape maps (channels).
template <typename T>
class MultiChannel {
public:
    MultiChannel() = default;
    explicit MultiChannel(std::vector<Map2D<T>> maps) : maps_(std::move(maps)) { validate(); }

    [[nodiscard]] int channels() const noexcept { return static_cast<int>(maps_.size()); }
    [[nodiscard]] int rows() const noexcept { return maps_.empty() ? 0 : maps_.front().rows(); }
    [[nodiscard]] int cols() const noexcept { return maps_.empty() ? 0 : maps_.front().cols(); }

    const Map2D<T>& operator[](int i) const { return maps_.at(static_cast<std::size_t>(i)); }
    Map2D<T>& operator[](int i) { return maps_.at(static_cast<std::size_t>(i)); }

    void push_back(Map2D<T> m) {
        if (!maps_.empty() && !m.same_shape(maps_.front()))
            throw std::invalid_argument("MultiChannel: channel shape mismatch");
        maps_.push_back(std::move(m));
    }

    [[nodiscard]] const std::vector<Map2D<T>>& maps() const noexcept { return maps_; }
    auto begin() const { return maps_.begin(); }
    auto end() const { return maps_.end(); }

private:
    void validate() const {
        for (const auto& m : maps_)
            if (!m.same_shape(maps_.front()))
                throw std::invalid_argument("MultiChannel: channel shape mismatch");
    }

    std::vector<Map2D<T>> maps_;
};

using MultiChannelMap = MultiChannel<double>;
using MultiChannelComplex = MultiChannel<cplx>;

// Elementwise helpers used across modules.

FeatureMap real_part(const ComplexMap& z);
FeatureMap imag_part(const ComplexMap& z);
ComplexMap to_complex(const FeatureMap& x);
ComplexMap conj(const ComplexMap& z);

double l2_norm(const FeatureMap& x);
double l2_norm(const ComplexMap& z);
double max_abs(const FeatureMap& x);
double max_abs_diff(const FeatureMap& a, const FeatureMap& b);
double max_abs_diff(const ComplexMap& a, const ComplexMap& b);

/// Crop rows [r0, r0+h) x cols [c0, c0+w).
template <typename T>
Map2D<T> crop(const Map2D<T>& x, int r0, int c0, int h, int w) {
    if (r0 < 0 || c0 < 0 || h < 0 || w < 0 || r0 + h > x.rows() || c0 + w > x.cols())
        throw std::invalid_argument("crop: window outside map");
    Map2D<T> out(h, w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) out(r, c) = x(r0 + r, c0 + c);
    return out;
}

/// Drop a border of `border` samples on every side.
template <typename T>
Map2D<T> interior(const Map2D<T>& x, int border) {
    if (2 * border >= x.rows() || 2 * border >= x.cols())
        throw std::invalid_argument("interior: border consumes the whole map");
    return crop(x, border, border, x.rows() - 2 * border, x.cols() - 2 * border);
}

}  // namespace wavetwin

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lyapoly/matrix.hpp"

namespace lyapoly {

/// Ordered, non-empty list of square matrices sharing one dimension.
///
/// Construction validates shape and finiteness; the Metzler flag is
/// computed once and cached.
class MatrixFamily {
public:
    MatrixFamily() = default;
    explicit MatrixFamily(std::vector<Matrix> matrices, std::vector<std::string> labels = {});

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return matrices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return matrices_.empty(); }
    [[nodiscard]] bool metzler() const noexcept { return metzler_; }

    [[nodiscard]] const Matrix& operator[](std::size_t i) const noexcept { return matrices_[i]; }
    [[nodiscard]] const std::vector<Matrix>& matrices() const noexcept { return matrices_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

    [[nodiscard]] auto begin() const noexcept { return matrices_.begin(); }
    [[nodiscard]] auto end() const noexcept { return matrices_.end(); }

private:
    std::vector<Matrix> matrices_;
    std::vector<std::string> labels_;
    std::size_t dim_ = 0;
    bool metzler_ = false;
};

}  // namespace lyapoly

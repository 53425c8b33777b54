#include "lyapoly/family.hpp"

#include <string>
#include <utility>

#include "lyapoly/error.hpp"
#include "lyapoly/linalg.hpp"

namespace lyapoly {

MatrixFamily::MatrixFamily(std::vector<Matrix> matrices, std::vector<std::string> labels)
    : matrices_(std::move(matrices)), labels_(std::move(labels)) {
    if (matrices_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "MatrixFamily", "family must contain at least one matrix");
    }
    dim_ = matrices_.front().rows();
    if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "MatrixFamily", "dimension must be positive");
    for (std::size_t j = 0; j < matrices_.size(); ++j) {
        const Matrix& a = matrices_[j];
        if (a.rows() != dim_ || a.cols() != dim_) {
            throw Error(ErrorCode::DimensionMismatch, "MatrixFamily",
                        "matrix " + std::to_string(j + 1) + " is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", expected " + std::to_string(dim_) + "x" +
                            std::to_string(dim_));
        }
        if (!a.all_finite()) {
            throw Error(ErrorCode::NonFinite, "MatrixFamily",
                        "matrix " + std::to_string(j + 1) + " has a non-finite entry");
        }
    }
    if (labels_.empty()) {
        for (std::size_t j = 0; j < matrices_.size(); ++j) labels_.push_back("A" + std::to_string(j + 1));
    } else if (labels_.size() != matrices_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "MatrixFamily", "label count differs from matrix count");
    }
    metzler_ = true;
    for (const Matrix& a : matrices_) metzler_ = metzler_ && is_metzler(a);
}

}  // namespace lyapoly

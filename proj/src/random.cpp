#include "lyapoly/random.hpp"

#include <random>
#include <string>

#include "lyapoly/error.hpp"

namespace lyapoly {

std::optional<RandomEntries> parse_random_entries(std::string_view text) noexcept {
    if (text == "sign") return RandomEntries::Sign;
    if (text == "real") return RandomEntries::Real;
    return std::nullopt;
}

MatrixFamily random_metzler_family(std::size_t dim, std::size_t count, std::uint64_t seed, RandomEntries entries) {
    if (dim == 0 || count == 0) {
        throw Error(ErrorCode::InvalidArgument, "random_metzler_family", "dimension and count must be positive");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> off_sign(0, 1), diag_sign(-1, 1);
    std::uniform_real_distribution<double> off_real(0.0, 1.0), diag_real(-1.0, 1.0);
    std::vector<Matrix> mats;
    for (std::size_t k = 0; k < count; ++k) {
        Matrix m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                if (entries == RandomEntries::Sign) {
                    m(i, j) = i == j ? diag_sign(rng) : off_sign(rng);
                } else {
                    m(i, j) = i == j ? diag_real(rng) : off_real(rng);
                }
            }
        mats.push_back(std::move(m));
    }
    return MatrixFamily(std::move(mats));
}

}  // namespace lyapoly

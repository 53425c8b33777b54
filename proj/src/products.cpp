#include "lyapoly/products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lyapoly/error.hpp"
#include "lyapoly/linalg.hpp"

namespace lyapoly {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_norm_bound(const ScaledMatrix& p) {
    const double n = norm2_upper(p.m);
    return n == 0.0 ? kNegInf : p.log_scale + std::log(n);
}

void check_family(const std::vector<Matrix>& b, const char* stage) {
    if (b.empty()) throw Error(ErrorCode::InvalidArgument, stage, "empty family");
    const std::size_t d = b.front().rows();
    for (const Matrix& m : b) {
        if (!m.is_square() || m.rows() != d || d == 0) {
            throw Error(ErrorCode::DimensionMismatch, stage, "family matrices must share one square shape");
        }
        if (!m.all_finite()) throw Error(ErrorCode::NonFinite, stage, "family matrix not finite");
    }
}

class Ranking {
public:
    explicit Ranking(SearchMode mode) : mode_(mode) {}

    // True when (score, word) should replace the incumbent.
    bool better(double score, const Word& word, const ProductCandidate& best) const {
        const double inc = best.log_averaged_rho();
        if (std::isinf(score) || std::isinf(inc)) {
            if (score != inc) return mode_ == SearchMode::Max ? score > inc : score < inc;
        } else {
            const double diff = mode_ == SearchMode::Max ? score - inc : inc - score;
            if (diff > kTieTol) return true;
            if (diff < -kTieTol) return false;
        }
        if (word.size() != best.word.size()) return word.size() < best.word.size();
        return std::lexicographical_compare(word.begin(), word.end(), best.word.begin(), best.word.end());
    }

private:
    SearchMode mode_;
};

ProductCandidate make_candidate(Word word, double log_rho) {
    ProductCandidate c;
    c.word = std::move(word);
    c.log_rho = log_rho;
    c.rho = std::exp(log_rho);
    c.averaged_rho = std::exp(log_rho / static_cast<double>(c.word.size()));
    return c;
}

class NecklaceSearch {
public:
    NecklaceSearch(const std::vector<Matrix>& b, const SearchOptions& opt, bool prune)
        : opt_(opt), prune_(prune), rank_(opt.mode), k_(b.size()), l_(opt.max_length) {
        for (const Matrix& m : b) letters_.push_back(ScaledMatrix::from(m));
        prefix_.resize(l_ + 1);
        prefix_[0] = ScaledMatrix{Matrix::identity(b.front().rows()), 0.0};
        a_.assign(l_ + 1, 0);
        if (prune_) build_norm_table(b);
    }

    ProductCandidate run(SearchStats& stats) {
        stats_ = &stats;
        for (std::size_t j = 0; j < k_; ++j) {
            a_[1] = j;
            visit(1, 1);
        }
        return best_;
    }

private:
    void build_norm_table(const std::vector<Matrix>& b) {
        // log of max over words of length j of the 2-norm bound: exact for
        // short lengths, submultiplicative combination beyond.
        log_norms_.assign(l_ + 1, 0.0);
        std::vector<ScaledMatrix> layer{ScaledMatrix{Matrix::identity(b.front().rows()), 0.0}};
        std::size_t exact = 0;
        for (std::size_t j = 1; j <= l_; ++j) {
            if (layer.size() * k_ > 4096) break;
            std::vector<ScaledMatrix> next;
            double worst = kNegInf;
            for (const ScaledMatrix& p : layer)
                for (const ScaledMatrix& letter : letters_) {
                    next.push_back(p.premultiplied(letter));
                    worst = std::max(worst, log_norm_bound(next.back()));
                }
            log_norms_[j] = worst;
            layer = std::move(next);
            exact = j;
        }
        for (std::size_t j = exact + 1; j <= l_; ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t s = 1; s < j; ++s) best = std::min(best, log_norms_[s] + log_norms_[j - s]);
            log_norms_[j] = best;
        }
    }

    void visit(std::size_t t, std::size_t p) {
        ++stats_->visited;
        prefix_[t] = prefix_[t - 1].premultiplied(letters_[a_[t]]);
        if (p == t) evaluate(t);
        if (t == l_) return;
        if (prune_ && has_best_ && cannot_improve(t)) {
            ++stats_->pruned;
            return;
        }
        const std::size_t base = a_[t + 1 - p];
        a_[t + 1] = base;
        visit(t + 1, p);
        for (std::size_t j = base + 1; j < k_; ++j) {
            a_[t + 1] = j;
            visit(t + 1, t + 1);
        }
    }

    void evaluate(std::size_t t) {
        if (++stats_->evaluated > opt_.max_products) {
            throw Error(ErrorCode::CapExceeded, "search_candidate",
                        "more than " + std::to_string(opt_.max_products) +
                            " products evaluated; lower the word length or use the two-block search");
        }
        const double log_rho = prefix_[t].log_spectral_radius();
        const double score = log_rho / static_cast<double>(t);
        Word word(a_.begin() + 1, a_.begin() + static_cast<std::ptrdiff_t>(t) + 1);
        if (!has_best_ || rank_.better(score, word, best_)) {
            best_ = make_candidate(std::move(word), log_rho);
            has_best_ = true;
        }
    }

    bool cannot_improve(std::size_t t) const {
        const double head = log_norm_bound(prefix_[t]);
        if (head == kNegInf) return true;
        double bound = kNegInf;
        for (std::size_t n = t + 1; n <= l_; ++n)
            bound = std::max(bound, (head + log_norms_[n - t]) / static_cast<double>(n));
        const double slack = opt_.prune_gap > 0.0 ? std::log1p(-opt_.prune_gap) : 0.0;
        return bound < best_.log_averaged_rho() + slack - kTieTol;
    }

    const SearchOptions& opt_;
    bool prune_;
    Ranking rank_;
    std::size_t k_;
    std::size_t l_;
    std::vector<ScaledMatrix> letters_;
    std::vector<ScaledMatrix> prefix_;
    std::vector<std::size_t> a_;  // 1-based prefix letters
    std::vector<double> log_norms_;
    ProductCandidate best_;
    bool has_best_ = false;
    SearchStats* stats_ = nullptr;
};

ProductCandidate two_block_search(const std::vector<Matrix>& b, const SearchOptions& opt, SearchStats& stats) {
    const std::size_t k = b.size();
    const std::size_t l = opt.max_length;
    const Ranking rank(opt.mode);
    ProductCandidate best;
    bool has_best = false;
    auto consider = [&](Word word, double log_rho) {
        if (++stats.evaluated > opt.max_products) {
            throw Error(ErrorCode::CapExceeded, "search_candidate",
                        "more than " + std::to_string(opt.max_products) + " two-block products evaluated");
        }
        const double score = log_rho / static_cast<double>(word.size());
        if (!has_best || rank.better(score, word, best)) {
            best = make_candidate(std::move(word), log_rho);
            has_best = true;
        }
    };
    std::vector<std::vector<ScaledMatrix>> powers(k);
    for (std::size_t i = 0; i < k; ++i) {
        powers[i].push_back(ScaledMatrix{Matrix::identity(b[i].rows()), 0.0});
        const ScaledMatrix letter = ScaledMatrix::from(b[i]);
        for (std::size_t e = 1; e < std::max<std::size_t>(l, 2); ++e) powers[i].push_back(powers[i].back().premultiplied(letter));
        consider(Word{i}, powers[i][1].log_spectral_radius());
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            for (std::size_t n = 2; n <= l; ++n)
                for (std::size_t ea = n - 1; ea >= 1; --ea) {
                    const std::size_t eb = n - ea;
                    Word word(ea, i);
                    word.insert(word.end(), eb, j);
                    consider(std::move(word), powers[i][ea].premultiplied(powers[j][eb]).log_spectral_radius());
                }
    return best;
}

bool near_duplicate(const Vector& u, const Vector& v, bool symmetric) {
    const double nu = norm2(u);
    const double nv = norm2(v);
    if (nu == 0.0 || nv == 0.0) return nu == nv;
    if (std::abs(nu / nv - 1.0) > 1e-10) return false;
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i] / nu;
        const double b = v[i] / nv;
        plus += (a - b) * (a - b);
        minus += (a + b) * (a + b);
    }
    return std::sqrt(plus) < 1e-10 || (symmetric && std::sqrt(minus) < 1e-10);
}

}  // namespace

std::size_t lyndon_word_count(std::size_t letters, std::size_t max_length) {
    constexpr double cap = static_cast<double>(std::numeric_limits<std::size_t>::max());
    double total = 0.0;
    for (std::size_t n = 1; n <= max_length; ++n) {
        // (1/n) sum over divisors e of n of mu(e) k^(n/e)
        double sum = 0.0;
        for (std::size_t e = 1; e <= n; ++e) {
            if (n % e) continue;
            int mu = 1;
            std::size_t r = e;
            for (std::size_t q = 2; q * q <= r && mu != 0; ++q) {
                if (r % q) continue;
                r /= q;
                if (r % q == 0) mu = 0;
                mu = -mu;
            }
            if (mu != 0 && r > 1) mu = -mu;
            sum += mu * std::pow(static_cast<double>(letters), static_cast<double>(n / e));
        }
        total += sum / static_cast<double>(n);
        if (total >= cap) return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(std::llround(total));
}

ProductCandidate search_candidate(const std::vector<Matrix>& family_exp, const SearchOptions& options,
                                  SearchStats* stats) {
    check_family(family_exp, "search_candidate");
    if (options.max_length == 0) throw Error(ErrorCode::InvalidArgument, "search_candidate", "max length must be >= 1");
    SearchStats local;
    SearchStats& st = stats ? *stats : local;
    st = {};
    if (options.strategy == SearchStrategy::TwoBlock) return two_block_search(family_exp, options, st);

    const bool prune = options.strategy == SearchStrategy::BranchBound && options.mode == SearchMode::Max;
    if (!prune && lyndon_word_count(family_exp.size(), options.max_length) > options.max_products) {
        throw Error(ErrorCode::CapExceeded, "search_candidate",
                    "exhaustive search over words of length <= " + std::to_string(options.max_length) +
                        " exceeds " + std::to_string(options.max_products) +
                        " products; use branch-bound or two-block search");
    }
    NecklaceSearch search(family_exp, options, prune);
    return search.run(st);
}

ProductCandidate evaluate_word(const std::vector<Matrix>& family_exp, const Word& word) {
    check_family(family_exp, "evaluate_word");
    if (word.empty()) throw Error(ErrorCode::InvalidArgument, "evaluate_word", "empty word");
    ScaledMatrix p{Matrix::identity(family_exp.front().rows()), 0.0};
    for (std::size_t idx : word) {
        if (idx >= family_exp.size()) throw Error(ErrorCode::InvalidArgument, "evaluate_word", "letter out of range");
        p = p.premultiplied(ScaledMatrix::from(family_exp[idx]));
    }
    return make_candidate(word, p.log_spectral_radius());
}

Word least_rotation(const Word& word) {
    Word best = word;
    Word rot = word;
    for (std::size_t s = 1; s < word.size(); ++s) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

std::string render_word(const Word& word, const std::string& prefix) {
    const Word w = least_rotation(Word(word.rbegin(), word.rend()));
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        if (!out.empty()) out += ' ';
        out += prefix + std::to_string(w[i] + 1);
        if (j - i > 1) out += '^' + std::to_string(j - i);
        i = j;
    }
    return out;
}

InitialVertices initial_vertices(const Word& word, const std::vector<Matrix>& family_exp, HullKind hull) {
    check_family(family_exp, "initial_vertices");
    if (word.empty()) throw Error(ErrorCode::InvalidArgument, "initial_vertices", "empty word");
    ScaledMatrix p{Matrix::identity(family_exp.front().rows()), 0.0};
    for (std::size_t idx : word) p = p.premultiplied(family_exp.at(idx));

    const bool symmetric = hull == HullKind::Symmetric;
    InitialVertices out;
    Vector v = real_leading_vector(p.m);
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (!symmetric) {
            const double floor = 1e-12 * norm_inf(v);
            for (double& x : v)
                if (x < 0.0 && x >= -floor) x = 0.0;
        }
        const bool dup = std::any_of(out.vertices.begin(), out.vertices.end(),
                                     [&](const Vector& u) { return near_duplicate(u, v, symmetric); });
        if (!dup) {
            out.vertices.push_back(v);
            out.prefix_lengths.push_back(i);
        }
        if (i + 1 < word.size()) v = family_exp[word[i]] * v;
    }
    return out;
}

MatrixFamily normalize_family(const MatrixFamily& family, double shift) {
    std::vector<Matrix> shifted;
    shifted.reserve(family.size());
    for (const Matrix& a : family) {
        Matrix s = a;
        for (std::size_t i = 0; i < s.rows(); ++i) s(i, i) -= shift;
        shifted.push_back(std::move(s));
    }
    return MatrixFamily(std::move(shifted), family.labels());
}

std::vector<Matrix> exponentiate(const MatrixFamily& family, double tau) {
    std::vector<Matrix> out;
    out.reserve(family.size());
    for (const Matrix& a : family) out.push_back(mat_exp(a, tau));
    return out;
}

}  // namespace lyapoly

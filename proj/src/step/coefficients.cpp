#include "romforge/step/coefficients.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace romforge::step {

CouplingCoefficients::CouplingCoefficients(std::vector<Index> excited, std::vector<Index> projected)
    : excited_(std::move(excited)), projected_(std::move(projected)) {
    alpha_ = MatX::Zero(n_projected(), n_pairs());
    beta_ = MatX::Zero(n_projected(), n_triples());
    alpha_set_.assign(static_cast<std::size_t>(n_projected() * n_pairs()), false);
    beta_set_.assign(static_cast<std::size_t>(n_projected() * n_triples()), false);
}

Index CouplingCoefficients::pair_index(Index i, Index j) const {
    if (i > j) std::swap(i, j);
    const Index n = n_excited();
    if (i < 0 || j >= n) throw std::out_of_range("pair index");
    return i * n - i * (i - 1) / 2 + (j - i);
}

Index CouplingCoefficients::triple_index(Index i, Index j, Index l) const {
    std::array<Index, 3> s{i, j, l};
    std::sort(s.begin(), s.end());
    const Index n = n_excited();
    if (s[0] < 0 || s[2] >= n) throw std::out_of_range("triple index");
    // Count triples (a <= b <= c) preceding (s0, s1, s2) lexicographically.
    Index idx = 0;
    for (Index a = 0; a < s[0]; ++a) idx += (n - a) * (n - a + 1) / 2;
    for (Index b = s[0]; b < s[1]; ++b) idx += n - b;
    idx += s[2] - s[1];
    return idx;
}

Index CouplingCoefficients::n_pairs() const {
    const Index n = n_excited();
    return n * (n + 1) / 2;
}

Index CouplingCoefficients::n_triples() const {
    const Index n = n_excited();
    return n * (n + 1) * (n + 2) / 6;
}

Real& CouplingCoefficients::alpha(Index k, Index i, Index j) {
    const Index c = pair_index(i, j);
    alpha_set_[static_cast<std::size_t>(k * n_pairs() + c)] = true;
    return alpha_(k, c);
}

Real CouplingCoefficients::alpha(Index k, Index i, Index j) const { return alpha_(k, pair_index(i, j)); }

Real& CouplingCoefficients::beta(Index k, Index i, Index j, Index l) {
    const Index c = triple_index(i, j, l);
    beta_set_[static_cast<std::size_t>(k * n_triples() + c)] = true;
    return beta_(k, c);
}

Real CouplingCoefficients::beta(Index k, Index i, Index j, Index l) const { return beta_(k, triple_index(i, j, l)); }

bool CouplingCoefficients::has_alpha(Index k, Index i, Index j) const {
    return alpha_set_[static_cast<std::size_t>(k * n_pairs() + pair_index(i, j))];
}

bool CouplingCoefficients::has_beta(Index k, Index i, Index j, Index l) const {
    return beta_set_[static_cast<std::size_t>(k * n_triples() + triple_index(i, j, l))];
}

Index CouplingCoefficients::projected_row(Index global_mode) const {
    const auto it = std::find(projected_.begin(), projected_.end(), global_mode);
    return it == projected_.end() ? -1 : static_cast<Index>(it - projected_.begin());
}

VecX CouplingCoefficients::alpha_column(Index i, Index j) const { return alpha_.col(pair_index(i, j)); }

VecX CouplingCoefficients::beta_column(Index i, Index j, Index l) const { return beta_.col(triple_index(i, j, l)); }

std::string CouplingCoefficients::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "kind,k,i,j,l,value\n";
    for (Index k = 0; k < n_projected(); ++k)
        for (Index i = 0; i < n_excited(); ++i)
            for (Index j = i; j < n_excited(); ++j)
                if (has_alpha(k, i, j))
                    out << "alpha," << projected_[static_cast<std::size_t>(k)] + 1 << ','
                        << excited_[static_cast<std::size_t>(i)] + 1 << ','
                        << excited_[static_cast<std::size_t>(j)] + 1 << ",," << alpha(k, i, j) << '\n';
    for (Index k = 0; k < n_projected(); ++k)
        for (Index i = 0; i < n_excited(); ++i)
            for (Index j = i; j < n_excited(); ++j)
                for (Index l = j; l < n_excited(); ++l)
                    if (has_beta(k, i, j, l))
                        out << "beta," << projected_[static_cast<std::size_t>(k)] + 1 << ','
                            << excited_[static_cast<std::size_t>(i)] + 1 << ','
                            << excited_[static_cast<std::size_t>(j)] + 1 << ','
                            << excited_[static_cast<std::size_t>(l)] + 1 << ',' << beta(k, i, j, l) << '\n';
    return out.str();
}

std::string CouplingCoefficients::to_json() const {
    nlohmann::json j;
    j["excited_modes"] = nlohmann::json::array();
    for (const Index e : excited_) j["excited_modes"].push_back(e + 1);
    j["projected_modes"] = nlohmann::json::array();
    for (const Index p : projected_) j["projected_modes"].push_back(p + 1);
    auto& ja = j["alpha"] = nlohmann::json::array();
    for (Index k = 0; k < n_projected(); ++k)
        for (Index i = 0; i < n_excited(); ++i)
            for (Index jj = i; jj < n_excited(); ++jj)
                if (has_alpha(k, i, jj))
                    ja.push_back({{"k", projected_[static_cast<std::size_t>(k)] + 1},
                                  {"i", excited_[static_cast<std::size_t>(i)] + 1},
                                  {"j", excited_[static_cast<std::size_t>(jj)] + 1},
                                  {"value", alpha(k, i, jj)}});
    auto& jb = j["beta"] = nlohmann::json::array();
    for (Index k = 0; k < n_projected(); ++k)
        for (Index i = 0; i < n_excited(); ++i)
            for (Index jj = i; jj < n_excited(); ++jj)
                for (Index l = jj; l < n_excited(); ++l)
                    if (has_beta(k, i, jj, l))
                        jb.push_back({{"k", projected_[static_cast<std::size_t>(k)] + 1},
                                      {"i", excited_[static_cast<std::size_t>(i)] + 1},
                                      {"j", excited_[static_cast<std::size_t>(jj)] + 1},
                                      {"l", excited_[static_cast<std::size_t>(l)] + 1},
                                      {"value", beta(k, i, jj, l)}});
    return j.dump(1);
}

} // namespace romforge::step

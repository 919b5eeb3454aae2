#include "romforge/step/oracle_tensors.hpp"

#include <stdexcept>

namespace romforge::step {

namespace {

Index multiplicity(Index i, Index j, Index l) {
    if (i == j && j == l) return 1;
    if (i == j || j == l || i == l) return 3;
    return 6;
}

} // namespace

Index NonlinearTensors::pidx(Index i, Index j) const {
    if (i > j) std::swap(i, j);
    const Index n = basis_size();
    return i * n - i * (i - 1) / 2 + (j - i);
}

Index NonlinearTensors::tidx(Index i, Index j, Index l) const {
    Index a = i, b = j, c = l;
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    const Index n = basis_size();
    Index idx = 0;
    for (Index u = 0; u < a; ++u) idx += (n - u) * (n - u + 1) / 2;
    for (Index v = a; v < b; ++v) idx += n - v;
    return idx + (c - b);
}

NonlinearTensors::NonlinearTensors(const ForceEval& f, const MatX& basis) : basis_(basis) {
    const Index n = basis.cols();
    if (n < 1 || n > 60) throw std::invalid_argument("tensor oracle basis must have 1..60 directions");
    n_ = n; // pidx/tidx depend on the basis size
    const Index npair = n * (n + 1) / 2;
    const Index ntrip = n * (n + 1) * (n + 2) / 6;
    quad_.resize(static_cast<std::size_t>(npair));
    cub_.resize(static_cast<std::size_t>(ntrip));

    std::vector<VecX> odd_single(static_cast<std::size_t>(n));
    std::vector<VecX> odd_pair(static_cast<std::size_t>(n * n));

    for (Index i = 0; i < n; ++i) {
        const VecX v = basis.col(i);
        const VecX fp = f(v), fm = f((-v).eval());
        quad_[static_cast<std::size_t>(pidx(i, i))] = (fp + fm) / 2; // A v_i v_i
        odd_single[static_cast<std::size_t>(i)] = (fp - fm) / 2;     // B v_i v_i v_i
        cub_[static_cast<std::size_t>(tidx(i, i, i))] = odd_single[static_cast<std::size_t>(i)];
    }

    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const VecX s = (basis.col(i) + basis.col(j)).eval();
            const VecX d = (basis.col(i) - basis.col(j)).eval();
            const VecX fsp = f(s), fsm = f((-s).eval());
            const VecX fdp = f(d), fdm = f((-d).eval());
            const VecX even_s = (fsp + fsm) / 2;
            const VecX odd_s = (fsp - fsm) / 2;
            const VecX odd_d = (fdp - fdm) / 2;
            odd_pair[static_cast<std::size_t>(i * n + j)] = odd_s;

            const VecX& Aii = quad_[static_cast<std::size_t>(pidx(i, i))];
            const VecX& Ajj = quad_[static_cast<std::size_t>(pidx(j, j))];
            quad_[static_cast<std::size_t>(pidx(i, j))] = (even_s - Aii - Ajj) / 2;

            const VecX& Biii = cub_[static_cast<std::size_t>(tidx(i, i, i))];
            const VecX& Bjjj = cub_[static_cast<std::size_t>(tidx(j, j, j))];
            cub_[static_cast<std::size_t>(tidx(i, i, j))] = ((odd_s - odd_d) / 2 - Bjjj) / 3;
            cub_[static_cast<std::size_t>(tidx(i, j, j))] = ((odd_s + odd_d) / 2 - Biii) / 3;
        }

    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            for (Index l = j + 1; l < n; ++l) {
                const VecX s = (basis.col(i) + basis.col(j) + basis.col(l)).eval();
                const VecX odd_t = (f(s) - f((-s).eval())) / 2;
                cub_[static_cast<std::size_t>(tidx(i, j, l))] =
                    (odd_t - odd_pair[static_cast<std::size_t>(i * n + j)] -
                     odd_pair[static_cast<std::size_t>(i * n + l)] -
                     odd_pair[static_cast<std::size_t>(j * n + l)] + odd_single[static_cast<std::size_t>(i)] +
                     odd_single[static_cast<std::size_t>(j)] + odd_single[static_cast<std::size_t>(l)]) /
                    6;
            }
}

const VecX& NonlinearTensors::quadratic(Index i, Index j) const { return quad_[static_cast<std::size_t>(pidx(i, j))]; }

const VecX& NonlinearTensors::cubic(Index i, Index j, Index l) const {
    return cub_[static_cast<std::size_t>(tidx(i, j, l))];
}

VecX NonlinearTensors::evaluate(const VecX& c) const {
    const Index n = basis_size();
    if (c.size() != n) throw std::invalid_argument("coefficient count mismatch");
    VecX f = VecX::Zero(basis_.rows());
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) {
            const Real w = (i == j ? 1.0 : 2.0) * c[i] * c[j];
            f.noalias() += w * quadratic(i, j);
            for (Index l = j; l < n; ++l)
                f.noalias() += static_cast<Real>(multiplicity(i, j, l)) * c[i] * c[j] * c[l] * cubic(i, j, l);
        }
    return f;
}

CouplingCoefficients NonlinearTensors::project(const ModeSet& modes) const {
    const Index n = basis_size();
    std::vector<Index> excited(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) excited[static_cast<std::size_t>(i)] = i;
    std::vector<Index> projected(static_cast<std::size_t>(modes.count()));
    for (Index k = 0; k < modes.count(); ++k) projected[static_cast<std::size_t>(k)] = k;

    CouplingCoefficients cc(excited, projected);
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) {
            const VecX pa = modes.phi.transpose() * quadratic(i, j);
            const Real wa = i == j ? 1.0 : 2.0;
            for (Index k = 0; k < modes.count(); ++k) cc.alpha(k, i, j) = wa * pa[k];
            for (Index l = j; l < n; ++l) {
                const VecX pb = modes.phi.transpose() * cubic(i, j, l);
                const Real wb = static_cast<Real>(multiplicity(i, j, l));
                for (Index k = 0; k < modes.count(); ++k) cc.beta(k, i, j, l) = wb * pb[k];
            }
        }
    return cc;
}

} // namespace romforge::step

#include "seqrank/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace seqrank {

namespace {

struct SymEigen {
    Vector values;  // ascending
    Matrix vectors; // column k is the eigenvector of values[k]
};

// Cyclic Jacobi eigensolver for dense symmetric matrices. Deterministic:
// fixed sweep order, no pivot search, so repeated runs agree bitwise.
SymEigen jacobi_symmetric_eigen(Matrix a) {
    const int n = a.rows();
    Matrix v = Matrix::identity(n);
    if (n == 0) return {Vector{}, v};

    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    }
    const double stop = (scale == 0.0) ? 0.0 : scale * 1e-15;

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
        }
        if (off <= stop) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::abs(apq) <= stop) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
                for (int i = 0; i < n; ++i) {
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int x, int y) { return a(x, x) < a(y, y); });

    SymEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(idx[k], idx[k]);
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, idx[k]);
    }
    return out;
}

// Index of the largest-magnitude entry, lowest index winning ties. Ties are
// judged with a relative slack so analytically equal magnitudes that differ
// by rounding noise still resolve to the lower index.
int anchor_index(const Vector& mags) {
    int best = 0;
    double mag = -1.0;
    for (int i = 0; i < static_cast<int>(mags.size()); ++i) {
        if (mags[i] > mag * (1.0 + 1e-9)) {
            mag = mags[i];
            best = i;
        }
    }
    return best;
}

// Flips the vector so its largest-magnitude entry (lowest index on ties) is
// positive. Keeps degenerate eigenspaces deterministic for golden tests.
void canonicalize_sign(Vector& v) {
    if (v.empty()) return;
    Vector mags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
    if (v[anchor_index(mags)] < 0.0) {
        for (double& x : v) x = -x;
    }
}

double norm2(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void require_kind(const MethodOperator& op, MethodOperator::Kind a) {
    if (op.kind != a) {
        throw UsageError(std::string("operator kind ") + kind_name(op.kind) +
                         " not accepted by this solver");
    }
}

void require_kind(const MethodOperator& op, MethodOperator::Kind a, MethodOperator::Kind b) {
    if (op.kind != a && op.kind != b) {
        throw UsageError(std::string("operator kind ") + kind_name(op.kind) +
                         " not accepted by this solver");
    }
}

} // namespace

Vector stationary_distribution(const MethodOperator& op, const SolveOptions& opts) {
    require_kind(op, MethodOperator::Kind::stochastic_pagerank,
                 MethodOperator::Kind::stochastic_rankcentrality);
    opts.validate();
    const int n = op.n;
    if (n == 0) return {};

    Vector q(n, 1.0 / n);
    Vector next(n, 0.0);
    double residual = 0.0;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            double qi = q[i];
            if (qi == 0.0) continue;
            for (int j = 0; j < n; ++j) next[j] += qi * op.dense(i, j);
        }
        residual = 0.0;
        for (int j = 0; j < n; ++j) residual += std::abs(next[j] - q[j]);
        double total = std::accumulate(next.begin(), next.end(), 0.0);
        for (int j = 0; j < n; ++j) q[j] = next[j] / total;
        if (residual <= opts.tolerance) return q;
    }
    std::ostringstream msg;
    msg << "power iteration did not converge in " << opts.max_iterations
        << " iterations (residual " << residual << ")";
    throw ConvergenceError(msg.str(), residual);
}

Vector fiedler_vector(const MethodOperator& op, const SolveOptions& opts) {
    require_kind(op, MethodOperator::Kind::similarity_laplacian);
    opts.validate();
    const int n = op.n;
    if (n < 2) throw UsageError("fiedler vector needs at least 2 items");

    SymEigen eig = jacobi_symmetric_eigen(op.dense);
    double span = std::max(1.0, std::abs(eig.values.back()));
    if (std::abs(eig.values[1] - eig.values[0]) <= opts.tolerance * span) {
        throw DegeneracyError(
            "second-smallest Laplacian eigenvalue coincides with the smallest "
            "(similarity graph is disconnected)");
    }

    Vector q(n);
    for (int i = 0; i < n; ++i) q[i] = eig.vectors(i, 1);
    // The all-ones direction is in the Laplacian kernel, so removing the mean
    // keeps q an eigenvector while pinning 1^T q = 0 exactly.
    double mean = std::accumulate(q.begin(), q.end(), 0.0) / n;
    for (double& x : q) x -= mean;
    double nrm = norm2(q);
    if (nrm == 0.0) throw DegeneracyError("fiedler vector vanished after centering");
    for (double& x : q) x /= nrm;
    canonicalize_sign(q);
    return q;
}

std::vector<Complex> top_eigenvector_hermitian(const MethodOperator& op,
                                               const SolveOptions& opts) {
    require_kind(op, MethodOperator::Kind::hermitian_phase);
    opts.validate();
    const int n = op.n;
    if (n == 0) return {};

    // Real 2n embedding: H = A + iB maps to [[A, -B], [B, A]]. Every
    // eigenvalue of H shows up twice (v and iv), so a simple top eigenvalue
    // has embedded multiplicity exactly 2.
    Matrix m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double re = op.phase(i, j).real();
            double im = op.phase(i, j).imag();
            m(i, j) = re;
            m(n + i, n + j) = re;
            m(i, n + j) = -im;
            m(n + i, j) = im;
        }
    }
    SymEigen eig = jacobi_symmetric_eigen(m);
    double top = eig.values.back();
    if (n >= 2) {
        // The embedding doubles every eigenvalue of H, so the next distinct
        // eigenvalue sits two columns down. A top eigenvalue that is merely
        // clustered (not cleanly separated relative to the spectral range)
        // makes the recovered eigenvector arbitrary within the cluster; this
        // happens exactly when the phase measurements saturate (binary or
        // near-binary flows) and is reported as a degeneracy.
        constexpr double kTopGapFraction = 1e-2;
        double second = eig.values[2 * n - 3];
        double range = top - eig.values.front();
        double gap = top - second;
        double threshold =
            std::max(opts.tolerance * std::max(1.0, std::abs(top)), kTopGapFraction * range);
        if (gap <= threshold) {
            std::ostringstream msg;
            msg << "top eigenvalue of the phase operator is degenerate (gap " << gap
                << " vs spectral range " << range << ")";
            throw DegeneracyError(msg.str());
        }
    }

    std::vector<Complex> v(n);
    int col = 2 * n - 1;
    for (int i = 0; i < n; ++i) v[i] = Complex(eig.vectors(i, col), eig.vectors(n + i, col));

    double nrm = 0.0;
    for (const Complex& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (Complex& x : v) x /= nrm;

    // Canonical global phase: largest-modulus entry made real positive.
    Vector mags(n);
    for (int i = 0; i < n; ++i) mags[i] = std::abs(v[i]);
    int best = anchor_index(mags);
    if (mags[best] > 0.0) {
        Complex rot = std::conj(v[best]) / mags[best];
        for (Complex& x : v) x *= rot;
    }
    return v;
}

std::vector<SingularTriple> top_singular_pairs(const Matrix& mat, int k,
                                               const SolveOptions& opts) {
    opts.validate();
    const int n = mat.rows();
    if (mat.cols() != n) throw UsageError("top_singular_pairs expects a square matrix");
    if (k > n) throw UsageError("requested more singular pairs than the matrix dimension");

    // Eigenvalues of [[0, A], [A^T, 0]] are +/- the singular values of A;
    // unlike the A^T A route this resolves sigma ~ eps * sigma_1 instead of
    // bottoming out near sqrt(eps).
    Matrix m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, n + j) = mat(i, j);
            m(n + j, i) = mat(i, j);
        }
    }
    SymEigen eig = jacobi_symmetric_eigen(m);

    std::vector<SingularTriple> out;
    out.reserve(k);
    for (int t = 0; t < k; ++t) {
        int col = 2 * n - 1 - t; // t-th largest eigenvalue
        SingularTriple triple;
        triple.sigma = std::max(0.0, eig.values[col]);
        triple.left.resize(n);
        triple.right.resize(n);
        for (int i = 0; i < n; ++i) {
            triple.left[i] = eig.vectors(i, col);
            triple.right[i] = eig.vectors(n + i, col);
        }
        double lu = norm2(triple.left);
        double rv = norm2(triple.right);
        if (lu > 1e-12 && rv > 1e-12) {
            for (double& x : triple.left) x /= lu;
            for (double& x : triple.right) x /= rv;
        } else {
            // Degenerate (zero matrix / zero sigma): deterministic fallback.
            std::fill(triple.left.begin(), triple.left.end(), 0.0);
            std::fill(triple.right.begin(), triple.right.end(), 0.0);
            triple.left[t % n] = 1.0;
            triple.right[t % n] = 1.0;
        }
        // Sign-link: canonicalize the left vector, mirror the flip on the right
        // so that A v = sigma u is preserved.
        Vector mags(n);
        for (int i = 0; i < n; ++i) mags[i] = std::abs(triple.left[i]);
        int best = anchor_index(mags);
        if (triple.left[best] < 0.0) {
            for (double& x : triple.left) x = -x;
            for (double& x : triple.right) x = -x;
        }
        out.push_back(std::move(triple));
    }
    return out;
}

std::vector<std::vector<int>> connected_components(
    int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [a, b] : edges) {
        int ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (comp_of[r] == -1) {
            comp_of[r] = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        comps[comp_of[r]].push_back(i);
    }
    return comps;
}

Vector solve_incidence_least_squares(const MethodOperator& op, const SolveOptions& opts) {
    require_kind(op, MethodOperator::Kind::incidence_system);
    opts.validate();
    const int n = op.n;
    if (n == 0) return {};

    auto comps = connected_components(n, op.incidence);
    if (comps.size() > 1) {
        std::ostringstream msg;
        msg << "measurement graph is disconnected; relative offsets across components are "
               "unidentifiable. components:";
        for (const auto& comp : comps) {
            msg << " [";
            for (std::size_t i = 0; i < comp.size(); ++i) {
                if (i) msg << ",";
                msg << comp[i];
            }
            msg << "]";
        }
        throw DisconnectedGraphError(msg.str());
    }

    // Normal equations: B^T B is the graph Laplacian; the all-ones kernel is
    // pinned by adding the rank-one term (1/n) 1 1^T, which leaves the
    // centered solution untouched because B^T w is orthogonal to 1.
    Matrix a(n, n, 1.0 / n);
    Vector b(n, 0.0);
    for (std::size_t e = 0; e < op.incidence.size(); ++e) {
        auto [i, j] = op.incidence[e];
        a(i, i) += 1.0;
        a(j, j) += 1.0;
        a(i, j) -= 1.0;
        a(j, i) -= 1.0;
        b[i] += op.measurements[e];
        b[j] -= op.measurements[e];
    }

    // Cholesky factorization, then two triangular solves.
    Matrix l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a(i, j);
            for (int t = 0; t < j; ++t) sum -= l(i, t) * l(j, t);
            if (i == j) {
                if (sum <= 0.0) throw InvariantError("augmented normal matrix not positive definite");
                l(i, i) = std::sqrt(sum);
            } else {
                l(i, j) = sum / l(j, j);
            }
        }
    }
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        double sum = b[i];
        for (int t = 0; t < i; ++t) sum -= l(i, t) * y[t];
        y[i] = sum / l(i, i);
    }
    Vector x(n);
    for (int i = n - 1; i >= 0; --i) {
        double sum = y[i];
        for (int t = i + 1; t < n; ++t) sum -= l(t, i) * x[t];
        x[i] = sum / l(i, i);
    }

    double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    for (double& v : x) v -= mean;
    return x;
}

} // namespace seqrank

#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace hk {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>; // row-major
using RVec = std::vector<Rat>;
using RMat = std::vector<RVec>;

inline IMat identity(int n) {
    IMat m(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline int ncols(const IMat& m, int fallback = 0) { return m.empty() ? fallback : (int)m[0].size(); }

inline IMat matmul(const IMat& a, const IMat& b) {
    int n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IMat c(n, IVec(m, 0));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < k; ++l) {
            long long x = a[i][l];
            if (!x) continue;
            for (int j = 0; j < m; ++j) c[i][j] += x * b[l][j];
        }
    return c;
}

inline IVec matvec(const IMat& a, const IVec& v) {
    IVec r(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    return r;
}

inline IMat transpose(const IMat& a, int rows_if_empty = 0) {
    int n = a.size(), m = a.empty() ? rows_if_empty : a[0].size();
    IMat t(m, IVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) t[j][i] = a[i][j];
    return t;
}

inline IVec vadd(IVec a, const IVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline IVec vsub(IVec a, const IVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline IVec vneg(IVec a) {
    for (auto& x : a) x = -x;
    return a;
}
inline IVec vscale(IVec a, long long k) {
    for (auto& x : a) x *= k;
    return a;
}
inline bool is_zero(const IVec& v) {
    return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

inline std::string vec_str(const IVec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

// Bareiss fraction-free determinant.
inline long long det(IMat a) {
    int n = a.size();
    if (n == 0) return 1;
    std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = a[i][j];
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * (long long)m[n - 1][n - 1];
}

inline RMat to_rat(const IMat& a) {
    RMat r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i].assign(a[i].begin(), a[i].end());
    return r;
}

// Row-reduce in place to reduced echelon form; returns pivot columns.
inline std::vector<int> rref(RMat& m) {
    std::vector<int> piv;
    int rows = m.size(), cols = m.empty() ? 0 : m[0].size();
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = r;
        while (p < rows && m[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rat inv = Rat(1) / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rat f = m[i][c];
            for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

inline int rank(const IMat& a) {
    RMat m = to_rat(a);
    return rref(m).size();
}

// Basis of {v : A v = 0} over Q.
inline RMat kernel(const RMat& a, int cols) {
    RMat m = a;
    auto piv = rref(m);
    std::vector<bool> is_piv(cols, false);
    for (int c : piv) is_piv[c] = true;
    RMat basis;
    for (int f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        RVec v(cols, Rat(0));
        v[f] = 1;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][f];
        basis.push_back(v);
    }
    return basis;
}

// Solve A x = b (A square or overdetermined, consistent, full column rank).
inline std::optional<RVec> solve(const RMat& a, const RVec& b) {
    int rows = a.size(), cols = a.empty() ? 0 : a[0].size();
    RMat m(rows, RVec(cols + 1));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m[i][j] = a[i][j];
        m[i][cols] = b[i];
    }
    auto piv = rref(m);
    if (!piv.empty() && piv.back() == cols) return std::nullopt;
    if ((int)piv.size() != cols) throw std::runtime_error("solve: singular system");
    RVec x(cols);
    for (int i = 0; i < cols; ++i) x[i] = m[i][cols];
    return x;
}

inline std::optional<RMat> inverse(const RMat& a) {
    int n = a.size();
    RMat m(n, RVec(2 * n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = a[i][j];
        m[i][n + i] = 1;
    }
    auto piv = rref(m);
    if ((int)piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    RMat inv(n, RVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

inline IMat inverse_unimodular(const IMat& a) {
    auto inv = inverse(to_rat(a));
    if (!inv) throw std::runtime_error("matrix not invertible");
    IMat r(a.size(), IVec(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) {
            if (!(*inv)[i][j].is_integer()) throw std::runtime_error("matrix not unimodular");
            r[i][j] = (*inv)[i][j].num();
        }
    return r;
}

// Smith normal form: U * A * V = D with U, V unimodular.
struct SNF {
    IMat U, D, V;
    std::vector<long long> diag; // nonzero invariant factors, in order
    int rank = 0;
};

inline SNF smith(const IMat& a, int cols_if_empty = 0) {
    int m = a.size(), n = a.empty() ? cols_if_empty : a[0].size();
    SNF s;
    s.D = a;
    s.U = identity(m);
    s.V = identity(n);
    IMat& D = s.D;
    auto row_op = [&](int dst, int src, long long f) { // row dst -= f*row src
        for (int j = 0; j < n; ++j) D[dst][j] -= f * D[src][j];
        for (int j = 0; j < m; ++j) s.U[dst][j] -= f * s.U[src][j];
    };
    auto col_op = [&](int dst, int src, long long f) { // col dst -= f*col src
        for (int i = 0; i < m; ++i) D[i][dst] -= f * D[i][src];
        for (int i = 0; i < n; ++i) s.V[i][dst] -= f * s.V[i][src];
    };
    auto swap_rows = [&](int i, int j) { std::swap(D[i], D[j]); std::swap(s.U[i], s.U[j]); };
    auto swap_cols = [&](int i, int j) {
        for (auto& r : D) std::swap(r[i], r[j]);
        for (auto& r : s.V) std::swap(r[i], r[j]);
    };
    auto neg_row = [&](int i) {
        for (auto& x : D[i]) x = -x;
        for (auto& x : s.U[i]) x = -x;
    };
    int t = 0;
    for (; t < std::min(m, n); ++t) {
        for (;;) {
            int pi = -1, pj = -1;
            long long best = 0;
            for (int i = t; i < m; ++i)
                for (int j = t; j < n; ++j)
                    if (D[i][j] && (pi < 0 || std::llabs(D[i][j]) < best))
                        pi = i, pj = j, best = std::llabs(D[i][j]);
            if (pi < 0) goto done;
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool clean = true;
            for (int i = t + 1; i < m; ++i) {
                long long q = D[i][t] / D[t][t];
                if (q) row_op(i, t, q);
                if (D[i][t]) clean = false;
            }
            for (int j = t + 1; j < n; ++j) {
                long long q = D[t][j] / D[t][t];
                if (q) col_op(j, t, q);
                if (D[t][j]) clean = false;
            }
            if (!clean) continue;
            int bad = -1;
            for (int i = t + 1; i < m && bad < 0; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (D[i][j] % D[t][t]) { bad = i; break; }
            if (bad < 0) break;
            row_op(t, bad, -1);
        }
        if (D[t][t] < 0) neg_row(t);
    }
done:
    s.rank = t;
    for (int i = 0; i < t; ++i) s.diag.push_back(D[i][i]);
    return s;
}

// Invariant factors > 1 of Z^n / rowspan(gens).
inline std::vector<long long> torsion_factors(const IMat& gens, int n) {
    if (gens.empty()) return {};
    SNF s = smith(gens, n);
    std::vector<long long> out;
    for (long long d : s.diag)
        if (d > 1) out.push_back(d);
    return out;
}

// Canonical row-style Hermite normal form of the lattice spanned by rows.
inline IMat hnf(IMat a, int n) {
    int m = a.size();
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        for (;;) {
            int p = -1;
            for (int i = r; i < m; ++i)
                if (a[i][c] && (p < 0 || std::llabs(a[i][c]) < std::llabs(a[p][c]))) p = i;
            if (p < 0) break;
            std::swap(a[p], a[r]);
            bool done = true;
            for (int i = r + 1; i < m; ++i) {
                long long q = a[i][c] / a[r][c];
                if (q)
                    for (int j = 0; j < n; ++j) a[i][j] -= q * a[r][j];
                if (a[i][c]) done = false;
            }
            if (done) break;
        }
        if (r < m && a[r][c]) {
            if (a[r][c] < 0)
                for (auto& x : a[r]) x = -x;
            for (int i = 0; i < r; ++i) {
                long long q = a[i][c] / a[r][c];
                if (a[i][c] - q * a[r][c] < 0) --q;
                if (q)
                    for (int j = 0; j < n; ++j) a[i][j] -= q * a[r][j];
            }
            ++r;
        }
    }
    a.resize(r);
    return a;
}

// Basis of the saturation (Q-span ∩ Z^n) of the row lattice, in HNF.
inline IMat saturate(const IMat& rows, int n) {
    if (rows.empty()) return {};
    SNF s = smith(rows, n);
    IMat vinv = inverse_unimodular(s.V);
    IMat b(vinv.begin(), vinv.begin() + s.rank);
    return hnf(b, n);
}

// Integer coordinates of v in the given row basis, if they exist.
inline std::optional<IVec> coords(const IMat& basis, const IVec& v) {
    int k = basis.size(), n = v.size();
    if (k == 0) return is_zero(v) ? std::optional<IVec>(IVec{}) : std::nullopt;
    RMat a(n, RVec(k));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) a[i][j] = basis[j][i];
    RVec b(v.begin(), v.end());
    std::optional<RVec> x;
    try {
        x = solve(a, b);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
    if (!x) return std::nullopt;
    IVec out(k);
    for (int j = 0; j < k; ++j) {
        if (!(*x)[j].is_integer()) return std::nullopt;
        out[j] = (*x)[j].num();
    }
    return out;
}

inline bool in_span_q(const IMat& basis, const IVec& v) {
    if (basis.empty()) return is_zero(v);
    IMat m = basis;
    m.push_back(v);
    return rank(m) == rank(basis);
}

// Integer basis of ker(A) ∩ Z^n for the linear map v -> A v.
inline IMat int_kernel(const IMat& a, int n) {
    RMat k = kernel(to_rat(a), n);
    IMat rows;
    for (auto& v : k) {
        long long l = 1;
        for (auto& x : v) l = lcm_ll(l, x.den());
        IVec iv(n);
        for (int i = 0; i < n; ++i) iv[i] = (v[i] * Rat(l)).num();
        rows.push_back(iv);
    }
    return saturate(rows, n);
}

// Characters on a sublattice: given generators g_a with prescribed values
// v_a in Q/Z, describe all extensions to the saturation Sat of the span.
// Returns the Sat basis (rows of an adapted basis) and every solution as
// values on those rows.
struct CharSolutions {
    IMat basis;
    std::vector<RVec> solutions;
};

inline CharSolutions solve_characters(const IMat& gens, const RVec& vals, int n) {
    CharSolutions out;
    if (gens.empty()) {
        out.solutions.push_back({});
        return out;
    }
    SNF s = smith(gens, n);
    IMat vinv = inverse_unimodular(s.V);
    out.basis.assign(vinv.begin(), vinv.begin() + s.rank);
    int m = gens.size();
    RVec uv(m, Rat(0));
    for (int i = 0; i < m; ++i)
        for (int a = 0; a < m; ++a)
            if (s.U[i][a]) uv[i] += Rat(s.U[i][a]) * vals[a];
    for (int i = s.rank; i < m; ++i)
        if (!uv[i].frac().is_zero()) return out; // inconsistent
    std::vector<RVec> sols{RVec()};
    for (int i = 0; i < s.rank; ++i) {
        long long d = s.diag[i];
        std::vector<RVec> next;
        for (auto& p : sols)
            for (long long k = 0; k < d; ++k) {
                RVec q = p;
                q.push_back(((uv[i] + Rat(k)) / Rat(d)).frac());
                next.push_back(q);
            }
        sols.swap(next);
    }
    out.solutions = std::move(sols);
    return out;
}

} // namespace hk

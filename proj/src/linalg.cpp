#include "posheaf/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace psh {

QMat to_rational(const ZMat& m)
{
    QMat q(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) q.a[i] = Rat(m.a[i]);
    return q;
}

Rref rref(const QMat& m)
{
    Rref out;
    out.m = m;
    QMat& a = out.m;
    int r = 0;
    for (int j = 0; j < a.cols && r < a.rows; ++j) {
        int piv = -1;
        for (int i = r; i < a.rows; ++i)
            if (sgn(a(i, j)) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int k = 0; k < a.cols; ++k) std::swap(a(piv, k), a(r, k));
        if (a(r, j) != 1) {
            Rat inv = 1 / a(r, j);
            for (int k = j; k < a.cols; ++k)
                if (sgn(a(r, k)) != 0) a(r, k) *= inv;
        }
        for (int i = 0; i < a.rows; ++i) {
            if (i == r || sgn(a(i, j)) == 0) continue;
            Rat f = a(i, j);
            for (int k = j; k < a.cols; ++k)
                if (sgn(a(r, k)) != 0) a(i, k) -= f * a(r, k);
        }
        out.pivot_cols.push_back(j);
        ++r;
    }
    return out;
}

int rank(const QMat& m)
{
    return static_cast<int>(rref(m).pivot_cols.size());
}

int rank(const ZMat& m)
{
    // Bareiss fraction-free elimination; all divisions below are exact.
    ZMat a = m;
    Int prev = 1;
    int r = 0;
    for (int j = 0; j < a.cols && r < a.rows; ++j) {
        int piv = -1;
        for (int i = r; i < a.rows; ++i)
            if (sgn(a(i, j)) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int k = 0; k < a.cols; ++k) std::swap(a(piv, k), a(r, k));
        for (int i = r + 1; i < a.rows; ++i) {
            for (int k = j + 1; k < a.cols; ++k) {
                Int t = a(r, j) * a(i, k) - a(i, j) * a(r, k);
                mpz_divexact(a(i, k).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, j) = 0;
        }
        prev = a(r, j);
        ++r;
    }
    return r;
}

QMat kernel_basis(const QMat& m)
{
    Rref r = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : r.pivot_cols) is_pivot[c] = true;
    int k = m.cols - static_cast<int>(r.pivot_cols.size());
    QMat out(m.cols, k);
    int col = 0;
    for (int j = 0; j < m.cols; ++j) {
        if (is_pivot[j]) continue;
        out(j, col) = 1;
        for (size_t p = 0; p < r.pivot_cols.size(); ++p)
            out(r.pivot_cols[p], col) = -r.m(static_cast<int>(p), j);
        ++col;
    }
    return out;
}

QMat image_basis(const QMat& m)
{
    Rref r = rref(m);
    QMat out(m.rows, static_cast<int>(r.pivot_cols.size()));
    for (size_t p = 0; p < r.pivot_cols.size(); ++p)
        for (int i = 0; i < m.rows; ++i) out(i, static_cast<int>(p)) = m(i, r.pivot_cols[p]);
    return out;
}

std::optional<QMat> solve(const QMat& m, const QMat& b)
{
    if (m.rows != b.rows) throw Error("solve: rhs row mismatch");
    Rref r = rref(hstack(m, b));
    for (int c : r.pivot_cols)
        if (c >= m.cols) return std::nullopt;
    QMat x(m.cols, b.cols);
    for (size_t p = 0; p < r.pivot_cols.size(); ++p)
        for (int k = 0; k < b.cols; ++k)
            x(r.pivot_cols[p], k) = r.m(static_cast<int>(p), m.cols + k);
    return x;
}

namespace {

struct SnfWork {
    ZMat d, u, v;

    void row_swap(int i, int j)
    {
        if (i == j) return;
        for (int k = 0; k < d.cols; ++k) std::swap(d(i, k), d(j, k));
        for (int k = 0; k < u.cols; ++k) std::swap(u(i, k), u(j, k));
    }
    void col_swap(int i, int j)
    {
        if (i == j) return;
        for (int k = 0; k < d.rows; ++k) std::swap(d(k, i), d(k, j));
        for (int k = 0; k < v.rows; ++k) std::swap(v(k, i), v(k, j));
    }
    // row i -= q * row j
    void row_axpy(int i, int j, const Int& q)
    {
        if (sgn(q) == 0) return;
        for (int k = 0; k < d.cols; ++k) d(i, k) -= q * d(j, k);
        for (int k = 0; k < u.cols; ++k) u(i, k) -= q * u(j, k);
    }
    // col i -= q * col j
    void col_axpy(int i, int j, const Int& q)
    {
        if (sgn(q) == 0) return;
        for (int k = 0; k < d.rows; ++k) d(k, i) -= q * d(k, j);
        for (int k = 0; k < v.rows; ++k) v(k, i) -= q * v(k, j);
    }
    void row_negate(int i)
    {
        for (int k = 0; k < d.cols; ++k) d(i, k) = -d(i, k);
        for (int k = 0; k < u.cols; ++k) u(i, k) = -u(i, k);
    }

    // First occurrence (row-major) of a minimal-magnitude nonzero in the
    // submatrix d[s:, s:]; false when that submatrix is zero.
    bool find_pivot(int s, int& pi, int& pj)
    {
        bool found = false;
        Int best;
        for (int i = s; i < d.rows; ++i)
            for (int j = s; j < d.cols; ++j) {
                if (sgn(d(i, j)) == 0) continue;
                Int mag = abs(d(i, j));
                if (!found || mag < best) {
                    found = true;
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        return found;
    }
};

}  // namespace

Snf smith_normal_form(const ZMat& m)
{
    SnfWork w{m, ZMat::identity(m.rows), ZMat::identity(m.cols)};
    int nmin = std::min(m.rows, m.cols);
    for (int s = 0; s < nmin; ++s) {
        int pi, pj;
        if (!w.find_pivot(s, pi, pj)) break;
        for (;;) {
            w.row_swap(s, pi);
            w.col_swap(s, pj);
            // Knock down the rest of column s and row s with exact or
            // truncated quotients; leftover remainders shrink the pivot on
            // the next pass, so this terminates.
            bool clean = true;
            for (int i = s + 1; i < w.d.rows; ++i) {
                if (sgn(w.d(i, s)) == 0) continue;
                Int q = w.d(i, s) / w.d(s, s);  // truncated
                w.row_axpy(i, s, q);
                if (sgn(w.d(i, s)) != 0) clean = false;
            }
            for (int j = s + 1; j < w.d.cols; ++j) {
                if (sgn(w.d(s, j)) == 0) continue;
                Int q = w.d(s, j) / w.d(s, s);
                w.col_axpy(j, s, q);
                if (sgn(w.d(s, j)) != 0) clean = false;
            }
            if (!clean) {
                w.find_pivot(s, pi, pj);
                continue;
            }
            // Divisibility fix: the pivot must divide the whole remaining
            // block for the invariant-factor chain.
            int bi = -1;
            for (int i = s + 1; i < w.d.rows && bi < 0; ++i)
                for (int j = s + 1; j < w.d.cols; ++j)
                    if (sgn(w.d(i, j) % w.d(s, s)) != 0) {
                        bi = i;
                        break;
                    }
            if (bi < 0) break;
            w.row_axpy(s, bi, Int(-1));  // pull the offending row up, then re-reduce
            pi = s;
            pj = s;
        }
        if (sgn(w.d(s, s)) < 0) w.row_negate(s);
    }
    return Snf{w.u, w.d, w.v};
}

namespace {

void check_composition_zero_shape(int in_rows, int out_cols)
{
    if (in_rows != out_cols) throw Error("cohomology_step: ambient dimension mismatch");
}

CohomStep rational_step(const QMat& d_in, const QMat& d_out)
{
    check_composition_zero_shape(d_in.rows, d_out.cols);
    if (d_out.rows > 0 && d_in.cols > 0 && !(d_out * d_in).is_zero())
        throw Error("cohomology_step: differentials do not compose to zero");
    QMat z = kernel_basis(d_out);
    QMat bi = image_basis(d_in);
    CohomStep out;
    out.betti = z.cols - bi.cols;
    // Representatives: cocycle columns extending the coboundary basis, chosen
    // by the first-pivot scan so repeated runs agree.
    Rref r = rref(hstack(bi, z));
    out.representatives = QMat(d_in.rows, out.betti);
    int col = 0;
    for (int pc : r.pivot_cols) {
        if (pc < bi.cols) continue;
        for (int i = 0; i < d_in.rows; ++i) out.representatives(i, col) = z(i, pc - bi.cols);
        ++col;
    }
    if (col != out.betti) throw Error("cohomology_step: representative count mismatch");
    return out;
}

}  // namespace

CohomStep cohomology_step(const QMat& d_in, const QMat& d_out)
{
    return rational_step(d_in, d_out);
}

CohomStep cohomology_step(const ZMat& d_in, const ZMat& d_out)
{
    CohomStep out = rational_step(to_rational(d_in), to_rational(d_out));
    // Saturated kernel lattice of d_out: with u*d_out*v = D of rank r, the
    // columns of v past r form an integral basis of ker(d_out) that any
    // integer cocycle expands over integrally.
    Snf f = smith_normal_form(d_out);
    int r = 0;
    int nmin = std::min(f.d.rows, f.d.cols);
    for (int i = 0; i < nmin; ++i)
        if (sgn(f.d(i, i)) != 0) ++r;
    int n = d_out.cols;
    ZMat k(n, n - r);
    for (int i = 0; i < n; ++i)
        for (int j = r; j < n; ++j) k(i, j - r) = f.v(i, j);
    std::optional<QMat> x = solve(to_rational(k), to_rational(d_in));
    if (!x) throw Error("cohomology_step: coboundary not inside the cocycle lattice");
    ZMat xi(x->rows, x->cols);
    for (size_t i = 0; i < x->a.size(); ++i) {
        if (x->a[i].get_den() != 1)
            throw Error("cohomology_step: non-integral coordinates over a saturated kernel basis");
        xi.a[i] = x->a[i].get_num();
    }
    Snf g = smith_normal_form(xi);
    int gmin = std::min(g.d.rows, g.d.cols);
    for (int i = 0; i < gmin; ++i)
        if (g.d(i, i) > 1) out.torsion.push_back(g.d(i, i));
    return out;
}

std::string rat_string(const Rat& x)
{
    // Callers may hand us a fraction built straight from numerator and
    // denominator, which gmp does not reduce on its own.
    Rat r = x;
    r.canonicalize();
    return r.get_str();
}

std::optional<Rat> parse_rat(const std::string& s, bool strict)
{
    if (s.empty()) return std::nullopt;
    size_t slash = std::string::npos;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '-') {
            if (i != 0) return std::nullopt;
        } else if (c == '/') {
            if (slash != std::string::npos || i == 0 || i + 1 == s.size()) return std::nullopt;
            slash = i;
        } else if (c < '0' || c > '9') {
            return std::nullopt;
        }
    }
    if (s == "-") return std::nullopt;
    Rat v;
    if (v.set_str(s, 10) != 0) return std::nullopt;
    if (v.get_den() == 0) return std::nullopt;  // "x/0"
    v.canonicalize();
    if (strict && rat_string(v) != s) return std::nullopt;
    return v;
}

}  // namespace psh

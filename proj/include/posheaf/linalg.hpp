#pragma once

// Exact dense matrices over arbitrary-precision rationals and integers,
// plus the elimination routines the rest of the engine leans on. Everything
// here is deterministic: pivots are always the first nonzero candidate in
// scan order, so kernel/image/representative bases are reproducible.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace psh {

using Rat = mpq_class;
using Int = mpz_class;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

template <typename T>
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;  // row-major, rows*cols entries, value-initialized to 0

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * static_cast<size_t>(c)) {}

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n)
    {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero() const
    {
        for (const T& x : a)
            if (sgn(x) != 0) return false;
        return true;
    }

    Mat col(int j) const
    {
        Mat c(rows, 1);
        for (int i = 0; i < rows; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }
};

using QMat = Mat<Rat>;
using ZMat = Mat<Int>;

template <typename T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y)
{
    if (x.cols != y.rows) throw Error("matrix product shape mismatch");
    Mat<T> z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const T& v = x(i, k);
            if (sgn(v) == 0) continue;
            for (int j = 0; j < y.cols; ++j) {
                const T& w = y(k, j);
                if (sgn(w) == 0) continue;
                z(i, j) += v * w;
            }
        }
    return z;
}

template <typename T>
Mat<T> operator+(const Mat<T>& x, const Mat<T>& y)
{
    if (x.rows != y.rows || x.cols != y.cols) throw Error("matrix sum shape mismatch");
    Mat<T> z(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = x.a[i] + y.a[i];
    return z;
}

template <typename T>
Mat<T> operator-(const Mat<T>& x, const Mat<T>& y)
{
    if (x.rows != y.rows || x.cols != y.cols) throw Error("matrix difference shape mismatch");
    Mat<T> z(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = x.a[i] - y.a[i];
    return z;
}

template <typename T>
Mat<T> operator-(const Mat<T>& x)
{
    Mat<T> z(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = -x.a[i];
    return z;
}

// Columns of x followed by columns of y.
template <typename T>
Mat<T> hstack(const Mat<T>& x, const Mat<T>& y)
{
    if (x.rows != y.rows) throw Error("hstack row mismatch");
    Mat<T> z(x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) z(i, j) = x(i, j);
        for (int j = 0; j < y.cols; ++j) z(i, x.cols + j) = y(i, j);
    }
    return z;
}

template <typename T>
Mat<T> transpose(const Mat<T>& x)
{
    Mat<T> z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
    return z;
}

QMat to_rational(const ZMat& m);

// Reduced row echelon form. Pivot choice is the first row with a nonzero
// entry in the leftmost unfinished column, which makes every downstream
// basis deterministic.
struct Rref {
    QMat m;
    std::vector<int> pivot_cols;
};
Rref rref(const QMat& m);

int rank(const QMat& m);
int rank(const ZMat& m);  // fraction-free (Bareiss)

// Basis of the null space, one column per free variable, in column order.
QMat kernel_basis(const QMat& m);

// The columns of m sitting at the rref pivot positions (so an actual subset
// of the input columns, not a recombination).
QMat image_basis(const QMat& m);

// Any exact solution of m * x = b (columnwise for matrix b), with free
// variables pinned to zero; absent when inconsistent.
std::optional<QMat> solve(const QMat& m, const QMat& b);

// u * m * v = d with d diagonal, d_i | d_{i+1}, d_i >= 0, u and v unimodular.
struct Snf {
    ZMat u, d, v;
};
Snf smith_normal_form(const ZMat& m);

// One cohomology group of a complex ... -> C_in --d_in--> C --d_out--> ...
// Over the rationals: betti plus explicit cocycle representatives spanning a
// complement of the coboundaries inside the cocycles. Over the integers the
// torsion invariant factors (those > 1) are reported as well.
struct CohomStep {
    int betti = 0;
    std::vector<Int> torsion;
    QMat representatives;  // ambient_dim x betti
};
CohomStep cohomology_step(const QMat& d_in, const QMat& d_out);
CohomStep cohomology_step(const ZMat& d_in, const ZMat& d_out);

// Canonical rational strings: "p" when the denominator is 1, "p/q" with
// q > 1 and gcd(p,q) = 1 otherwise.
std::string rat_string(const Rat& x);
// strict = true rejects any spelling other than the canonical one ("2/4",
// "3/1", "+2", "02" all fail); otherwise the value is normalized.
std::optional<Rat> parse_rat(const std::string& s, bool strict);

}  // namespace psh

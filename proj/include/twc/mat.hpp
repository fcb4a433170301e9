#ifndef TWC_MAT_HPP
#define TWC_MAT_HPP

#include "twc/poly.hpp"

#include <algorithm>
#include <vector>

namespace twc {

/// Dense square matrix over an exact scalar ring (Rat or DualNum).
template <class S>
class Mat {
public:
    Mat() : n_(0) {}
    explicit Mat(int n) : n_(n), a_(static_cast<size_t>(n) * n, S(0))
    {
        if (n <= 0)
            throw std::invalid_argument("Mat: size must be positive");
    }

    static Mat identity(int n)
    {
        Mat m(n);
        for (int i = 0; i < n; ++i)
            m.at(i, i) = S(1);
        return m;
    }

    static Mat from_rows(const std::vector<std::vector<S>>& rows)
    {
        int n = static_cast<int>(rows.size());
        Mat m(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw std::invalid_argument("Mat::from_rows: not square");
            for (int j = 0; j < n; ++j)
                m.at(i, j) = rows[i][j];
        }
        return m;
    }

    int n() const { return n_; }
    S& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const S& at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    friend Mat operator+(const Mat& x, const Mat& y)
    {
        Mat r = x;
        for (size_t k = 0; k < r.a_.size(); ++k)
            r.a_[k] += y.a_[k];
        return r;
    }
    friend Mat operator-(const Mat& x, const Mat& y)
    {
        Mat r = x;
        for (size_t k = 0; k < r.a_.size(); ++k)
            r.a_[k] -= y.a_[k];
        return r;
    }
    friend Mat operator*(const Mat& x, const Mat& y)
    {
        Mat r(x.n_);
        for (int i = 0; i < x.n_; ++i)
            for (int k = 0; k < x.n_; ++k) {
                const S& xik = x.at(i, k);
                if (scalar_is_zero(xik))
                    continue;
                for (int j = 0; j < x.n_; ++j)
                    r.at(i, j) += xik * y.at(k, j);
            }
        return r;
    }
    friend Mat operator*(const S& c, const Mat& y)
    {
        Mat r = y;
        for (auto& v : r.a_)
            v = c * v;
        return r;
    }
    friend bool operator==(const Mat& x, const Mat& y) { return x.n_ == y.n_ && x.a_ == y.a_; }
    friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

    std::vector<S> apply(const std::vector<S>& v) const
    {
        std::vector<S> r(n_, S(0));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                r[i] += at(i, j) * v[j];
        return r;
    }

    S trace() const
    {
        S t(0);
        for (int i = 0; i < n_; ++i)
            t += at(i, i);
        return t;
    }

private:
    int n_;
    std::vector<S> a_;
};

/// Characteristic polynomial det(T*I - M), monic of degree n, by the
/// Faddeev-LeVerrier recurrence (exact; only divides by integers).
template <class S>
Poly<S> charpoly(const Mat<S>& m)
{
    int n = m.n();
    std::vector<S> c(static_cast<size_t>(n) + 1, S(0));
    c[n] = S(1);
    Mat<S> acc = Mat<S>::identity(n);
    for (int k = 1; k <= n; ++k) {
        acc = m * acc;
        S ck = -(acc.trace() / S(k));
        c[n - k] = ck;
        for (int i = 0; i < n; ++i)
            acc.at(i, i) += ck;
    }
    return Poly<S>(std::move(c));
}

template <class S>
Mat<S> eval_poly(const Poly<S>& p, const Mat<S>& m)
{
    Mat<S> acc(m.n());
    for (int k = p.degree(); k >= 0; --k) {
        acc = acc * m;
        S c = p.coeff(k);
        for (int i = 0; i < m.n(); ++i)
            acc.at(i, i) += c;
    }
    return acc;
}

namespace detail {

// Row echelon on an n x m grid; pivots must be units (true over a field for
// any nonzero entry; over dual numbers callers only reduce matrices whose
// residue already has full working rank). Returns pivot column list.
template <class S>
std::vector<int> echelonize(std::vector<std::vector<S>>& g)
{
    std::vector<int> pivots;
    int rows = static_cast<int>(g.size());
    int cols = rows ? static_cast<int>(g[0].size()) : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (scalar_is_unit(g[i][c])) {
                p = i;
                break;
            }
        if (p < 0)
            continue;
        std::swap(g[p], g[r]);
        S inv = S(1) / g[r][c];
        for (int j = c; j < cols; ++j)
            g[r][j] = inv * g[r][j];
        for (int i = 0; i < rows; ++i) {
            if (i == r || scalar_is_zero(g[i][c]))
                continue;
            S f = g[i][c];
            for (int j = c; j < cols; ++j)
                g[i][j] -= f * g[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

/// Rank over the rationals.
inline int rank(const std::vector<std::vector<Rat>>& rows)
{
    auto g = rows;
    return static_cast<int>(detail::echelonize(g).size());
}

inline int rank(const Mat<Rat>& m)
{
    std::vector<std::vector<Rat>> g(m.n(), std::vector<Rat>(m.n()));
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j)
            g[i][j] = m.at(i, j);
    return rank(g);
}

/// Basis of the null space; empty iff the matrix is invertible.
inline std::vector<std::vector<Rat>> kernel_basis(const Mat<Rat>& m)
{
    int n = m.n();
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g[i][j] = m.at(i, j);
    std::vector<int> pivots = detail::echelonize(g);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots)
        is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (int c = 0; c < n; ++c) {
        if (is_pivot[c])
            continue;
        std::vector<Rat> v(n, Rat(0));
        v[c] = Rat(1);
        for (size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -g[r][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Columns of m whose residues span the residue column space. For an
/// idempotent matrix over the dual numbers this is a free basis of the image.
template <class S>
std::vector<std::vector<S>> image_basis(const Mat<S>& m)
{
    int n = m.n();
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g[i][j] = scalar_residue(m.at(i, j));
    // column-select via echelon on the residue matrix
    std::vector<int> pivots = detail::echelonize(g);
    std::vector<std::vector<S>> basis;
    for (int c : pivots) {
        std::vector<S> col(n);
        for (int i = 0; i < n; ++i)
            col[i] = m.at(i, c);
        basis.push_back(std::move(col));
    }
    return basis;
}

/// Solves a (possibly rectangular) exact linear system A x = b over the
/// rationals, where A is given by columns. Returns nullopt when inconsistent.
inline std::optional<std::vector<Rat>> solve_columns(const std::vector<std::vector<Rat>>& cols,
                                                     const std::vector<Rat>& b)
{
    if (cols.empty())
        return std::nullopt;
    int n = static_cast<int>(cols[0].size());
    int k = static_cast<int>(cols.size());
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(k + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j)
            g[i][j] = cols[j][i];
        g[i][k] = b[i];
    }
    std::vector<int> pivots = detail::echelonize(g);
    std::vector<Rat> x(k, Rat(0));
    for (size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == k)
            return std::nullopt;  // pivot in the augmented column
        x[pivots[r]] = g[r][k];
    }
    // verify (guards against underdetermined inconsistencies)
    for (int i = 0; i < n; ++i) {
        Rat acc(0);
        for (int j = 0; j < k; ++j)
            acc += cols[j][i] * x[j];
        if (acc != b[i])
            return std::nullopt;
    }
    return x;
}

/// Inverse over the rationals; nullopt when singular.
inline std::optional<Mat<Rat>> inverse(const Mat<Rat>& m)
{
    int n = m.n();
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(2 * n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            g[i][j] = m.at(i, j);
        g[i][n + i] = Rat(1);
    }
    std::vector<int> pivots = detail::echelonize(g);
    if (static_cast<int>(pivots.size()) != n || pivots[n - 1] != n - 1)
        return std::nullopt;
    Mat<Rat> inv(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inv.at(i, j) = g[i][n + j];
    return inv;
}

/// Matrix of the action induced by m on span(basis); the span must be
/// m-stable, otherwise this throws.
inline Mat<Rat> restriction_matrix(const Mat<Rat>& m, const std::vector<std::vector<Rat>>& basis)
{
    int k = static_cast<int>(basis.size());
    Mat<Rat> r(k);
    for (int j = 0; j < k; ++j) {
        std::vector<Rat> img = m.apply(basis[j]);
        auto x = solve_columns(basis, img);
        if (!x)
            throw std::invalid_argument("restriction_matrix: subspace is not stable");
        for (int i = 0; i < k; ++i)
            r.at(i, j) = (*x)[i];
    }
    return r;
}

/// Completes the given independent columns to a basis of the ambient space
/// with standard unit vectors.
inline std::vector<std::vector<Rat>> complete_basis(const std::vector<std::vector<Rat>>& part,
                                                    int n)
{
    std::vector<std::vector<Rat>> basis = part;
    for (int c = 0; c < n && static_cast<int>(basis.size()) < n; ++c) {
        std::vector<Rat> e(n, Rat(0));
        e[c] = Rat(1);
        auto trial = basis;
        trial.push_back(e);
        std::vector<std::vector<Rat>> rows(trial.size(), std::vector<Rat>(n));
        for (size_t i = 0; i < trial.size(); ++i)
            rows[i] = trial[i];
        if (rank(rows) == static_cast<int>(trial.size()))
            basis.push_back(std::move(e));
    }
    if (static_cast<int>(basis.size()) != n)
        throw std::logic_error("complete_basis: could not complete");
    return basis;
}

/// Matrix of the action induced by m on ambient/span(w_basis).
inline Mat<Rat> quotient_matrix(const Mat<Rat>& m, const std::vector<std::vector<Rat>>& w_basis)
{
    int n = m.n();
    int k = static_cast<int>(w_basis.size());
    auto basis = complete_basis(w_basis, n);
    // change of basis: columns of C are the basis vectors
    Mat<Rat> c_mat(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            c_mat.at(i, j) = basis[j][i];
    auto c_inv = inverse(c_mat);
    if (!c_inv)
        throw std::logic_error("quotient_matrix: basis not invertible");
    Mat<Rat> conj = (*c_inv) * m * c_mat;
    Mat<Rat> q(n - k);
    for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j)
            q.at(i - k, j - k) = conj.at(i, j);
    return q;
}

}  // namespace twc

#endif

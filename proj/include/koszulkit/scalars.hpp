#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk {

struct Field {
    enum Kind { Rationals, PrimeField };
    Kind kind = Rationals;
    int64_t p = 0;

    static Field Q() { return {}; }
    static Field GF(int64_t p);
    bool operator==(const Field& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const Field& o) const { return !(*this == o); }
    std::string name() const;
    // "q", "gf2", "gf3", ...
    static Field parse(const std::string& s);
};

bool is_prime(int64_t n);

class field_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Scalar {
  public:
    Scalar() = default;
    explicit Scalar(const Field& f, long v = 0);
    Scalar(const Field& f, const mpq_class& v);

    const Field& field() const { return f_; }
    bool is_zero() const;
    bool is_one() const;
    int sign() const;  // for display; residues are nonnegative
    std::string str() const;
    mpq_class to_mpq() const;
    int64_t residue() const { return r_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inv() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

  private:
    void check(const Scalar& o) const;
    Field f_;
    mpq_class q_;
    int64_t r_ = 0;
};

enum class ArithOp { Add, Mul, Neg, Inv };
Scalar field_arith(const Scalar& a, const Scalar& b, ArithOp op);

// sparse matrix, row-major map storage; zero entries are never stored
class SparseMatrix {
  public:
    SparseMatrix() = default;
    SparseMatrix(Field f, int rows, int cols) : f_(f), rows_(rows), cols_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Field& field() const { return f_; }
    void add(int r, int c, const Scalar& v);
    void set(int r, int c, const Scalar& v);
    Scalar get(int r, int c) const;
    size_t nnz() const;
    const std::map<int, std::map<int, Scalar>>& row_map() const { return data_; }
    SparseMatrix operator*(const SparseMatrix& o) const;
    bool is_zero() const { return nnz() == 0; }
    std::vector<std::vector<Scalar>> dense() const;

  private:
    Field f_;
    int rows_ = 0, cols_ = 0;
    std::map<int, std::map<int, Scalar>> data_;
};

struct SolveResult {
    int rank = 0;
    std::optional<std::vector<Scalar>> solution;
    std::vector<std::vector<Scalar>> kernel_basis;
};

// Gauss-Jordan with Markowitz pivoting, ties broken by (row, col)
SolveResult solve_linear(const SparseMatrix& m, const std::optional<std::vector<Scalar>>& b = std::nullopt);
int rank(const SparseMatrix& m);

std::vector<Scalar> mat_vec(const SparseMatrix& m, const std::vector<Scalar>& x);

}  // namespace kk

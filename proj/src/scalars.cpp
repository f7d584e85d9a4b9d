#include "koszulkit/scalars.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace kk {

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field Field::GF(int64_t p) {
    if (!is_prime(p)) throw field_error("GF(" + std::to_string(p) + "): modulus is not prime");
    if (p > (int64_t(1) << 31)) throw field_error("prime too large");
    return {PrimeField, p};
}

std::string Field::name() const { return kind == Rationals ? "q" : "gf" + std::to_string(p); }

Field Field::parse(const std::string& s) {
    if (s == "q" || s == "Q" || s == "rationals") return Q();
    if (s.size() > 2 && (s.rfind("gf", 0) == 0 || s.rfind("GF", 0) == 0)) {
        int64_t p = 0;
        for (size_t i = 2; i < s.size(); ++i) {
            if (!isdigit((unsigned char)s[i])) throw field_error("bad field spec: " + s);
            p = p * 10 + (s[i] - '0');
            if (p > (int64_t(1) << 31)) throw field_error("prime too large: " + s);
        }
        return GF(p);
    }
    throw field_error("bad field spec: " + s);
}

static int64_t modp(int64_t a, int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
}

static int64_t modp_mpz(const mpz_class& z, int64_t p) {
    mpz_class r = z % p;
    if (r < 0) r += p;
    return r.get_si();
}

Scalar::Scalar(const Field& f, long v) : f_(f) {
    if (f_.kind == Field::Rationals)
        q_ = v;
    else
        r_ = modp(v, f_.p);
}

Scalar::Scalar(const Field& f, const mpq_class& v) : f_(f) {
    if (f_.kind == Field::Rationals) {
        q_ = v;
        q_.canonicalize();
    } else {
        int64_t n = modp_mpz(v.get_num(), f_.p), d = modp_mpz(v.get_den(), f_.p);
        if (d == 0) throw field_error("denominator divisible by p");
        r_ = modp(n * Scalar(f_, (long)d).inv().r_, f_.p);
    }
}

void Scalar::check(const Scalar& o) const {
    if (f_ != o.f_) throw field_error("mixing scalars from " + f_.name() + " and " + o.f_.name());
}

bool Scalar::is_zero() const { return f_.kind == Field::Rationals ? sgn(q_) == 0 : r_ == 0; }
bool Scalar::is_one() const { return f_.kind == Field::Rationals ? q_ == 1 : r_ == 1; }
int Scalar::sign() const { return f_.kind == Field::Rationals ? sgn(q_) : (r_ != 0); }

std::string Scalar::str() const { return f_.kind == Field::Rationals ? q_.get_str() : std::to_string(r_); }

mpq_class Scalar::to_mpq() const { return f_.kind == Field::Rationals ? q_ : mpq_class(r_); }

Scalar Scalar::operator+(const Scalar& o) const {
    check(o);
    Scalar s(f_);
    if (f_.kind == Field::Rationals)
        s.q_ = q_ + o.q_;
    else
        s.r_ = (r_ + o.r_) % f_.p;
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    check(o);
    Scalar s(f_);
    if (f_.kind == Field::Rationals)
        s.q_ = q_ * o.q_;
    else
        s.r_ = (r_ * o.r_) % f_.p;
    return s;
}

Scalar Scalar::operator-() const {
    Scalar s(f_);
    if (f_.kind == Field::Rationals)
        s.q_ = -q_;
    else
        s.r_ = r_ == 0 ? 0 : f_.p - r_;
    return s;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw field_error("inverse of zero");
    Scalar s(f_);
    if (f_.kind == Field::Rationals) {
        s.q_ = 1 / q_;
        return s;
    }
    // extended Euclid
    int64_t a = r_, m = f_.p, x0 = 1, x1 = 0;
    while (m) {
        int64_t q = a / m;
        std::tie(a, m) = std::make_pair(m, a - q * m);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    }
    s.r_ = modp(x0, f_.p);
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const {
    check(o);
    return *this * o.inv();
}

bool Scalar::operator==(const Scalar& o) const {
    check(o);
    return f_.kind == Field::Rationals ? q_ == o.q_ : r_ == o.r_;
}

Scalar field_arith(const Scalar& a, const Scalar& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Neg: return -a;
        case ArithOp::Inv: return a.inv();
    }
    return a;
}

void SparseMatrix::add(int r, int c, const Scalar& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index");
    if (v.is_zero()) return;
    auto& row = data_[r];
    auto it = row.find(c);
    if (it == row.end()) {
        row.emplace(c, v);
        return;
    }
    it->second += v;
    if (it->second.is_zero()) {
        row.erase(it);
        if (row.empty()) data_.erase(r);
    }
}

void SparseMatrix::set(int r, int c, const Scalar& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index");
    auto rit = data_.find(r);
    if (v.is_zero()) {
        if (rit != data_.end()) {
            rit->second.erase(c);
            if (rit->second.empty()) data_.erase(rit);
        }
        return;
    }
    data_[r][c] = v;
}

Scalar SparseMatrix::get(int r, int c) const {
    auto rit = data_.find(r);
    if (rit == data_.end()) return Scalar(f_);
    auto it = rit->second.find(c);
    return it == rit->second.end() ? Scalar(f_) : it->second;
}

size_t SparseMatrix::nnz() const {
    size_t n = 0;
    for (auto& [r, row] : data_) n += row.size();
    return n;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    SparseMatrix out(f_, rows_, o.cols_);
    for (auto& [r, row] : data_)
        for (auto& [k, v] : row) {
            auto it = o.data_.find(k);
            if (it == o.data_.end()) continue;
            for (auto& [c, w] : it->second) out.add(r, c, v * w);
        }
    return out;
}

std::vector<std::vector<Scalar>> SparseMatrix::dense() const {
    std::vector<std::vector<Scalar>> d(rows_, std::vector<Scalar>(cols_, Scalar(f_)));
    for (auto& [r, row] : data_)
        for (auto& [c, v] : row) d[r][c] = v;
    return d;
}

std::vector<Scalar> mat_vec(const SparseMatrix& m, const std::vector<Scalar>& x) {
    if ((int)x.size() != m.cols()) throw std::invalid_argument("mat_vec: dimension mismatch");
    std::vector<Scalar> y(m.rows(), Scalar(m.field()));
    for (auto& [r, row] : m.row_map())
        for (auto& [c, v] : row) y[r] += v * x[c];
    return y;
}

namespace {

using Row = std::map<int, Scalar>;

struct Eliminator {
    Field f;
    std::vector<Row> rows;
    std::vector<Scalar> rhs;
    bool with_rhs = false;
    std::vector<char> active;
    std::map<int, int> colcount;  // over active rows
    std::vector<std::pair<int, int>> pivots;

    void count(const Row& r, int delta) {
        for (auto& [c, v] : r) {
            int& n = colcount[c];
            n += delta;
            if (n == 0) colcount.erase(c);
        }
    }

    // row[dst] -= factor * row[src]
    void axpy(int dst, int src, const Scalar& factor) {
        bool act = active[dst];
        if (act) count(rows[dst], -1);
        Row& d = rows[dst];
        for (auto& [c, v] : rows[src]) {
            auto it = d.find(c);
            Scalar nv = (it == d.end() ? Scalar(f) : it->second) - factor * v;
            if (nv.is_zero()) {
                if (it != d.end()) d.erase(it);
            } else if (it == d.end())
                d.emplace(c, nv);
            else
                it->second = nv;
        }
        if (with_rhs) rhs[dst] -= factor * rhs[src];
        if (act) count(rows[dst], +1);
    }

    bool choose(int& pr, int& pc) {
        long best = std::numeric_limits<long>::max();
        for (size_t r = 0; r < rows.size(); ++r) {
            if (!active[r] || rows[r].empty()) continue;
            long rc = (long)rows[r].size() - 1;
            for (auto& [c, v] : rows[r]) {
                long cost = rc * (long)(colcount[c] - 1);
                if (cost < best) {
                    best = cost, pr = (int)r, pc = c;
                    if (best == 0) return true;
                }
            }
        }
        return best != std::numeric_limits<long>::max();
    }

    void run(bool full) {
        active.assign(rows.size(), 1);
        for (auto& r : rows) count(r, +1);
        int pr, pc;
        while (choose(pr, pc)) {
            active[pr] = 0;
            count(rows[pr], -1);
            Scalar pinv = rows[pr].at(pc).inv();
            for (auto& [c, v] : rows[pr]) v *= pinv;
            if (with_rhs) rhs[pr] *= pinv;
            for (size_t r = 0; r < rows.size(); ++r) {
                if ((int)r == pr || (!full && !active[r])) continue;
                auto it = rows[r].find(pc);
                if (it == rows[r].end()) continue;
                Scalar fac = it->second;
                axpy((int)r, pr, fac);
            }
            pivots.emplace_back(pr, pc);
        }
    }
};

Eliminator load(const SparseMatrix& m) {
    Eliminator e;
    e.f = m.field();
    e.rows.resize(m.rows());
    for (auto& [r, row] : m.row_map()) e.rows[r] = row;
    return e;
}

}  // namespace

int rank(const SparseMatrix& m) {
    Eliminator e = load(m);
    e.run(false);
    return (int)e.pivots.size();
}

SolveResult solve_linear(const SparseMatrix& m, const std::optional<std::vector<Scalar>>& b) {
    if (b && (int)b->size() != m.rows()) throw std::invalid_argument("solve_linear: rhs length mismatch");
    Eliminator e = load(m);
    if (b) {
        e.with_rhs = true;
        e.rhs = *b;
        for (auto& s : e.rhs)
            if (s.field() != m.field()) throw field_error("solve_linear: rhs field mismatch");
    }
    e.run(true);
    SolveResult res;
    res.rank = (int)e.pivots.size();
    std::vector<int> pivot_row_of_col(m.cols(), -1);
    for (auto [r, c] : e.pivots) pivot_row_of_col[c] = r;
    if (b) {
        bool ok = true;
        std::vector<char> is_pivot_row(m.rows(), 0);
        for (auto [r, c] : e.pivots) is_pivot_row[r] = 1;
        for (int r = 0; r < m.rows(); ++r)
            if (!is_pivot_row[r] && !e.rhs[r].is_zero()) ok = false;
        if (ok) {
            std::vector<Scalar> x(m.cols(), Scalar(m.field()));
            for (auto [r, c] : e.pivots) x[c] = e.rhs[r];
            res.solution = x;
        }
    }
    for (int fc = 0; fc < m.cols(); ++fc) {
        if (pivot_row_of_col[fc] >= 0) continue;
        std::vector<Scalar> v(m.cols(), Scalar(m.field()));
        v[fc] = Scalar(m.field(), 1);
        for (auto [r, c] : e.pivots) {
            auto it = e.rows[r].find(fc);
            if (it != e.rows[r].end()) v[c] = -it->second;
        }
        res.kernel_basis.push_back(std::move(v));
    }
    return res;
}

}  // namespace kk

#include "koszulkit/cubical.hpp"

#include <bit>

namespace kk {

namespace {

Scalar sgn(const Field& f, long e) { return Scalar(f, (e % 2 == 0) ? 1 : -1); }

// rewrite every input reference of a cube through g (which returns Zero/One or a new index)
template <class G>
Cube remap(const Cube& c, int k, G g) {
    Cube r{k, c.factors};
    for (auto& fac : r.factors)
        for (auto& p : fac) {
            p.op.k = k;
            for (auto& m : p.op.map)
                if (m >= 0) m = g(m);
        }
    return r;
}

Cube shifted(const Cube& c, int by) {
    return remap(c, c.k + by, [&](int m) { return m + by; });
}

CubeChain boundary_impl(const CubeChain& x, bool normalised) {
    CubeChain r(x.field());
    const Field& f = x.field();
    for (auto& [t, c] : x.terms()) {
        long pre = 0;
        for (size_t s = 0; s < t.size(); ++s) {
            for (int i = 0; i < t[s].k; ++i)
                for (int eps : {0, 1}) {
                    auto u = t;
                    u[s] = face(t[s], i, eps);
                    if (normalised && is_degenerate(u[s])) continue;
                    // (-1)^(i+1) (d^0 - d^1), i counted from 1
                    r.add(u, c * sgn(f, pre + i + 1 + eps));
                }
            pre += t[s].k;
        }
    }
    return r;
}

bool has_degenerate(const CubeTensor& t) {
    for (auto& c : t)
        if (is_degenerate(c)) return true;
    return false;
}

void note(CubeReport& r, const std::string& where, const CubeChain& res) {
    ++r.cases;
    r.terms += res.terms().size();
    if (res.is_zero()) return;
    r.ok = false;
    if (r.witnesses.size() < 8) r.witnesses.push_back({where, chain_str(res)});
}

CubeChain tensor(const Cube& a, const Cube& b) { return chain_of(CubeTensor{a, b}); }

std::string dims(int p, int q) { return std::to_string(p) + "," + std::to_string(q); }

}  // namespace

void CubeChain::add(const CubeTensor& t, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = t_.find(t);
    if (it == t_.end()) {
        t_.emplace(t, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

void CubeChain::add(const CubeChain& o, const Scalar& c) {
    for (auto& [t, v] : o.t_) add(t, v * c);
}

CubeChain CubeChain::operator-(const CubeChain& o) const {
    CubeChain r = *this;
    r.add(o, Scalar(f_, -1));
    return r;
}

Cube basic_cube(const std::string& sym, int n) { return product_cube({sym}, n); }

Cube product_cube(const std::vector<std::string>& syms, int n) {
    if (n < 0) throw std::invalid_argument("negative cube dimension");
    Cube c{n, {}};
    CubeOp id{n, {}};
    for (int i = 0; i < n; ++i) id.map.push_back(i);
    for (auto& s : syms) c.factors.push_back({CubePiece{s, id}});
    return c;
}

CubeChain chain_of(const Cube& c, Field f) { return chain_of(CubeTensor{c}, f); }

CubeChain chain_of(const CubeTensor& t, Field f) {
    CubeChain r(f);
    r.add(t, Scalar(f, 1));
    return r;
}

Cube face(const Cube& c, int i, int eps) {
    if (i < 0 || i >= c.k) throw std::out_of_range("face index");
    return remap(c, c.k - 1, [&](int m) { return m == i ? (eps ? CubeOp::One : CubeOp::Zero) : (m > i ? m - 1 : m); });
}

Cube degeneracy(const Cube& c, int i) {
    if (i < 0 || i > c.k) throw std::out_of_range("degeneracy index");
    return remap(c, c.k + 1, [&](int m) { return m >= i ? m + 1 : m; });
}

bool is_degenerate(const Cube& c) {
    std::vector<bool> used(c.k, false);
    for (auto& fac : c.factors)
        for (auto& p : fac)
            for (int m : p.op.map)
                if (m >= 0) used[m] = true;
    for (bool u : used)
        if (!u) return true;
    return false;
}

CubeChain cube_boundary(const CubeChain& x) { return boundary_impl(x, true); }

CubeChain cross_slots(const CubeChain& x, size_t slot) {
    CubeChain r(x.field());
    for (auto& [t, c] : x.terms()) {
        if (slot + 1 >= t.size()) throw std::out_of_range("cross slot");
        int k = t[slot].k + t[slot + 1].k;
        auto b = shifted(t[slot + 1], t[slot].k);
        auto m = remap(t[slot], k, [](int i) { return i; });
        m.factors.insert(m.factors.end(), b.factors.begin(), b.factors.end());
        CubeTensor u(t.begin(), t.begin() + slot);
        u.push_back(m);
        u.insert(u.end(), t.begin() + slot + 2, t.end());
        r.add(u, c);
    }
    return r;
}

CubeChain cross(const CubeChain& a, const CubeChain& b) {
    CubeChain ab(a.field());
    for (auto& [s, x] : a.terms())
        for (auto& [t, y] : b.terms()) {
            CubeTensor u = s;
            u.insert(u.end(), t.begin(), t.end());
            ab.add(u, x * y);
        }
    return cross_slots(ab, 0);
}

CubeChain pontryagin(const CubeChain& x, size_t slot, size_t j) {
    CubeChain r(x.field());
    for (auto& [t, c] : x.terms()) {
        if (slot >= t.size() || j + 1 >= t[slot].factors.size()) throw std::out_of_range("pontryagin factor");
        auto u = t;
        auto& fs = u[slot].factors;
        fs[j].insert(fs[j].end(), fs[j + 1].begin(), fs[j + 1].end());
        fs.erase(fs.begin() + j + 1);
        r.add(u, c);
    }
    return r;
}

CubeChain serre_diagonal(const CubeChain& x, size_t slot, size_t split) {
    CubeChain r(x.field());
    const Field& f = x.field();
    for (auto& [t, c] : x.terms()) {
        if (slot >= t.size()) throw std::out_of_range("diagonal slot");
        const Cube& cu = t[slot];
        if (split > cu.factors.size()) throw std::out_of_range("diagonal split");
        int n = cu.k;
        Cube front{0, {cu.factors.begin(), cu.factors.begin() + split}};
        Cube back{0, {cu.factors.begin() + split, cu.factors.end()}};
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> rank(n);
            int a = 0, b = 0;
            long inv = 0;
            for (int i = 0; i < n; ++i) {
                if (mask >> i & 1) {
                    rank[i] = a++;
                    inv += b;  // elements of J' before this element of J
                } else {
                    rank[i] = b++;
                }
            }
            auto l = remap(front, a, [&](int m) { return (mask >> m & 1) ? rank[m] : CubeOp::Zero; });
            auto rt = remap(back, b, [&](int m) { return (mask >> m & 1) ? CubeOp::One : rank[m]; });
            if (is_degenerate(l) || is_degenerate(rt)) continue;
            CubeTensor u(t.begin(), t.begin() + slot);
            u.push_back(l);
            u.push_back(rt);
            u.insert(u.end(), t.begin() + slot + 1, t.end());
            r.add(u, c * sgn(f, inv));
        }
    }
    return r;
}

std::string cube_str(const Cube& c) {
    auto piece = [&](const CubePiece& p) {
        bool id = true;
        for (size_t m = 0; m < p.op.map.size(); ++m) id &= p.op.map[m] == (int)m;
        if (id) return p.sym;
        std::string s = p.sym + "[";
        for (size_t m = 0; m < p.op.map.size(); ++m) {
            if (m) s += ",";
            int v = p.op.map[m];
            s += v == CubeOp::Zero ? "0" : v == CubeOp::One ? "1" : "y" + std::to_string(v + 1);
        }
        return s + "]";
    };
    std::string s;
    for (size_t i = 0; i < c.factors.size(); ++i) {
        if (i) s += ", ";
        for (size_t j = 0; j < c.factors[i].size(); ++j) s += (j ? "*" : "") + piece(c.factors[i][j]);
    }
    return c.factors.size() > 1 ? "(" + s + ")" : s;
}

std::string chain_str(const CubeChain& x) {
    if (x.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (auto& [t, c] : x.terms()) {
        bool neg = c.sign() < 0;
        Scalar a = neg ? -c : c;
        s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
        if (!a.is_one()) s += a.str() + "*";
        for (size_t i = 0; i < t.size(); ++i) s += (i ? " (x) " : "") + cube_str(t[i]);
        first = false;
    }
    return s;
}

CubeReport check_boundary_squared(int max_dim) {
    CubeReport r;
    r.name = "boundary squares to zero";
    for (int n = 0; n <= max_dim; ++n) {
        auto x = chain_of(basic_cube("s", n));
        note(r, "s of dim " + std::to_string(n), cube_boundary(cube_boundary(x)));
        auto y = chain_of(product_cube({"s", "t"}, n));
        note(r, "(s,t) of dim " + std::to_string(n), cube_boundary(cube_boundary(y)));
        for (int p = 0; p <= n; ++p) {
            auto z = chain_of(CubeTensor{basic_cube("s", p), basic_cube("t", n - p)});
            note(r, "s (x) t of dims " + dims(p, n - p), cube_boundary(cube_boundary(z)));
        }
    }
    return r;
}

CubeReport check_cross_leibniz(int max_dim) {
    CubeReport r;
    r.name = "boundary of a cross product";
    const Field f = Field::Q();
    for (int n = 0; n <= max_dim; ++n)
        for (int p = 0; p <= n; ++p) {
            auto a = chain_of(basic_cube("s", p)), b = chain_of(basic_cube("t", n - p));
            auto lhs = cube_boundary(cross(a, b));
            auto rhs = cross(cube_boundary(a), b);
            rhs.add(cross(a, cube_boundary(b)), sgn(f, p));
            note(r, "s x t of dims " + dims(p, n - p), lhs - rhs);
        }
    return r;
}

CubeReport check_serre_chain_map(int max_dim) {
    CubeReport r;
    r.name = "Serre diagonal commutes with the boundary";
    auto check = [&](const std::string& where, const CubeChain& x, size_t split) {
        note(r, where, cube_boundary(serre_diagonal(x, 0, split)) - serre_diagonal(cube_boundary(x), 0, split));
    };
    for (int n = 0; n <= max_dim; ++n) {
        std::string d = " of dim " + std::to_string(n);
        check("(s,t)" + d, chain_of(product_cube({"s", "t"}, n)), 1);
        check("(s,t,u) split 1" + d, chain_of(product_cube({"s", "t", "u"}, n)), 1);
        check("(s,t,u) split 2" + d, chain_of(product_cube({"s", "t", "u"}, n)), 2);
        for (int p = 0; p <= n; ++p)
            check("s x t of dims " + dims(p, n - p), cross(chain_of(basic_cube("s", p)), chain_of(basic_cube("t", n - p))), 1);
    }
    return r;
}

CubeReport check_serre_associative(int max_dim) {
    CubeReport r;
    r.name = "Serre diagonal is coassociative";
    for (int n = 0; n <= max_dim; ++n) {
        auto x = chain_of(product_cube({"s", "t", "u"}, n));
        auto lhs = serre_diagonal(serre_diagonal(x, 0, 2), 0, 1);  // (eta (x) Id) eta
        auto rhs = serre_diagonal(serre_diagonal(x, 0, 1), 1, 1);  // (Id (x) eta) eta
        note(r, "(s,t,u) of dim " + std::to_string(n), lhs - rhs);
    }
    return r;
}

CubeReport check_serre_product(int max_dim) {
    CubeReport r;
    r.name = "Serre diagonal is compatible with cross and Pontryagin products";
    for (int n = 0; n <= max_dim; ++n)
        for (int p = 0; p <= n; ++p) {
            // a = (u, v) on U x V, b = (v', w) on V x W
            auto ab = tensor(product_cube({"u", "v"}, p), product_cube({"v'", "w"}, n - p));
            auto one = serre_diagonal(serre_diagonal(pontryagin(cross_slots(ab, 0), 0, 1), 0, 1), 1, 1);
            auto two = pontryagin(cross_slots(serre_diagonal(serre_diagonal(ab, 0, 1), 2, 1), 1), 1, 0);
            note(r, "(u,v) (x) (v',w) of dims " + dims(p, n - p), one - two);
        }
    return r;
}

CubeReport check_degenerate_subcomplex(int max_dim) {
    CubeReport r;
    r.name = "degenerate cubes span a subcomplex";
    for (int n = 0; n < max_dim; ++n)
        for (int i = 0; i <= n; ++i)
            for (auto base : {basic_cube("s", n), product_cube({"s", "t"}, n)}) {
                auto x = chain_of(degeneracy(base, i));
                auto d = boundary_impl(x, false);
                CubeChain bad(d.field());
                for (auto& [t, c] : d.terms())
                    if (!has_degenerate(t)) bad.add(t, c);
                note(r, cube_str(degeneracy(base, i)), bad);
                // and the normalised boundary kills it outright
                note(r, "normalised " + cube_str(degeneracy(base, i)), cube_boundary(x));
            }
    return r;
}

}  // namespace kk

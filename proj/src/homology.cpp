#include "koszulkit/homology.hpp"

#include <algorithm>
#include <memory>
#include <set>

namespace kk {

void tadd(TensorElem& x, const Tensor& t, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = x.find(t);
    if (it == x.end()) {
        x.emplace(t, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) x.erase(it);
}

int ChainWindow::dim(int k) const {
    auto it = basis.find(k);
    return it == basis.end() ? 0 : (int)it->second.size();
}

const SparseMatrix& ChainWindow::dmat(int k) const {
    auto it = d.find(k);
    if (it == d.end()) throw algebra_error("window has no differential out of degree " + std::to_string(k));
    return it->second;
}

size_t word_weight(const Quiver& q, const Word& w) {
    size_t s = 0;
    for (int g : w.g) s += (size_t)q.gens[g].weight.value_or(1);
    return s;
}

std::vector<Word> enumerate_weighted(const Quiver& q, int degree, size_t max_weight, int shift,
                                     bool include_idempotents) {
    std::vector<Word> out;
    if (degree == 0 && include_idempotents)
        for (int v = 0; v < q.nv(); ++v) out.push_back(Word::idem(v));
    if (q.gens.empty() || max_weight == 0) return out;
    long lo = 0, hi = 0;
    for (auto& g : q.gens) lo = std::min<long>(lo, g.degree + shift), hi = std::max<long>(hi, g.degree + shift);
    std::vector<std::vector<int>> by_src(q.nv());
    for (size_t i = 0; i < q.gens.size(); ++i) by_src[q.gens[i].src].push_back((int)i);
    std::vector<int> cur;
    std::function<void(int, long, size_t)> rec = [&](int at, long deg, size_t wt) {
        if (!cur.empty() && deg == degree) out.push_back({cur, -1});
        long rem = (long)(max_weight - wt);  // at most this many further letters
        long need = degree - deg;
        if (need < rem * lo || need > rem * hi) return;
        for (int g : by_src[at]) {
            size_t gw = (size_t)q.gens[g].weight.value_or(1);
            if (wt + gw > max_weight) continue;
            cur.push_back(g);
            rec(q.gens[g].dst, deg + q.gens[g].degree + shift, wt + gw);
            cur.pop_back();
        }
    };
    for (int v = 0; v < q.nv(); ++v) rec(v, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<size_t> weight_bound(const Quiver& q, int degree, int shift) {
    if (q.gens.empty()) return 0;
    bool neg = true, pos = true;
    for (auto& g : q.gens) neg &= g.degree + shift < 0, pos &= g.degree + shift > 0;
    if (!neg && !pos) return std::nullopt;
    if ((neg && degree > 0) || (pos && degree < 0)) return 0;
    long k = std::labs(degree);
    size_t best = 0;
    for (auto& g : q.gens) {
        long dg = std::labs(g.degree + shift), wg = g.weight.value_or(1);
        best = std::max(best, (size_t)(k * wg / dg));
    }
    return best;
}

ChainWindow assemble_window(const ComplexSource& s, int dmin, int dmax, std::optional<size_t> max_len) {
    if (dmin > dmax) throw algebra_error("empty degree window");
    ChainWindow w;
    w.f = s.f;
    w.dmin = dmin;
    w.dmax = dmax;
    w.provenance = s.provenance;
    std::map<int, std::optional<size_t>> bound;
    for (int k = dmin - 1; k <= dmax + 1; ++k) bound[k] = s.size_bound ? s.size_bound(k) : std::nullopt;
    if (max_len) {
        w.max_len = *max_len;
    } else {
        size_t m = 0;
        for (auto& [k, b] : bound) {
            if (!b) throw algebra_error("source is not bounded in degree " + std::to_string(k) +
                                        "; a maximum length must be given");
            m = std::max(m, *b);
        }
        w.max_len = m;
    }
    for (int k = dmin - 1; k <= dmax + 1; ++k) {
        auto& b = w.basis[k];
        b = s.basis(k, w.max_len);
        auto& ix = w.index[k];
        auto& lb = w.labels[k];
        for (size_t i = 0; i < b.size(); ++i) {
            ix[b[i]] = (int)i;
            lb.push_back(s.label(b[i]));
        }
    }
    for (int k = dmin - 1; k <= dmax; ++k) {
        auto& src = w.basis[k];
        auto& tix = w.index[k + 1];
        SparseMatrix m(s.f, (int)w.basis[k + 1].size(), (int)src.size());
        size_t drop = 0;
        auto& lossy = w.lossy[k];
        lossy.assign(src.size(), false);
        for (size_t j = 0; j < src.size(); ++j)
            for (auto& [t, c] : s.d(src[j])) {
                auto it = tix.find(t);
                if (it == tix.end()) {
                    ++drop;
                    lossy[j] = true;
                    continue;
                }
                m.add(it->second, (int)j, c);
            }
        w.d[k] = std::move(m);
        w.dropped[k] = drop;
    }
    for (int k = dmin; k <= dmax; ++k) {
        bool ok = true;
        for (int j = k - 1; j <= k + 1; ++j) ok &= bound[j].has_value() && *bound[j] <= w.max_len;
        w.certified[k] = ok;
    }
    return w;
}

ChainWindow window_from_matrices(Field f, int dmin, int dmax, const std::map<int, int>& dims,
                                 const std::map<int, SparseMatrix>& d) {
    ChainWindow w;
    w.f = f;
    w.dmin = dmin;
    w.dmax = dmax;
    w.provenance = "matrices";
    auto dimof = [&](int k) {
        auto it = dims.find(k);
        return it == dims.end() ? 0 : it->second;
    };
    for (int k = dmin - 1; k <= dmax + 1; ++k)
        for (int i = 0; i < dimof(k); ++i) {
            Tensor t{Word::idem(i)};
            w.index[k][t] = i;
            w.basis[k].push_back(t);
            w.labels[k].push_back("x" + std::to_string(k) + "_" + std::to_string(i));
        }
    for (int k = dmin - 1; k <= dmax; ++k) {
        auto it = d.find(k);
        if (it != d.end()) {
            if (it->second.rows() != dimof(k + 1) || it->second.cols() != dimof(k))
                throw algebra_error("matrix shape does not match dimensions at degree " + std::to_string(k));
            w.d[k] = it->second;
        } else {
            w.d[k] = SparseMatrix(f, dimof(k + 1), dimof(k));
        }
        w.dropped[k] = 0;
        w.lossy[k].assign(dimof(k), false);
    }
    for (int k = dmin; k <= dmax; ++k) w.certified[k] = true;
    return w;
}

SquareCheck check_d_squared(const ChainWindow& w) {
    SquareCheck r;
    bool genuine = false;
    for (int k = w.dmin - 1; k < w.dmax; ++k) {
        auto dd = w.dmat(k + 1) * w.dmat(k);
        if (dd.is_zero()) continue;
        r.ok = false;
        // a failing column is a truncation artifact if its d, or the d of a term of it, lost terms
        std::set<int> fail_cols;
        for (auto& [row, cols] : dd.row_map())
            for (auto& [col, v] : cols) fail_cols.insert(col);
        auto& l0 = w.lossy.at(k);
        auto& l1 = w.lossy.at(k + 1);
        for (int col : fail_cols) {
            bool lost = l0[col];
            for (auto& [row, cols] : w.dmat(k).row_map())
                if (cols.count(col) && l1[row]) lost = true;
            genuine |= !lost;
        }
        std::map<int, std::string> per_col;
        for (auto& [row, cols] : dd.row_map())
            for (auto& [col, v] : cols) {
                auto& s = per_col[col];
                s += (s.empty() ? "" : " + ") + v.str() + "*" + w.labels.at(k + 2)[row];
            }
        for (auto& [col, s] : per_col) r.witnesses.push_back({"d^2(" + w.labels.at(k)[col] + ")", s});
    }
    r.clipped = !r.ok && !genuine;
    return r;
}

std::map<int, int> betti(const ChainWindow& w) {
    auto sq = check_d_squared(w);
    if (!sq.ok)
        throw algebra_error(std::string(sq.clipped ? "truncation is not a complex (terms lost at max_len): "
                                                   : "d^2 != 0 in window: ") +
                            sq.witnesses[0].where + " = " + sq.witnesses[0].residue);
    std::map<int, int> out;
    std::map<int, int> rk;
    for (int k = w.dmin - 1; k <= w.dmax; ++k) rk[k] = rank(w.dmat(k));
    for (int k = w.dmin; k <= w.dmax; ++k) out[k] = w.dim(k) - rk[k] - rk[k - 1];
    return out;
}

long euler_dims(const ChainWindow& w) {
    long e = 0;
    for (int k = w.dmin; k <= w.dmax; ++k) e += (k % 2 == 0 ? 1 : -1) * (long)w.dim(k);
    return e;
}

ChainMap assemble_map(const ChainWindow& src, const ChainWindow& tgt, const std::function<TensorElem(const Tensor&)>& f) {
    ChainMap m;
    for (int k = src.dmin - 1; k <= src.dmax + 1; ++k) {
        SparseMatrix mat(src.f, tgt.dim(k), src.dim(k));
        auto sit = src.basis.find(k);
        auto tit = tgt.index.find(k);
        if (sit != src.basis.end())
            for (size_t j = 0; j < sit->second.size(); ++j)
                for (auto& [t, c] : f(sit->second[j])) {
                    if (tit == tgt.index.end() || !tit->second.count(t))
                        throw algebra_error("chain map image leaves the target window in degree " + std::to_string(k));
                    mat.add(tit->second.at(t), (int)j, c);
                }
        m.f[k] = std::move(mat);
    }
    return m;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
    ChainMap r;
    for (auto& [k, fm] : f.f) {
        auto it = g.f.find(k);
        if (it == g.f.end()) throw algebra_error("compose: degree mismatch");
        r.f[k] = it->second * fm;
    }
    return r;
}

static std::vector<std::vector<Scalar>> columns(const SparseMatrix& m) {
    std::vector<std::vector<Scalar>> c(m.cols(), std::vector<Scalar>(m.rows(), Scalar(m.field())));
    for (auto& [r, cols] : m.row_map())
        for (auto& [j, v] : cols) c[j][r] = v;
    return c;
}

QuasiIso quasi_iso(const ChainWindow& src, const ChainWindow& tgt, const ChainMap& f) {
    QuasiIso q;
    // chain map check on every square inside the stored range
    for (int k = src.dmin - 1; k <= src.dmax; ++k) {
        auto lhs = f.f.at(k + 1) * src.dmat(k);
        auto rhs = tgt.dmat(k) * f.f.at(k);
        auto l = lhs.dense(), r = rhs.dense();
        for (size_t j = 0; j < (size_t)src.dim(k); ++j)
            for (size_t i = 0; i < (size_t)tgt.dim(k + 1); ++i)
                if (!(l[i][j] == r[i][j])) {
                    q.chain_map = false;
                    q.witnesses.push_back({"f d - d f on " + src.labels.at(k)[j],
                                           (l[i][j] - r[i][j]).str() + "*" + tgt.labels.at(k + 1)[i]});
                    break;
                }
    }
    if (!q.chain_map) return q;
    auto bs = betti(src), bt = betti(tgt);
    q.iso = true;
    for (int k = src.dmin; k <= src.dmax; ++k) {
        const Field fl = src.f;
        auto z = solve_linear(src.dmat(k)).kernel_basis;
        auto bcols = columns(tgt.dmat(k - 1));
        int rb = rank(tgt.dmat(k - 1));
        SparseMatrix m(fl, tgt.dim(k), (int)(bcols.size() + z.size()));
        for (size_t j = 0; j < bcols.size(); ++j)
            for (int i = 0; i < tgt.dim(k); ++i) m.add(i, (int)j, bcols[j][i]);
        for (size_t j = 0; j < z.size(); ++j) {
            auto im = mat_vec(f.f.at(k), z[j]);
            for (int i = 0; i < tgt.dim(k); ++i) m.add(i, (int)(bcols.size() + j), im[i]);
        }
        int induced = rank(m) - rb;
        q.ranks[k] = {bs[k], bt[k], induced};
        if (!(induced == bs[k] && induced == bt[k])) q.iso = false;
    }
    return q;
}

namespace {

std::string tensor_label(const Quiver& q, const Tensor& t) {
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += " (x) ";
        s += t[i].empty() ? "e" + q.ring.vertices[t[i].v] : word_str(q, t[i], "*");
    }
    return s;
}

TensorElem lift(const Element& x) {
    TensorElem r;
    for (auto& [w, c] : x.terms()) tadd(r, {w}, c);
    return r;
}

}  // namespace

ComplexSource dga_source(const FreeDGA& a) {
    ComplexSource s;
    s.f = a.f;
    s.provenance = "free DG algebra";
    auto q = std::make_shared<Quiver>(a.q);
    s.basis = [q](int k, size_t n) {
        std::vector<Tensor> out;
        for (auto& w : enumerate_weighted(*q, k, n)) out.push_back(Tensor{w});
        return out;
    };
    s.d = [a](const Tensor& t) { return lift(a.diff(Element::word(a.f, t[0]))); };
    s.label = [q](const Tensor& t) { return tensor_label(*q, t); };
    s.size_bound = [q](int k) { return weight_bound(*q, k); };
    return s;
}

ComplexSource coalg_source(const AInfCoalg& c) {
    ComplexSource s;
    s.f = c.f;
    s.provenance = "coalgebra";
    auto q = std::make_shared<Quiver>(c.q);
    s.basis = [q](int k, size_t) {
        std::vector<Tensor> out;
        if (k == 0)
            for (int v = 0; v < q->nv(); ++v) out.push_back(Tensor{Word::idem(v)});
        for (size_t g = 0; g < q->gens.size(); ++g)
            if (q->gens[g].degree == k) out.push_back(Tensor{Word::letter((int)g)});
        return out;
    };
    s.d = [c](const Tensor& t) {
        if (t[0].empty()) return TensorElem{};
        return lift(c.delta_i(t[0].g[0], 1));
    };
    s.label = [q](const Tensor& t) { return tensor_label(*q, t); };
    s.size_bound = [](int) { return std::optional<size_t>(1); };
    return s;
}

ComplexSource alg_source(const AInfAlg& a) {
    ComplexSource s;
    s.f = a.f;
    s.provenance = "A-infinity algebra";
    auto q = std::make_shared<Quiver>(a.q);
    s.basis = [q](int k, size_t) {
        std::vector<Tensor> out;
        if (k == 0)
            for (int v = 0; v < q->nv(); ++v) out.push_back(Tensor{Word::idem(v)});
        for (size_t g = 0; g < q->gens.size(); ++g)
            if (q->gens[g].degree == k) out.push_back(Tensor{Word::letter((int)g)});
        return out;
    };
    s.d = [a](const Tensor& t) {
        if (t[0].empty()) return TensorElem{};
        return lift(a.m({t[0]}));
    };
    s.label = [q](const Tensor& t) { return tensor_label(*q, t); };
    s.size_bound = [](int) { return std::optional<size_t>(1); };
    return s;
}

}  // namespace kk

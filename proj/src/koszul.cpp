#include "koszulkit/koszul.hpp"

#include <memory>

namespace kk {

namespace {

Scalar sgn(Field f, long e) { return Scalar(f, (e % 2 == 0) ? 1 : -1); }

int gdeg(const Quiver& q, int g) { return q.gens[g].degree; }

// A-infinity normalised m1, m2 of the target
Element tm1(const DGTarget& a, const Element& x) {
    if (a.free) return a.free->m1(x);
    Element r(a.f);
    for (auto& [w, c] : x.terms())
        if (!w.empty()) r.add(a.fin->m({w}), c);
    return r;
}

Element tm2(const DGTarget& a, const Element& x, const Element& y) {
    if (a.free) return a.free->m2(x, y);
    Element r(a.f);
    for (auto& [wx, cx] : x.terms())
        for (auto& [wy, cy] : y.terms()) r.add(a.fin->m({wx, wy}), cx * cy);
    return r;
}

// ordinary differential and product
Element odiff(const DGTarget& a, TwistConvention conv, const Element& x) {
    if (a.free && conv == TwistConvention::Printed) {
        Derivation d = a.free->d;
        d.rule = Leibniz::Left;
        return apply_derivation(a.q, d, x);
    }
    Element r(a.f);
    for (auto& [w, c] : x.terms()) {
        if (w.empty()) continue;
        r.add(tm1(a, Element(a.f, w, c)), sgn(a.f, word_degree(a.q, w)));
    }
    return r;
}

Element oprod(const DGTarget& a, const Element& x, const Element& y) {
    if (a.free) return mul(a.q, x, y);
    Element r(a.f);
    for (auto& [wx, cx] : x.terms())
        for (auto& [wy, cy] : y.terms()) {
            // the unit acts without sign
            Scalar s = wx.empty() || wy.empty() ? Scalar(a.f, 1) : sgn(a.f, word_degree(a.q, wy));
            r.add(a.fin->m({wx, wy}), cx * cy * s);
        }
    return r;
}

// Delta of a generator in the ordinary reading
Element odelta(const Twist& t, int g) {
    auto it = t.src.delta.find(g);
    if (it == t.src.delta.end()) return Element(t.src.f);
    if (t.conv == TwistConvention::Printed) return it->second;
    return it->second * sgn(t.src.f, gdeg(t.src.q, g) + 1);
}

std::string term_text(const Quiver& q, const Word& w, const Scalar& c, bool first) {
    std::string s;
    bool neg = c.sign() < 0;
    Scalar a = neg ? -c : c;
    if (neg) s += first ? "-" : " - ";
    else if (!first) s += " + ";
    if (!a.is_one()) s += a.str() + " ";
    for (size_t i = 0; i < w.len(); ++i) s += (i ? " t(" : "t(") + q.gens[w.g[i]].name + ")";
    return s;
}

}  // namespace

std::string convention_name(TwistConvention c) { return c == TwistConvention::Printed ? "printed" : "koszul"; }

TwistConvention parse_convention(const std::string& s) {
    if (s == "printed") return TwistConvention::Printed;
    if (s == "koszul") return TwistConvention::Koszul;
    throw algebra_error("unknown twist convention '" + s + "' (printed, koszul)");
}

DGTarget dg_target(const FreeDGA& a) {
    DGTarget t;
    t.q = a.q;
    t.f = a.f;
    t.free = a;
    t.augmentation = a.augmentation;
    return t;
}

DGTarget dg_target(const AInfAlg& a) {
    if (a.max_arity() > 2)
        throw algebra_error("twisting cochains need a DG algebra target (m_i = 0 for i >= 3); "
                            "A-infinity targets are not supported");
    DGTarget t;
    t.q = a.q;
    t.f = a.f;
    t.fin = a;
    t.augmentation = a.augmentation;
    return t;
}

Element Twist::value(int g) const {
    auto it = t.find(g);
    return it == t.end() ? Element(tgt.f) : it->second;
}

Twist universal_twist(const CobarObject& o) {
    Twist t;
    t.src = o.src;
    t.tgt = dg_target(o.alg);
    t.conv = TwistConvention::Koszul;
    for (auto& [g, e] : universal_cochain(o).t) t.t[g] = e;
    return t;
}

Twist universal_bar_twist(const AInfAlg& a, size_t max_len) {
    Twist t;
    t.src = bar_coalgebra(a, max_len);
    t.tgt = dg_target(a);
    t.conv = TwistConvention::Koszul;
    t.t = universal_bar_cochain(t.src, a);
    return t;
}

std::map<int, Element> ordinary_residues(const Twist& t) {
    std::map<int, Element> out;
    for (size_t g = 0; g < t.src.q.gens.size(); ++g) {
        Element r = odiff(t.tgt, t.conv, t.value((int)g));
        Element dg = odelta(t, (int)g);
        for (auto& [w, c] : dg.terms()) {
            Element acc = t.value(w.g[0]);
            for (size_t i = 1; i < w.len(); ++i) acc = oprod(t.tgt, acc, t.value(w.g[i]));
            r.add(acc, -c);
        }
        out[(int)g] = r;
    }
    return out;
}

namespace {

Element koszul_residue(const Twist& t, int g) {
    const Field f = t.tgt.f;
    Element r = tm1(t.tgt, t.value(g));
    auto it = t.src.delta.find(g);
    if (it == t.src.delta.end()) return r;
    for (auto& [w, c] : it->second.terms()) {
        size_t d = w.len();
        if (d == 1) {
            r.add(t.value(w.g[0]), -c);
            continue;
        }
        // w = c_d ... c_1, c_i = w[d - i]; t^{(x)d} carries sum_{j>=2} sum_{i<j} |c_i|
        long dag = 0;
        for (size_t j = 2; j <= d; ++j)
            for (size_t i = 1; i < j; ++i) dag += gdeg(t.src.q, w.g[d - i]);
        Element acc = t.value(w.g[d - 1]);
        for (size_t k = d - 1; k-- > 0;) acc = tm2(t.tgt, t.value(w.g[k]), acc);
        r.add(acc, c * sgn(f, (long)d + dag));
    }
    return r;
}

}  // namespace

TwistReport verify_twist(const Twist& t) {
    TwistReport rep;
    rep.conv = t.conv;
    auto ord = t.conv == TwistConvention::Printed ? ordinary_residues(t) : std::map<int, Element>{};
    auto fail = [&](TwistEquation& eq, const std::string& where, const std::string& what) {
        eq.ok = false;
        rep.ok = false;
        rep.residues.push_back({where, what});
        if (eq.residue.empty()) eq.residue = what;
    };
    for (size_t gi = 0; gi < t.src.q.gens.size(); ++gi) {
        int g = (int)gi;
        const auto& gs = t.src.q.gens[g];
        TwistEquation eq;
        eq.gen = gs.name;
        if (t.conv == TwistConvention::Printed) {
            eq.text = "d t(" + gs.name + ") = ";
            Element dg = odelta(t, g);
            if (dg.is_zero()) eq.text += "0";
            bool first = true;
            for (auto& [w, c] : dg.terms()) {
                eq.text += term_text(t.src.q, w, c, first);
                first = false;
            }
        } else {
            eq.text = "m1 t(" + gs.name + ") - t(D1 " + gs.name + ") + sum_d (-1)^d m2^(d) t^(d) D_d(" + gs.name +
                      ") = 0";
        }
        Element v = t.value(g);
        for (auto& [w, c] : v.terms()) {
            if (w.empty()) {
                fail(eq, "t(" + gs.name + ")", "has a constant term");
                continue;
            }
            if (word_degree(t.tgt.q, w) != gs.degree + 1)
                fail(eq, "t(" + gs.name + ")",
                     "term " + word_str(t.tgt.q, w, " ") + " has degree " + std::to_string(word_degree(t.tgt.q, w)) +
                         ", expected " + std::to_string(gs.degree + 1));
            if (word_src(t.tgt.q, w) != gs.src || word_dst(t.tgt.q, w) != gs.dst)
                fail(eq, "t(" + gs.name + ")", "term " + word_str(t.tgt.q, w, " ") + " has the wrong endpoints");
        }
        if (!v.is_zero() && !t.tgt.augmentation.empty()) {
            AugMap e{t.tgt.augmentation};
            if (!eval_aug(t.tgt.q, e, v).is_zero()) fail(eq, "t(" + gs.name + ")", "augmentation does not vanish");
        }
        Element r = t.conv == TwistConvention::Printed ? ord.at(g) : koszul_residue(t, g);
        if (!r.is_zero()) fail(eq, "equation on " + gs.name, elem_str(t.tgt.q, r, " "));
        rep.equations.push_back(eq);
    }
    return rep;
}

std::string shape_name(TensorShape s) {
    switch (s) {
        case TensorShape::AC: return "A(x)C";
        case TensorShape::CA: return "C(x)A";
        default: return "A(x)C(x)A";
    }
}

TensorShape parse_shape(const std::string& s) {
    if (s == "AC" || s == "A(x)C") return TensorShape::AC;
    if (s == "CA" || s == "C(x)A") return TensorShape::CA;
    if (s == "ACA" || s == "A(x)C(x)A" || s == "A(x)BarA(x)A") return TensorShape::ACA;
    throw algebra_error("unknown tensor shape '" + s + "' (AC, CA, ACA)");
}

namespace {

struct Ctx {
    Twist t;
    std::vector<Element> tv;    // t on generators
    std::vector<Element> dlt;   // ordinary Delta on generators

    const Quiver& aq() const { return t.tgt.q; }
    const Quiver& cq() const { return t.src.q; }
    Field f() const { return t.tgt.f; }

    size_t aweight(const Word& w) const { return t.tgt.free ? word_weight(aq(), w) : w.len(); }

    std::vector<Word> abasis(int k, size_t n) const {
        if (t.tgt.free) return enumerate_weighted(aq(), k, n);
        std::vector<Word> out;
        if (k == 0)
            for (int v = 0; v < aq().nv(); ++v) out.push_back(Word::idem(v));
        if (n >= 1)
            for (size_t g = 0; g < aq().gens.size(); ++g)
                if (aq().gens[g].degree == k) out.push_back(Word::letter((int)g));
        return out;
    }
    std::optional<size_t> abound(int k) const {
        if (t.tgt.free) return weight_bound(aq(), k);
        return 1;
    }
    // range of A degrees reachable with weight <= n
    std::pair<int, int> arange(size_t n) const {
        int lo = 0, hi = 0;
        for (auto& g : aq().gens) {
            long w = t.tgt.free ? g.weight.value_or(1) : 1;
            long m = (long)n / std::max(1L, w);
            lo = std::min<long>(lo, g.degree * m);
            hi = std::max<long>(hi, g.degree * m);
        }
        return {lo, hi};
    }
    std::vector<Word> cbasis() const {
        std::vector<Word> out;
        for (int v = 0; v < cq().nv(); ++v) out.push_back(Word::idem(v));
        for (size_t g = 0; g < cq().gens.size(); ++g) out.push_back(Word::letter((int)g));
        return out;
    }
    int cdeg(const Word& c) const { return c.empty() ? 0 : gdeg(cq(), c.g[0]); }
    int csrc(const Word& c) const { return word_src(cq(), c); }
    int cdst(const Word& c) const { return word_dst(cq(), c); }
    int adeg(const Word& a) const { return word_degree(aq(), a); }
    Element aw(const Word& a) const { return Element::word(f(), a); }
    Element d(const Element& x) const { return odiff(t.tgt, t.conv, x); }
    Element p(const Element& x, const Element& y) const { return oprod(t.tgt, x, y); }
};

void put2(TensorElem& r, const Element& a, const Word& c, const Scalar& s) {
    for (auto& [w, k] : a.terms()) tadd(r, {w, c}, k * s);
}

void put3(TensorElem& r, const Element& a, const Word& c, const Element& b, const Scalar& s) {
    for (auto& [wa, ka] : a.terms())
        for (auto& [wb, kb] : b.terms()) tadd(r, {wa, c, wb}, ka * kb * s);
}

// sum over Delta(g) = sum coef c_d ... c_1 of coef (a t(c_d) ... t(c_2)) (x) c_1
template <class F>
void left_terms(const Ctx& x, int g, const Element& a, F emit) {
    for (auto& [w, c] : x.dlt[g].terms()) {
        Element acc = a;
        for (size_t i = 0; i + 1 < w.len(); ++i) acc = x.p(acc, x.tv[w.g[i]]);
        emit(acc, Word::letter(w.g.back()), c, w.len());
    }
}

// sum of coef c_d (x) (t(c_{d-1}) ... t(c_1) b)
template <class F>
void right_terms(const Ctx& x, int g, const Element& b, F emit) {
    for (auto& [w, c] : x.dlt[g].terms()) {
        Element acc = b;
        for (size_t i = w.len(); i-- > 1;) acc = x.p(x.tv[w.g[i]], acc);
        emit(Word::letter(w.g[0]), acc, c, w.len());
    }
}

std::string tlabel(const Ctx& x, const Tensor& t, TensorShape s) {
    auto a = [&](const Word& w) { return w.empty() ? "e" + x.aq().ring.vertices[w.v] : word_str(x.aq(), w, "*"); };
    auto c = [&](const Word& w) { return w.empty() ? "e" + x.cq().ring.vertices[w.v] : x.cq().gens[w.g[0]].name; };
    switch (s) {
        case TensorShape::AC: return a(t[0]) + " (x) " + c(t[1]);
        case TensorShape::CA: return c(t[0]) + " (x) " + a(t[1]);
        default: return a(t[0]) + " (x) " + c(t[1]) + " (x) " + a(t[2]);
    }
}

}  // namespace

ComplexSource twisted_source(TensorShape shape, const Twist& tw) {
    auto x = std::make_shared<Ctx>();
    x->t = tw;
    for (size_t g = 0; g < tw.src.q.gens.size(); ++g) {
        x->tv.push_back(tw.value((int)g));
        x->dlt.push_back(odelta(tw, (int)g));
    }
    ComplexSource s;
    s.f = tw.tgt.f;
    s.provenance = "twisted tensor " + shape_name(shape);
    s.label = [x, shape](const Tensor& t) { return tlabel(*x, t, shape); };
    const Field f = tw.tgt.f;

    if (shape == TensorShape::AC) {
        s.basis = [x](int k, size_t n) {
            std::vector<Tensor> out;
            for (auto& c : x->cbasis())
                for (auto& a : x->abasis(k - x->cdeg(c), n))
                    if (word_dst(x->aq(), a) == x->csrc(c)) out.push_back({a, c});
            return out;
        };
        s.d = [x, f](const Tensor& t) {
            TensorElem r;
            const Word &a = t[0], &c = t[1];
            put2(r, x->d(x->aw(a)), c, Scalar(f, 1));
            if (c.empty()) return r;
            int g = c.g[0];
            Scalar sa = sgn(f, x->adeg(a));
            put2(r, x->p(x->aw(a), x->tv[g]), Word::idem(x->cdst(c)), sa * sgn(f, x->cdeg(c)));
            left_terms(*x, g, x->aw(a), [&](const Element& e, const Word& c1, const Scalar& k, size_t) {
                put2(r, e, c1, sa * k);
            });
            return r;
        };
        s.size_bound = [x](int k) -> std::optional<size_t> {
            size_t m = 0;
            for (auto& c : x->cbasis()) {
                auto b = x->abound(k - x->cdeg(c));
                if (!b) return std::nullopt;
                m = std::max(m, *b);
            }
            return m;
        };
        return s;
    }

    if (shape == TensorShape::CA) {
        s.basis = [x](int k, size_t n) {
            std::vector<Tensor> out;
            for (auto& c : x->cbasis())
                for (auto& a : x->abasis(k - x->cdeg(c), n))
                    if (word_src(x->aq(), a) == x->cdst(c)) out.push_back({c, a});
            return out;
        };
        s.d = [x, f](const Tensor& t) {
            TensorElem r;
            const Word &c = t[0], &a = t[1];
            Element da = x->d(x->aw(a));
            for (auto& [w, k] : da.terms()) tadd(r, {c, w}, k * sgn(f, x->cdeg(c) + 1));
            if (c.empty()) return r;
            int g = c.g[0];
            Element ta = x->p(x->tv[g], x->aw(a));
            for (auto& [w, k] : ta.terms()) tadd(r, {Word::idem(x->csrc(c)), w}, -k);
            right_terms(*x, g, x->aw(a), [&](const Word& cd, const Element& e, const Scalar& k, size_t) {
                for (auto& [w, kk] : e.terms()) tadd(r, {cd, w}, k * kk);
            });
            return r;
        };
        s.size_bound = [x](int k) -> std::optional<size_t> {
            size_t m = 0;
            for (auto& c : x->cbasis()) {
                auto b = x->abound(k - x->cdeg(c));
                if (!b) return std::nullopt;
                m = std::max(m, *b);
            }
            return m;
        };
        return s;
    }

    s.basis = [x](int k, size_t n) {
        std::vector<Tensor> out;
        auto [lo, hi] = x->arange(n);
        for (auto& c : x->cbasis())
            for (int ka = lo; ka <= hi; ++ka)
                for (auto& a : x->abasis(ka, n)) {
                    if (word_dst(x->aq(), a) != x->csrc(c)) continue;
                    size_t wa = x->aweight(a);
                    for (auto& b : x->abasis(k - x->cdeg(c) - ka, n - wa))
                        if (word_src(x->aq(), b) == x->cdst(c)) out.push_back({a, c, b});
                }
        return out;
    };
    s.d = [x, f](const Tensor& t) {
        TensorElem r;
        const Word &a = t[0], &c = t[1], &b = t[2];
        Element ea = x->aw(a), eb = x->aw(b);
        put3(r, x->d(ea), c, eb, Scalar(f, 1));
        Scalar sa = sgn(f, x->adeg(a));
        put3(r, ea, c, x->d(eb), sa * sgn(f, x->cdeg(c) + 1));
        if (c.empty()) return r;
        int g = c.g[0];
        put3(r, x->p(ea, x->tv[g]), Word::idem(x->cdst(c)), eb, sa * sgn(f, x->cdeg(c)));
        left_terms(*x, g, ea, [&](const Element& e, const Word& c1, const Scalar& k, size_t) {
            put3(r, e, c1, eb, sa * k);
        });
        put3(r, ea, Word::idem(x->csrc(c)), x->p(x->tv[g], eb), sa);
        right_terms(*x, g, eb, [&](const Word& cd, const Element& e, const Scalar& k, size_t len) {
            if (len >= 2) put3(r, ea, cd, e, sa * k);
        });
        return r;
    };
    s.size_bound = [x](int) -> std::optional<size_t> {
        if (x->t.tgt.free) return std::nullopt;
        return 2;
    };
    return s;
}

ChainWindow twisted_tensor(TensorShape shape, const Twist& t, int dmin, int dmax, std::optional<size_t> max_len) {
    auto rep = verify_twist(t);
    if (!rep.ok)
        throw algebra_error("twisted tensor: the twisting cochain does not verify (" + rep.residues[0].where + ": " +
                            rep.residues[0].residue + ")");
    auto w = assemble_window(twisted_source(shape, t), dmin, dmax, max_len);
    auto sq = check_d_squared(w);
    if (!sq.ok && !sq.clipped)
        throw algebra_error("twisted tensor: d^t d^t != 0 on " + sq.witnesses[0].where + ": " + sq.witnesses[0].residue);
    return w;
}

std::string verdict_name(KoszulVerdict v) {
    switch (v) {
        case KoszulVerdict::AcyclicInWindow: return "acyclic_in_window";
        case KoszulVerdict::Fails: return "fails";
        default: return "inconclusive";
    }
}

namespace {

// a cycle in degree k that is not a boundary (and, in degree 0, not a multiple of the e (x) e classes)
std::optional<std::string> stray_cycle(const ChainWindow& w, int k) {
    auto ker = solve_linear(w.dmat(k)).kernel_basis;
    const SparseMatrix& in = w.dmat(k - 1);
    int n = w.dim(k);
    std::vector<int> units;
    if (k == 0)
        for (int i = 0; i < n; ++i) {
            auto& t = w.basis.at(k)[i];
            if (std::all_of(t.begin(), t.end(), [](const Word& x) { return x.empty(); })) units.push_back(i);
        }
    SparseMatrix m(w.f, n, in.cols() + (int)units.size());
    for (auto& [r, row] : in.row_map())
        for (auto& [c, v] : row) m.add(r, c, v);
    for (size_t j = 0; j < units.size(); ++j) m.add(units[j], in.cols() + (int)j, Scalar(w.f, 1));
    for (auto& z : ker) {
        if (solve_linear(m, z).solution) continue;
        std::string s;
        for (int i = 0; i < n; ++i) {
            if (z[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += (z[i].is_one() ? "" : "(" + z[i].str() + ") ") + w.labels.at(k)[i];
        }
        return s;
    }
    return std::nullopt;
}

}  // namespace

KoszulResult koszulity_verdict(const Twist& t, int dmin, int dmax, std::optional<size_t> max_len) {
    KoszulResult res;
    ChainWindow w;
    try {
        w = twisted_tensor(TensorShape::AC, t, dmin, dmax, max_len);
        res.betti = betti(w);
    } catch (const algebra_error& e) {
        res.verdict = KoszulVerdict::Inconclusive;
        res.detail = e.what();
        return res;
    }
    res.certified = w.certified;
    bool all_cert = true, mismatch_cert = false, mismatch = false;
    for (int k = dmin; k <= dmax; ++k) {
        int exp = 0;
        if (k == 0)
            for (int v = 0; v < t.tgt.q.nv() && v < t.src.q.nv(); ++v) ++exp;
        res.expected[k] = exp;
        bool cert = w.certified[k];
        all_cert &= cert;
        if (res.betti[k] != exp) {
            mismatch = true;
            if (cert && !mismatch_cert) {
                mismatch_cert = true;
                auto z = stray_cycle(w, k);
                res.witness = {k, z ? *z : "the class of e (x) e is a boundary"};
            }
        }
    }
    std::string win = "degrees [" + std::to_string(dmin) + ", " + std::to_string(dmax) + "], max_len " +
                      std::to_string(w.max_len);
    if (mismatch_cert) {
        res.verdict = KoszulVerdict::Fails;
        res.detail = "homology differs from the ground ring in certified degree " +
                     std::to_string(res.witness->first) + " on " + win;
    } else if (!all_cert) {
        res.verdict = KoszulVerdict::Inconclusive;
        res.detail = std::string(mismatch ? "homology differs from the ground ring only in degrees"
                                          : "homology matches the ground ring, but some degrees are") +
                     " clipped by the length bound; window-relative result on " + win;
    } else {
        res.verdict = KoszulVerdict::AcyclicInWindow;
        res.detail = "homology is the ground ring in degree 0 and vanishes elsewhere on " + win;
    }
    return res;
}

}  // namespace kk

#include "koszulkit/barcobar.hpp"

#include <memory>

namespace kk {

namespace {

Scalar sgn(Field f, long e) { return Scalar(f, (e % 2 == 0) ? 1 : -1); }

Word slice(const Word& w, size_t a, size_t b) {
    Word r;
    r.g.assign(w.g.begin() + a, w.g.begin() + b);
    return r;
}

}  // namespace

BarObject bar(const AInfAlg& a, size_t max_len) {
    for (auto& [g, v] : a.augmentation)
        if (!v.is_zero()) throw algebra_error("bar: algebra is not strictly augmented; strictify first");
    for (auto& [in, out] : a.ops)
        for (auto& [w, c] : out.terms())
            if (w.empty()) throw algebra_error("bar: operation with unit output; the augmentation ideal is not closed");
    BarObject b;
    b.src = a;
    b.max_len = max_len;
    return b;
}

Element BarObject::b(const Word& w) const {
    const Field f = src.f;
    Element r(f);
    size_t d = w.len();
    // w = a_d ... a_1 with a_k at position d - k
    for (size_t i = 1; i <= d; ++i)
        for (size_t j = 0; j + i <= d; ++j) {
            size_t lo = d - j - i, hi = d - j;
            std::vector<Word> in;
            for (size_t k = lo; k < hi; ++k) in.push_back(Word::letter(w.g[k]));
            Element m = src.m(in);
            if (m.is_zero()) continue;
            long e = -(long)j;
            for (size_t k = hi; k < d; ++k) e += src.q.gens[w.g[k]].degree;
            Scalar s = sgn(f, e);
            for (auto& [o, c] : m.terms()) {
                Word nw = slice(w, 0, lo);
                nw.g.insert(nw.g.end(), o.g.begin(), o.g.end());
                nw.g.insert(nw.g.end(), w.g.begin() + hi, w.g.end());
                r.add(nw, s * c);
            }
        }
    return r;
}

std::vector<std::tuple<Word, Word, Scalar>> BarObject::delta2(const Word& w) const {
    std::vector<std::tuple<Word, Word, Scalar>> out;
    for (size_t cut = 1; cut < w.len(); ++cut) {
        Word l = slice(w, 0, cut), r = slice(w, cut, w.len());
        out.emplace_back(l, r, sgn(src.f, degree(r)));
    }
    return out;
}

ComplexSource bar_source(const BarObject& b) {
    ComplexSource s;
    s.f = b.src.f;
    s.provenance = "bar construction";
    auto bo = std::make_shared<BarObject>(b);
    s.basis = [bo](int k, size_t n) {
        std::vector<Tensor> out;
        for (auto& w : enumerate_weighted(bo->src.q, k, std::min(n, bo->max_len), -1)) out.push_back(Tensor{w});
        return out;
    };
    s.d = [bo](const Tensor& t) {
        TensorElem r;
        if (t[0].empty()) return r;
        Element bw = bo->b(t[0]);
        for (auto& [w, c] : bw.terms()) tadd(r, {w}, c);
        return r;
    };
    s.label = [bo](const Tensor& t) {
        if (t[0].empty()) return "e" + bo->src.q.ring.vertices[t[0].v];
        return "[" + word_str(bo->src.q, t[0], "|") + "]";
    };
    s.size_bound = [bo](int k) -> std::optional<size_t> {
        auto wb = weight_bound(bo->src.q, k, -1);
        if (wb && *wb > bo->max_len) return std::nullopt;
        return wb;
    };
    return s;
}

AInfCoalg bar_coalgebra(const AInfAlg& a, size_t max_len) {
    BarObject bo = bar(a, max_len);
    AInfCoalg c;
    c.f = a.f;
    c.q.ring = a.q.ring;
    std::map<Word, int> id;
    // every composable word of length 1..max_len
    std::vector<Word> layer;
    for (size_t g = 0; g < a.q.gens.size(); ++g) layer.push_back(Word::letter((int)g));
    for (size_t len = 1; len <= max_len && !layer.empty(); ++len) {
        std::vector<Word> next;
        for (auto& w : layer) {
            id[w] = (int)c.q.gens.size();
            GenSymbol s;
            s.name = "[" + word_str(a.q, w, "|") + "]";
            s.src = word_src(a.q, w);
            s.dst = word_dst(a.q, w);
            s.degree = bo.degree(w);
            s.weight = (int)len;
            c.q.gens.push_back(s);
            if (len < max_len)
                for (size_t g = 0; g < a.q.gens.size(); ++g)
                    if (a.q.gens[g].src == s.dst) {
                        Word n = w;
                        n.g.push_back((int)g);
                        next.push_back(n);
                    }
        }
        layer = std::move(next);
    }
    for (auto& [w, gid] : id) {
        Element d(c.f);
        Element bw = bo.b(w);
        for (auto& [x, k] : bw.terms()) d.add(Word::letter(id.at(x)), k);
        for (auto& [l, r, s] : bo.delta2(w)) d.add(Word{{id.at(l), id.at(r)}, -1}, s);
        if (!d.is_zero()) c.delta[gid] = d;
    }
    return c;
}

namespace {

CobarObject build_cobar(const AInfCoalg& c) {
    validate_coalg(c);
    CobarObject o;
    o.src = c;
    o.alg.f = c.f;
    o.alg.q = c.q;
    for (auto& g : o.alg.q.gens) g.degree += 1;
    o.alg.d.rule = Leibniz::Right;
    for (size_t g = 0; g < c.q.gens.size(); ++g) {
        auto it = c.delta.find((int)g);
        o.alg.d.images[(int)g] = it == c.delta.end() ? Element(c.f) : it->second;
    }
    return o;
}

}  // namespace

CobarObject cobar(const AInfCoalg& c) {
    if (!c.conilpotency_order()) throw algebra_error("cobar: coalgebra is not conilpotent; use the completed cobar");
    return build_cobar(c);
}

CobarObject completed_cobar(const AInfCoalg& c, size_t max_len) {
    auto o = build_cobar(c);
    o.completed_len = max_len;
    return o;
}

ChainWindow cobar_window(const CobarObject& o, int dmin, int dmax, std::optional<size_t> max_len) {
    if (!max_len) max_len = o.completed_len;
    auto s = dga_source(o.alg);
    s.provenance = o.completed_len ? "completed cobar" : "cobar";
    return assemble_window(s, dmin, dmax, max_len);
}

std::map<std::pair<int, size_t>, size_t> length_table(const CobarObject& o, int dmin, int dmax, size_t max_len) {
    std::map<std::pair<int, size_t>, size_t> t;
    for (int k = dmin; k <= dmax; ++k)
        for (auto& w : enumerate_weighted(o.alg.q, k, max_len)) t[{k, w.len()}]++;
    return t;
}

Stabilization stabilization(const CobarObject& o, int dmin, int dmax, const std::vector<size_t>& lens) {
    Stabilization s;
    for (size_t L : lens) {
        auto w = cobar_window(o, dmin, dmax, L);
        s.rows.push_back({L, betti(w)});
    }
    s.stable = s.rows.size() >= 2 && s.rows[s.rows.size() - 1].second == s.rows[s.rows.size() - 2].second;
    s.note = s.stable ? "homology agrees on the last two truncations (sampled, not a proof of completeness)"
                      : "homology still changes with the truncation length";
    return s;
}

TwistingCochain universal_cochain(const CobarObject& o) {
    TwistingCochain t;
    t.src = o.src.q;
    t.f = o.src.f;
    for (size_t g = 0; g < t.src.gens.size(); ++g) t.t[(int)g] = Element::word(t.f, Word::letter((int)g));
    return t;
}

std::map<int, Element> universal_bar_cochain(const AInfCoalg& barc, const AInfAlg& a) {
    std::map<int, Element> t;
    for (size_t g = 0; g < barc.q.gens.size(); ++g) {
        const auto& s = barc.q.gens[g];
        if (s.weight.value_or(1) != 1) continue;
        std::string inner = s.name.substr(1, s.name.size() - 2);
        t[(int)g] = Element::word(a.f, Word::letter(a.q.gen(inner)));
    }
    return t;
}

Element apply_algebra_map(const Quiver& tgt, const std::map<int, Element>& images, const Element& x, Field f) {
    Element r(f);
    for (auto& [w, c] : x.terms()) {
        if (w.empty()) {
            r.add(Word::idem(w.v), c);
            continue;
        }
        Element acc(f);
        bool first = true;
        for (int g : w.g) {
            auto it = images.find(g);
            if (it == images.end()) {
                acc = Element(f);
                break;
            }
            acc = first ? it->second : mul(tgt, acc, it->second);
            first = false;
        }
        r.add(acc, c);
    }
    return r;
}

CheckResult check_dga_map(const FreeDGA& src, const FreeDGA& tgt, const std::map<int, Element>& images) {
    CheckResult r;
    for (size_t g = 0; g < src.q.gens.size(); ++g) {
        ++r.checked;
        Element x = Element::word(src.f, Word::letter((int)g));
        Element lhs = apply_algebra_map(tgt.q, images, src.m1(x), tgt.f);
        Element rhs = tgt.m1(apply_algebra_map(tgt.q, images, x, tgt.f));
        Element diff = lhs - rhs;
        if (!diff.is_zero()) {
            r.ok = false;
            r.witnesses.push_back({"f m1 - m1 f on " + src.q.gens[g].name, elem_str(tgt.q, diff)});
        }
    }
    return r;
}

std::map<int, Element> induced_map(const CobarObject& o, const TwistingCochain& t) {
    std::map<int, Element> m;
    for (size_t g = 0; g < o.alg.q.gens.size(); ++g) {
        auto it = t.t.find((int)g);
        m[(int)g] = it == t.t.end() ? Element(t.f) : it->second;
    }
    return m;
}

AInfAlg as_ainf(const FreeDGA& a, size_t max_len) {
    AInfAlg r;
    r.f = a.f;
    r.q.ring = a.q.ring;
    std::map<Word, int> id;
    std::vector<Word> words;
    std::vector<Word> layer;
    for (size_t g = 0; g < a.q.gens.size(); ++g) layer.push_back(Word::letter((int)g));
    for (size_t len = 1; len <= max_len && !layer.empty(); ++len) {
        std::vector<Word> next;
        for (auto& w : layer) {
            id[w] = (int)r.q.gens.size();
            words.push_back(w);
            r.q.gens.push_back({word_str(a.q, w, "*"), word_src(a.q, w), word_dst(a.q, w), word_degree(a.q, w), {}});
            if (len < max_len)
                for (size_t g = 0; g < a.q.gens.size(); ++g)
                    if (a.q.gens[g].src == word_dst(a.q, w)) {
                        Word n = w;
                        n.g.push_back((int)g);
                        next.push_back(n);
                    }
        }
        layer = std::move(next);
    }
    auto intern = [&](const Element& x) {
        Element out(a.f);
        for (auto& [w, c] : x.terms()) {
            if (w.empty()) throw algebra_error("as_ainf: differential has a constant term; strictify the augmentation first");
            auto it = id.find(w);
            if (it != id.end()) out.add(Word::letter(it->second), c);
        }
        return out;
    };
    for (auto& w : words) {
        Element m1 = intern(a.m1(Element::word(a.f, w)));
        if (!m1.is_zero()) r.ops[Word::letter(id[w])] = m1;
    }
    for (auto& x : words)
        for (auto& y : words) {
            if (x.len() + y.len() > max_len || word_dst(a.q, x) != word_src(a.q, y)) continue;
            Element m2 = intern(a.m2(Element::word(a.f, x), Element::word(a.f, y)));
            if (!m2.is_zero()) r.ops[Word{{id[x], id[y]}, -1}] = m2;
        }
    return r;
}

namespace {

// DG product of A from m2: x y = (-1)^{|y|} m2(x, y)
Element dg_product(const AInfAlg& a, const Element& x, const Element& y) {
    Element r(a.f);
    for (auto& [wx, cx] : x.terms())
        for (auto& [wy, cy] : y.terms()) {
            Element m = a.m({wx, wy});
            if (m.is_zero()) continue;
            r.add(m, cx * cy * sgn(a.f, word_degree(a.q, wy)));
        }
    return r;
}

}  // namespace

Comparison counit_map(const AInfAlg& a, size_t bar_len, int dmin, int dmax) {
    if (a.max_arity() > 2) throw algebra_error("counit map: algebra has operations beyond m2");
    auto bc = bar_coalgebra(a, bar_len);
    auto ob = cobar(bc);
    Comparison c;
    c.src = cobar_window(ob, dmin, dmax, bar_len);
    c.tgt = assemble_window(alg_source(a), dmin, dmax, std::nullopt);
    auto t = universal_bar_cochain(bc, a);
    c.map = assemble_map(c.src, c.tgt, [&](const Tensor& x) {
        TensorElem r;
        const Word& w = x[0];
        if (w.empty()) {
            tadd(r, x, Scalar(a.f, 1));
            return r;
        }
        Element acc(a.f);
        for (size_t i = 0; i < w.len(); ++i) {
            auto it = t.find(w.g[i]);
            if (it == t.end()) return r;
            acc = i == 0 ? it->second : dg_product(a, acc, it->second);
        }
        for (auto& [ow, k] : acc.terms()) tadd(r, {ow}, k);
        return r;
    });
    c.verdict = quasi_iso(c.src, c.tgt, c.map);
    return c;
}

Comparison unit_map(const AInfCoalg& cg, size_t inner_len, int dmin, int dmax, std::optional<size_t> bar_len) {
    auto oc = cobar(cg);
    auto inner = as_ainf(oc.alg, inner_len);
    auto bo = bar(inner, bar_len.value_or(SIZE_MAX));
    Comparison c;
    c.src = assemble_window(coalg_source(cg), dmin, dmax, std::nullopt);
    c.tgt = assemble_window(bar_source(bo), dmin, dmax, bar_len);
    c.map = assemble_map(c.src, c.tgt, [&](const Tensor& x) {
        TensorElem r;
        const Word& w = x[0];
        if (w.empty()) tadd(r, x, Scalar(cg.f, 1));
        else tadd(r, {Word::letter(inner.q.gen(cg.q.gens[w.g[0]].name))}, Scalar(cg.f, 1));
        return r;
    });
    c.verdict = quasi_iso(c.src, c.tgt, c.map);
    return c;
}

}  // namespace kk

#include "koszulkit/ncalg.hpp"

#include <algorithm>
#include <deque>

namespace kk {

int Quiver::find(const std::string& name) const {
    for (size_t i = 0; i < gens.size(); ++i)
        if (gens[i].name == name) return (int)i;
    return -1;
}

int Quiver::gen(const std::string& name) const {
    int i = find(name);
    if (i < 0) throw algebra_error("unknown generator: " + name);
    return i;
}

int word_src(const Quiver& q, const Word& w) { return w.empty() ? w.v : q.gens[w.g.front()].src; }
int word_dst(const Quiver& q, const Word& w) { return w.empty() ? w.v : q.gens[w.g.back()].dst; }

int word_degree(const Quiver& q, const Word& w, int shift) {
    int d = 0;
    for (int i : w.g) d += q.gens[i].degree + shift;
    return d;
}

std::string word_str(const Quiver& q, const Word& w, const std::string& sep) {
    if (w.empty()) return "e(" + q.ring.vertices.at(w.v) + ")";
    std::string s;
    for (size_t i = 0; i < w.g.size(); ++i) {
        if (i) s += sep.empty() ? " " : sep;
        s += q.gens[w.g[i]].name;
    }
    return s;
}

std::optional<Word> concat(const Quiver& q, const Word& a, const Word& b) {
    if (word_dst(q, a) != word_src(q, b)) return std::nullopt;
    if (a.empty()) return b;
    if (b.empty()) return a;
    Word w;
    w.g = a.g;
    w.g.insert(w.g.end(), b.g.begin(), b.g.end());
    return w;
}

Scalar Element::coeff(const Word& w) const {
    auto it = t_.find(w);
    return it == t_.end() ? Scalar(f_) : it->second;
}

void Element::add(const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = t_.find(w);
    if (it == t_.end()) {
        t_.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

void Element::add(const Element& o, const Scalar& c) {
    for (auto& [w, v] : o.t_) add(w, v * c);
}

Element Element::operator+(const Element& o) const {
    Element r = *this;
    r += o;
    return r;
}

Element Element::operator-(const Element& o) const {
    Element r = *this;
    r -= o;
    return r;
}

Element Element::operator-() const {
    Element r(f_);
    for (auto& [w, v] : t_) r.t_.emplace(w, -v);
    return r;
}

Element Element::operator*(const Scalar& c) const {
    Element r(f_);
    if (c.is_zero()) return r;
    for (auto& [w, v] : t_) r.t_.emplace(w, v * c);
    return r;
}

Element& Element::operator+=(const Element& o) {
    for (auto& [w, v] : o.t_) add(w, v);
    return *this;
}

Element& Element::operator-=(const Element& o) {
    for (auto& [w, v] : o.t_) add(w, -v);
    return *this;
}

size_t Element::max_len() const {
    size_t m = 0;
    for (auto& [w, v] : t_) m = std::max(m, w.len());
    return m;
}

Element Element::to_field(Field f) const {
    Element r(f);
    for (auto& [w, v] : t_) r.add(w, Scalar(f, v.to_mpq()));
    return r;
}

std::string elem_str(const Quiver& q, const Element& x, const std::string& sep) {
    if (x.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (auto& [w, c] : x.terms()) {
        std::string cs = c.str();
        bool neg = c.field().kind == Field::Rationals && c.sign() < 0;
        if (neg) cs = cs.substr(1);
        if (first)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        first = false;
        std::string ws = word_str(q, w, sep);
        if (cs == "1")
            s += ws;
        else
            s += cs + (cs.find('/') != std::string::npos ? " " : "") + "*" + ws;
    }
    return s;
}

Element mul(const Quiver& q, const Element& a, const Element& b) {
    if (a.field() != b.field()) throw field_error("mul: field mismatch");
    Element r(a.field());
    for (auto& [wa, ca] : a.terms())
        for (auto& [wb, cb] : b.terms())
            if (auto w = concat(q, wa, wb)) r.add(*w, ca * cb);
    return r;
}

Element idempotent(const Quiver& q, Field f, int v) {
    if (v < 0 || v >= q.nv()) throw algebra_error("no such vertex");
    return Element::word(f, Word::idem(v));
}

static int gdeg(const Quiver& q, int i) { return q.gens[i].degree; }

Element apply_derivation(const Quiver& q, const Derivation& d, const Word& w, Field f) {
    Element r(f);
    if (w.empty()) return r;
    int total = word_degree(q, w);
    int before = 0;
    for (size_t i = 0; i < w.g.size(); ++i) {
        int gi = w.g[i];
        auto it = d.images.find(gi);
        if (it == d.images.end()) throw algebra_error("derivation has no image for generator " + q.gens[gi].name);
        int passed = d.rule == Leibniz::Left ? before : total - before - gdeg(q, gi);
        before += gdeg(q, gi);
        if (it->second.is_zero()) continue;
        Scalar sgn(f, ((d.degree * passed) % 2 == 0) ? 1 : -1);
        Word left{{w.g.begin(), w.g.begin() + i}, -1}, right{{w.g.begin() + i + 1, w.g.end()}, -1};
        if (left.empty()) left.v = q.gens[gi].src;
        if (right.empty()) right.v = q.gens[gi].dst;
        for (auto& [m, c] : it->second.terms()) {
            auto lm = concat(q, left, m);
            if (!lm) continue;
            auto full = concat(q, *lm, right);
            if (full) r.add(*full, sgn * c);
        }
    }
    return r;
}

Element apply_derivation(const Quiver& q, const Derivation& d, const Element& x) {
    Element r(x.field());
    for (auto& [w, c] : x.terms()) r.add(apply_derivation(q, d, w, x.field()), c);
    return r;
}

std::optional<int> elem_degree(const Quiver& q, const Element& x) {
    std::optional<int> deg;
    for (auto& [w, c] : x.terms()) {
        int d = word_degree(q, w);
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg;
}

void check_substitution(const Quiver& q, const std::map<int, Element>& subst) {
    for (auto& [g, img] : subst) {
        const auto& s = q.gens.at(g);
        for (auto& [w, c] : img.terms()) {
            if (word_src(q, w) != s.src || word_dst(q, w) != s.dst)
                throw algebra_error("substitution for " + s.name + ": endpoint slot mismatch in " + word_str(q, w));
            if (word_degree(q, w) != s.degree)
                throw algebra_error("substitution for " + s.name + ": degree mismatch in " + word_str(q, w));
        }
    }
}

Element gen_automorphism(const Quiver& q, const std::map<int, Element>& subst, const Element& x) {
    check_substitution(q, subst);
    const Field f = x.field();
    Element r(f);
    for (auto& [w, c] : x.terms()) {
        if (w.empty()) {
            r.add(w, c);
            continue;
        }
        Element acc = Element::word(f, Word::idem(q.gens[w.g.front()].src));
        for (int g : w.g) {
            auto it = subst.find(g);
            acc = mul(q, acc, it == subst.end() ? Element::word(f, Word::letter(g)) : it->second);
            if (acc.is_zero()) break;
        }
        r.add(acc, c);
    }
    return r;
}

NormalForm normal_form(const Quiver& q, const std::vector<RewriteRule>& rules, const Element& x, size_t max_len,
                       size_t step_limit) {
    const Field f = x.field();
    NormalForm out{Element(f), true};
    std::map<Word, Scalar> pending(x.terms().begin(), x.terms().end());
    size_t steps = 0;
    while (!pending.empty()) {
        auto it = pending.begin();
        Word w = it->first;
        Scalar c = it->second;
        pending.erase(it);
        if (c.is_zero()) continue;
        if (w.len() > max_len || steps > step_limit) {
            out.stable = false;
            out.nf.add(w, c);
            continue;
        }
        // leftmost match; among rules at the same start, the shortest lhs (innermost)
        size_t best_pos = SIZE_MAX, best_len = SIZE_MAX;
        const RewriteRule* best = nullptr;
        for (auto& r : rules) {
            size_t L = r.lhs.len();
            if (L == 0 || L > w.len()) continue;
            for (size_t p = 0; p + L <= w.len() && p <= best_pos; ++p) {
                if (!std::equal(r.lhs.g.begin(), r.lhs.g.end(), w.g.begin() + p)) continue;
                if (p < best_pos || L < best_len) best_pos = p, best_len = L, best = &r;
                break;
            }
        }
        if (!best) {
            out.nf.add(w, c);
            continue;
        }
        ++steps;
        Word left{{w.g.begin(), w.g.begin() + best_pos}, -1}, right{{w.g.begin() + best_pos + best_len, w.g.end()}, -1};
        if (left.empty()) left.v = word_src(q, best->lhs);
        if (right.empty()) right.v = word_dst(q, best->lhs);
        Element repl = mul(q, mul(q, Element::word(f, left), best->rhs), Element::word(f, right));
        for (auto& [rw, rc] : repl.terms()) {
            auto [pit, ins] = pending.emplace(rw, rc * c);
            if (!ins) pit->second += rc * c;
        }
    }
    return out;
}

std::vector<Word> enumerate_words(const Quiver& q, int degree, size_t max_len, int shift, int src, int dst,
                                  bool include_idempotents) {
    std::vector<Word> out;
    if (degree == 0 && include_idempotents)
        for (int v = 0; v < q.nv(); ++v)
            if ((src < 0 || src == v) && (dst < 0 || dst == v)) out.push_back(Word::idem(v));
    if (q.gens.empty() || max_len == 0) return out;
    int lo = INT32_MAX, hi = INT32_MIN;
    for (auto& g : q.gens) lo = std::min(lo, g.degree + shift), hi = std::max(hi, g.degree + shift);
    std::vector<std::vector<int>> by_src(q.nv());
    for (size_t i = 0; i < q.gens.size(); ++i) by_src[q.gens[i].src].push_back((int)i);
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int at, int deg) {
        if (!cur.empty() && deg == degree && (dst < 0 || at == dst)) out.push_back({cur, -1});
        if (cur.size() == max_len) return;
        long rem = (long)(max_len - cur.size());
        // remaining letters can move the degree by at most rem*lo .. rem*hi (or stop now)
        long need = (long)degree - deg;
        if (need < std::min(0L, rem * lo) || need > std::max(0L, rem * hi)) return;
        for (int g : by_src[at]) {
            cur.push_back(g);
            rec(q.gens[g].dst, deg + q.gens[g].degree + shift);
            cur.pop_back();
        }
    };
    for (int v = 0; v < q.nv(); ++v)
        if (src < 0 || src == v) rec(v, 0);
    std::sort(out.begin(), out.end());
    return out;
}

PrimitiveResult find_primitive(const Quiver& q, const Derivation& d, const Element& target, int degree,
                               size_t max_len) {
    const Field f = target.field();
    PrimitiveResult res;
    if (!apply_derivation(q, d, target).is_zero()) {
        res.target_closed = false;
        throw algebra_error("find_primitive: target is not closed");
    }
    if (target.is_zero()) {
        res.primitive = Element(f);
        return res;
    }
    int s = word_src(q, target.terms().begin()->first), t = word_dst(q, target.terms().begin()->first);
    auto cands = enumerate_words(q, degree, max_len, 0, s, t);
    res.candidates = cands.size();
    std::map<Word, int> rows;
    std::vector<Element> images;
    for (auto& w : cands) {
        images.push_back(apply_derivation(q, d, w, f));
        for (auto& [iw, c] : images.back().terms()) rows.emplace(iw, 0);
    }
    for (auto& [w, c] : target.terms()) rows.emplace(w, 0);
    int k = 0;
    for (auto& [w, i] : rows) i = k++;
    SparseMatrix m(f, (int)rows.size(), (int)cands.size());
    for (size_t j = 0; j < cands.size(); ++j)
        for (auto& [iw, c] : images[j].terms()) m.add(rows[iw], (int)j, c);
    std::vector<Scalar> b(rows.size(), Scalar(f));
    for (auto& [w, c] : target.terms()) b[rows[w]] = c;
    auto sol = solve_linear(m, b);
    if (!sol.solution) return res;
    Element x(f);
    for (size_t j = 0; j < cands.size(); ++j) x.add(cands[j], (*sol.solution)[j]);
    if (apply_derivation(q, d, x) != target) throw algebra_error("find_primitive: post-verification failed");
    res.primitive = x;
    return res;
}

}  // namespace kk
